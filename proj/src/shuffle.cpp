#include "rudvalis/shuffle.hpp"

#include <algorithm>
#include <cmath>

namespace rudvalis {

const char* move_name(Move m) {
    switch (m) {
        case Move::shift_left: return "shift_left";
        case Move::shift_right: return "shift_right";
        case Move::swap_ends: return "swap";
        case Move::hold: return "hold";
        case Move::swap_shift_left: return "swap_shift_left";
    }
    return "?";
}

const char* kind_name(ShuffleKind k) {
    switch (k) {
        case ShuffleKind::rudvalis: return "rudvalis";
        case ShuffleKind::shift_or_swap: return "shift_or_swap";
        case ShuffleKind::symmetrized: return "symmetrized";
    }
    return "?";
}

Deck Deck::identity(int n) {
    Deck d;
    d.order.resize(n);
    for (int i = 0; i < n; ++i) d.order[i] = i + 1;
    return d;
}

bool Deck::is_permutation() const {
    const int n = size();
    std::vector<bool> seen(n, false);
    for (int c : order) {
        if (c < 1 || c > n || seen[c - 1]) return false;
        seen[c - 1] = true;
    }
    return true;
}

static void validate_n(int n) {
    if (n < 3) throw std::invalid_argument("deck size must be at least 3");
}

ShuffleSpec ShuffleSpec::rudvalis(int n, double p) {
    validate_n(n);
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("rudvalis needs p in (0,1)");
    ShuffleSpec s;
    s.kind = ShuffleKind::rudvalis;
    s.n = n;
    s.p = p;
    s.moves = {{Move::swap_shift_left, p}, {Move::shift_left, 1.0 - p}};
    return s;
}

ShuffleSpec ShuffleSpec::shift_or_swap(int n) {
    validate_n(n);
    ShuffleSpec s;
    s.kind = ShuffleKind::shift_or_swap;
    s.n = n;
    s.moves = {{Move::shift_left, 0.5}, {Move::swap_ends, 0.5}};
    return s;
}

ShuffleSpec ShuffleSpec::symmetrized(int n) {
    validate_n(n);
    if (n % 2 == 0) throw std::invalid_argument("symmetrized shuffle needs odd n (period 2 otherwise)");
    ShuffleSpec s;
    s.kind = ShuffleKind::symmetrized;
    s.n = n;
    s.moves = {{Move::shift_left, 0.25},
               {Move::shift_right, 0.25},
               {Move::swap_ends, 0.25},
               {Move::hold, 0.25}};
    return s;
}

bool ShuffleSpec::deterministic_winding() const {
    for (const auto& [m, q] : moves)
        if (winding_increment(m) != 1) return false;
    return true;
}

LiftedState LiftedState::start(int n) {
    return LiftedState{Deck::identity(n), 0, 0};
}

Deck apply_move(const Deck& d, Move m) {
    Deck out = d;
    const int n = d.size();
    switch (m) {
        case Move::shift_left:
            std::rotate(out.order.begin(), out.order.begin() + 1, out.order.end());
            break;
        case Move::shift_right:
            std::rotate(out.order.begin(), out.order.end() - 1, out.order.end());
            break;
        case Move::swap_ends:
            std::swap(out.order.front(), out.order.back());
            break;
        case Move::hold:
            break;
        case Move::swap_shift_left:
            std::swap(out.order.front(), out.order.back());
            std::rotate(out.order.begin(), out.order.begin() + 1, out.order.end());
            break;
    }
    return out;
}

int winding_increment(Move m) {
    switch (m) {
        case Move::shift_left:
        case Move::swap_shift_left: return 1;
        case Move::shift_right: return -1;
        default: return 0;
    }
}

// z = (x - x0 + y) mod n changes only when the card crosses the top/bottom
// boundary via a swap; shifts move x and y together.
CardPhase card_phase_update(const CardPhase& c, Move m, int n) {
    CardPhase out = c;
    switch (m) {
        case Move::shift_left:
            out.x = (c.x == 1) ? n : c.x - 1;
            break;
        case Move::shift_right:
            out.x = (c.x == n) ? 1 : c.x + 1;
            break;
        case Move::swap_ends:
            if (c.x == 1) {
                out.x = n;
                out.z = (c.z + n - 1) % n;
            } else if (c.x == n) {
                out.x = 1;
                out.z = (c.z + 1) % n;
            }
            break;
        case Move::hold:
            break;
        case Move::swap_shift_left:
            if (c.x == 1) {
                out.x = n - 1;
                out.z = (c.z + n - 1) % n;
            } else if (c.x == n) {
                out.x = n;
                out.z = (c.z + 1) % n;
            } else {
                out.x = c.x - 1;
            }
            break;
    }
    return out;
}

Move sample_move(const ShuffleSpec& spec, RngStream& rng) {
    const double u = rng.next_unit();
    double acc = 0.0;
    for (const auto& [m, q] : spec.moves) {
        acc += q;
        if (u < acc) return m;
    }
    return spec.moves.back().first;
}

Move step_lifted(LiftedState& state, const ShuffleSpec& spec, RngStream& rng) {
    const Move m = sample_move(spec, rng);
    state.deck = apply_move(state.deck, m);
    state.y = (state.y + winding_increment(m) + spec.n) % spec.n;
    state.t += 1;
    return m;
}

static int position_of(const Deck& d, int card) {
    for (int i = 0; i < d.size(); ++i)
        if (d.order[i] == card) return i + 1;
    return -1;
}

bool track_consistency(std::span<const std::pair<LiftedState, Move>> trajectory, int card) {
    if (trajectory.empty()) return true;
    const int n = trajectory.front().first.deck.size();
    if (card < 1 || card > n) return false;

    // identity-start convention: card's start position equals its label
    const LiftedState& s0 = trajectory.front().first;
    CardPhase tracked{position_of(s0.deck, card), 0, card};
    tracked.z = (tracked.x - card + s0.y + 2 * n) % n;

    for (std::size_t k = 0; k < trajectory.size(); ++k) {
        const auto& [state, move] = trajectory[k];
        const int x = position_of(state.deck, card);
        if (x != tracked.x) return false;
        if (tracked.z != (x - card + state.y + 2 * n) % n) return false;
        if (k + 1 < trajectory.size()) {
            const LiftedState& next = trajectory[k + 1].first;
            if (apply_move(state.deck, move) != next.deck) return false;
            if (next.y != (state.y + winding_increment(move) + n) % n) return false;
        }
        tracked = card_phase_update(tracked, move, n);
    }
    return true;
}

} // namespace rudvalis
