// Card shuffle definitions and the lifted chain.
//
// A deck of n cards is a permutation: order[i] is the card at position i+1,
// position 1 = top, position n = bottom. Three shuffles act on it:
//
//   rudvalis(p):    swap-then-shift-left w.p. p, shift-left w.p. 1-p
//   shift_or_swap:  shift-left w.p. 1/2, swap w.p. 1/2
//   symmetrized:    shift-left / shift-right / swap / hold, 1/4 each (n odd)
//
// shift-left moves every card up one position cyclically (top wraps to bottom),
// shift-right is its inverse, swap exchanges the top and bottom cards, and
// swap-then-shift-left composes swap followed by shift-left in one step.
//
// The lifted chain augments the deck with a winding count y that increments on
// shift-left and decrements on shift-right (mod n). Each card then carries a
// phase z = (x - x0 + y) mod n, where x is its current position and x0 its
// start position; z only changes when the card itself crosses the top/bottom
// boundary through a swap.
#pragma once

#include "rudvalis/rng.hpp"

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rudvalis {

enum class Move { shift_left, shift_right, swap_ends, hold, swap_shift_left };

enum class ShuffleKind { rudvalis, shift_or_swap, symmetrized };

const char* move_name(Move m);
const char* kind_name(ShuffleKind k);

struct Deck {
    std::vector<int> order; // order[i] = card at position i+1, cards labelled 1..n

    static Deck identity(int n);
    int size() const { return static_cast<int>(order.size()); }
    bool is_permutation() const;
    bool operator==(const Deck&) const = default;
};

struct ShuffleSpec {
    ShuffleKind kind;
    int n = 0;
    double p = 0.0; // rudvalis swap probability, unused otherwise
    std::vector<std::pair<Move, double>> moves;

    static ShuffleSpec rudvalis(int n, double p);
    static ShuffleSpec shift_or_swap(int n); // even n allowed but periodic, see README
    static ShuffleSpec symmetrized(int n);   // throws std::invalid_argument for even n

    // winding count is deterministic (y = t mod n) when every move shifts left
    bool deterministic_winding() const;
};

struct LiftedState {
    Deck deck;
    int y = 0;
    long long t = 0;

    static LiftedState start(int n);
    bool operator==(const LiftedState&) const = default;
};

// single tracked card: current position x, phase z, start position x0
struct CardPhase {
    int x = 1;
    int z = 0;
    int x0 = 1;
    bool operator==(const CardPhase&) const = default;
};

Deck apply_move(const Deck& d, Move m);
CardPhase card_phase_update(const CardPhase& c, Move m, int n);

int winding_increment(Move m); // +1 shift-left, -1 shift-right, 0 otherwise

Move sample_move(const ShuffleSpec& spec, RngStream& rng);

// advances the lifted state by one sampled move and returns the move taken
Move step_lifted(LiftedState& state, const ShuffleSpec& spec, RngStream& rng);

// replays the moves against tracked per-card phases and checks them against the
// deck trajectory: for every snapshot the tracked card must sit at its recorded
// position with z = (x - x0 + y) mod n
bool track_consistency(std::span<const std::pair<LiftedState, Move>> trajectory, int card);

} // namespace rudvalis
