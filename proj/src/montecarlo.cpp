#include "rudvalis/montecarlo.hpp"

#include <cmath>
#include <numbers>

namespace rudvalis {

PsiWalker::PsiWalker(const EigenSystem& es, long long renorm_interval)
    : es_(&es), n_(es.spec.n), renorm_interval_(renorm_interval) {
    buf_.resize(n_);
    for (int i = 0; i < n_; ++i) buf_[i] = i + 1;
    z_.assign(n_, 0);
    wp_.resize(n_);
    for (int k = 0; k < n_; ++k) wp_[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / n_);
    if (es.spec.kind == ShuffleKind::symmetrized) {
        eit_ = std::polar(1.0, es.theta);
        eitm_ = std::polar(1.0, es.theta * (n_ - 1) / 2.0);
        c_plus_ = 0.5 * (1.0 + es.delta);
        c_minus_ = 0.5 * (1.0 - es.delta);
    } else {
        base_ = es.spec.kind == ShuffleKind::rudvalis ? es.lambda : 2.0 * es.lambda - 1.0;
    }
    renormalize();
}

Deck PsiWalker::deck() const {
    Deck d;
    d.order.resize(n_);
    for (int pos = 1; pos <= n_; ++pos) d.order[pos - 1] = buf_[phys(pos)];
    return d;
}

cxd PsiWalker::psi() const {
    if (es_->spec.kind == ShuffleKind::symmetrized) return c_plus_ * a_acc_ + c_minus_ * b_acc_;
    return psi_acc_;
}

cxd PsiWalker::psi_recomputed() const {
    if (es_->spec.kind == ShuffleKind::symmetrized) {
        cxd a(0.0), b(0.0);
        for (int pos = 1; pos <= n_; ++pos) {
            const int card = buf_[phys(pos)];
            const cxd ph = wp_[z_[card - 1]];
            const cxd osc = std::polar(1.0, es_->theta * (pos - (n_ + 1) / 2.0));
            a += osc * ph;
            b += std::conj(osc) * ph;
        }
        return c_plus_ * a + c_minus_ * b;
    }
    cxd acc(0.0);
    for (int pos = 1; pos <= n_; ++pos) acc += es_->v[pos - 1] * wp_[z_[buf_[phys(pos)] - 1]];
    return acc;
}

void PsiWalker::renormalize() {
    if (es_->spec.kind == ShuffleKind::symmetrized) {
        a_acc_ = b_acc_ = cxd(0.0);
        for (int pos = 1; pos <= n_; ++pos) {
            const int card = buf_[phys(pos)];
            const cxd ph = wp_[z_[card - 1]];
            const cxd osc = std::polar(1.0, es_->theta * (pos - (n_ + 1) / 2.0));
            a_acc_ += osc * ph;
            b_acc_ += std::conj(osc) * ph;
        }
    } else {
        psi_acc_ = psi_recomputed();
    }
}

void PsiWalker::apply(Move m) {
    const auto& v = es_->v;
    const int tc = top_card();
    const int bc = bottom_card();

    if (es_->spec.kind == ShuffleKind::symmetrized) {
        const cxd conj_eit = std::conj(eit_);
        const cxd conj_eitm = std::conj(eitm_);
        switch (m) {
            case Move::shift_left: {
                // top card wraps: s = -(n-1)/2 -> +(n-1)/2, everyone else s -> s-1
                const cxd ph = wp_[z_[tc - 1]];
                a_acc_ = conj_eit * (a_acc_ - conj_eitm * ph) + eitm_ * ph;
                b_acc_ = eit_ * (b_acc_ - eitm_ * ph) + conj_eitm * ph;
                head_ = (head_ + 1) % n_;
                y_ = (y_ + 1) % n_;
                break;
            }
            case Move::shift_right: {
                const cxd ph = wp_[z_[bc - 1]];
                a_acc_ = eit_ * (a_acc_ - eitm_ * ph) + conj_eitm * ph;
                b_acc_ = conj_eit * (b_acc_ - conj_eitm * ph) + eitm_ * ph;
                head_ = (head_ + n_ - 1) % n_;
                y_ = (y_ + n_ - 1) % n_;
                break;
            }
            case Move::swap_ends: {
                const int zt = z_[tc - 1], zb = z_[bc - 1];
                const int zt2 = (zt + n_ - 1) % n_, zb2 = (zb + 1) % n_;
                a_acc_ += -conj_eitm * wp_[zt] - eitm_ * wp_[zb] + eitm_ * wp_[zt2] + conj_eitm * wp_[zb2];
                b_acc_ += -eitm_ * wp_[zt] - conj_eitm * wp_[zb] + conj_eitm * wp_[zt2] + eitm_ * wp_[zb2];
                z_[tc - 1] = zt2;
                z_[bc - 1] = zb2;
                std::swap(buf_[head_], buf_[(head_ + n_ - 1) % n_]);
                break;
            }
            case Move::hold:
                break;
            case Move::swap_shift_left:
                apply(Move::swap_ends);
                --t_; // composed move counts once
                apply(Move::shift_left);
                return;
        }
    } else {
        switch (m) {
            case Move::shift_left: {
                const cxd pht = wp_[z_[tc - 1]], phb = wp_[z_[bc - 1]];
                psi_acc_ = base_ * (psi_acc_ - v[0] * pht - v[n_ - 1] * phb) + v[n_ - 1] * pht +
                           v[n_ - 2] * phb;
                head_ = (head_ + 1) % n_;
                y_ = (y_ + 1) % n_;
                break;
            }
            case Move::shift_right: {
                const cxd pht = wp_[z_[tc - 1]], phb = wp_[z_[bc - 1]];
                const int c2 = buf_[phys(n_ - 1)]; // card at position n-1 wraps to the bottom
                const cxd phc = wp_[z_[c2 - 1]];
                psi_acc_ = (psi_acc_ - v[n_ - 1] * phb - v[n_ - 2] * phc) / base_ + v[0] * phb +
                           v[n_ - 1] * phc;
                (void)pht;
                head_ = (head_ + n_ - 1) % n_;
                y_ = (y_ + n_ - 1) % n_;
                break;
            }
            case Move::swap_ends: {
                const int zt = z_[tc - 1], zb = z_[bc - 1];
                const int zt2 = (zt + n_ - 1) % n_, zb2 = (zb + 1) % n_;
                psi_acc_ += -v[0] * wp_[zt] - v[n_ - 1] * wp_[zb] + v[n_ - 1] * wp_[zt2] + v[0] * wp_[zb2];
                z_[tc - 1] = zt2;
                z_[bc - 1] = zb2;
                std::swap(buf_[head_], buf_[(head_ + n_ - 1) % n_]);
                break;
            }
            case Move::hold:
                break;
            case Move::swap_shift_left: {
                const int zt = z_[tc - 1], zb = z_[bc - 1];
                const int zt2 = (zt + n_ - 1) % n_, zb2 = (zb + 1) % n_;
                psi_acc_ = base_ * (psi_acc_ - v[0] * wp_[zt] - v[n_ - 1] * wp_[zb]) +
                           v[n_ - 2] * wp_[zt2] + v[n_ - 1] * wp_[zb2];
                z_[tc - 1] = zt2;
                z_[bc - 1] = zb2;
                std::swap(buf_[head_], buf_[(head_ + n_ - 1) % n_]);
                head_ = (head_ + 1) % n_;
                y_ = (y_ + 1) % n_;
                break;
            }
        }
    }
    ++t_;
    if (renorm_interval_ > 0 && t_ % renorm_interval_ == 0) renormalize();
}

Move PsiWalker::step(RngStream& rng) {
    const Move m = sample_move(es_->spec, rng);
    apply(m);
    return m;
}

TrialBatch sample_psi(const EigenSystem& es, long long t, int trials, std::uint64_t master_seed,
                      bool parallel) {
    TrialBatch batch{es.spec, t, trials, master_seed, {}};
    batch.psi.resize(trials);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int i = 0; i < trials; ++i) {
        RngStream rng(master_seed, static_cast<std::uint64_t>(i));
        PsiWalker walker(es);
        for (long long s = 0; s < t; ++s) walker.step(rng);
        batch.psi[i] = walker.psi();
    }
    return batch;
}

SeparationResult separation_test(const TrialBatch& batch, const EigenSystem& es,
                                 int stationary_samples, double epsilon) {
    if (stationary_samples <= 0) throw std::invalid_argument("stationary_samples must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
    SeparationResult res;
    res.threshold = std::sqrt(es.r_bound / (es.gamma * epsilon));

    long long hits = 0;
    for (const cxd& val : batch.psi)
        if (std::abs(val) >= res.threshold) ++hits;
    res.p_chain = static_cast<double>(hits) / static_cast<double>(batch.psi.size());

    const int n = es.spec.n;
    const bool det_y = es.spec.deterministic_winding();
    long long st_hits = 0;
    for (int j = 0; j < stationary_samples; ++j) {
        RngStream rng(batch.master_seed, (1ull << 32) + static_cast<std::uint64_t>(j));
        Deck d;
        d.order = random_permutation(n, rng);
        const int y = det_y ? static_cast<int>(batch.t % n) : static_cast<int>(rng.next_below(n));
        if (std::abs(psi_eval(d, y, es)) >= res.threshold) ++st_hits;
    }
    res.p_stationary = static_cast<double>(st_hits) / static_cast<double>(stationary_samples);
    res.tv_lower_bound = res.p_chain - res.p_stationary;
    return res;
}

// ---------- coupling ----------

ParityReport swap_run_parity(long long total_shifts, std::uint64_t seed) {
    ParityReport rep;
    RngStream rng(seed);
    long long run = 0;
    while (rep.shifts < total_shifts) {
        if (rng.next_unit() < 0.5) { // shift
            ++rep.shifts;
            if (run & 1) ++rep.odd_runs;
            run = 0;
        } else {
            ++run;
        }
    }
    rep.fraction_odd = static_cast<double>(rep.odd_runs) / static_cast<double>(rep.shifts);
    return rep;
}

ShiftCountReport shift_count_equivalence(int n, std::span<const Move> moves) {
    ShiftCountReport rep;
    rep.steps = static_cast<long long>(moves.size());
    Deck sos = Deck::identity(n);
    Deck rud = Deck::identity(n);
    long long run = 0;
    for (const Move m : moves) {
        sos = apply_move(sos, m);
        if (m == Move::shift_left) {
            rud = apply_move(rud, (run & 1) ? Move::swap_shift_left : Move::shift_left);
            run = 0;
            ++rep.shift_epochs;
            if (rep.all_match && !(sos == rud)) {
                rep.all_match = false;
                rep.first_mismatch = rep.shift_epochs;
            }
        } else if (m == Move::swap_ends) {
            ++run;
        } else {
            throw std::invalid_argument("shift_count_equivalence expects shift_left/swap moves");
        }
    }
    rep.epoch_frequency =
        rep.steps > 0 ? static_cast<double>(rep.shift_epochs) / static_cast<double>(rep.steps) : 0.0;
    return rep;
}

ShiftCountReport shift_count_equivalence(int n, long long t, std::uint64_t seed) {
    const auto spec = ShuffleSpec::shift_or_swap(n);
    RngStream rng(seed);
    std::vector<Move> moves(t);
    for (long long i = 0; i < t; ++i) moves[i] = sample_move(spec, rng);
    return shift_count_equivalence(n, moves);
}

} // namespace rudvalis
