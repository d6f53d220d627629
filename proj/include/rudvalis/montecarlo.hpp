// Monte Carlo experiments on the lifted chains.
//
// PsiWalker advances one lifted trajectory and maintains Psi incrementally in
// O(1) per step: shifts multiply all interior eigenvector entries by a common
// ratio, so only the boundary cards need correction terms. Accumulated
// floating-point drift is flushed by a full recomputation every
// renorm_interval steps.
//
// sample_psi runs independent trials (one RNG stream per trial index, so
// results do not depend on thread count or schedule) and records Psi_t.
// separation_test turns the samples into an empirical total-variation lower
// bound by thresholding |Psi| against stationary samples.
#pragma once

#include "rudvalis/spectral.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace rudvalis {

class PsiWalker {
public:
    explicit PsiWalker(const EigenSystem& es, long long renorm_interval = 10'000);

    Move step(RngStream& rng); // sample a move, apply it
    void apply(Move m);        // apply a chosen move (deterministic replay)

    cxd psi() const;           // incrementally maintained value
    cxd psi_recomputed() const; // full O(n) recomputation, does not touch state
    void renormalize();        // flush incremental drift

    long long steps() const { return t_; }
    int y() const { return y_; }
    Deck deck() const; // materialize the circular buffer

private:
    const EigenSystem* es_;
    int n_;
    long long renorm_interval_;
    long long t_ = 0;
    int head_ = 0; // physical index of position 1
    int y_ = 0;
    std::vector<int> buf_; // circular deck storage
    std::vector<int> z_;   // per-card phase, indexed by card-1
    std::vector<cxd> wp_;  // w^k table

    // geometric shuffles track Psi directly; symmetrized tracks the two
    // oscillatory components A = sum e^{+i theta s(x)} w^z, B = conj-frequency
    cxd psi_acc_{0.0};
    cxd a_acc_{0.0}, b_acc_{0.0};
    cxd base_{0.0};            // interior ratio: lambda or 2 lambda - 1
    cxd eit_{0.0}, eitm_{0.0}; // e^{i theta}, e^{i theta (n-1)/2}
    double c_plus_ = 0.0, c_minus_ = 0.0;

    int phys(int pos) const { return (head_ + pos - 1) % n_; }
    int top_card() const { return buf_[head_]; }
    int bottom_card() const { return buf_[(head_ + n_ - 1) % n_]; }
};

struct TrialBatch {
    ShuffleSpec spec;
    long long t = 0;
    int trials = 0;
    std::uint64_t master_seed = 0;
    std::vector<cxd> psi; // one value per trial index
};

TrialBatch sample_psi(const EigenSystem& es, long long t, int trials, std::uint64_t master_seed,
                      bool parallel = true);

struct SeparationResult {
    double threshold = 0.0;       // sqrt(r / (gamma epsilon))
    double p_chain = 0.0;         // fraction of trials with |Psi_t| >= threshold
    double p_stationary = 0.0;    // same under stationary samples
    double tv_lower_bound = 0.0;  // p_chain - p_stationary
};

// stationary samples: uniform deck; y uniform, except y = t mod n for shuffles
// with deterministic winding
SeparationResult separation_test(const TrialBatch& batch, const EigenSystem& es,
                                 int stationary_samples, double epsilon);

// ---------- coupling between shift_or_swap and rudvalis(1/3) ----------

struct ParityReport {
    long long shifts = 0;
    long long odd_runs = 0;     // shifts preceded by an odd swap run
    double fraction_odd = 0.0;  // -> 1/3
};

ParityReport swap_run_parity(long long total_shifts, std::uint64_t seed);

struct ShiftCountReport {
    long long steps = 0;
    long long shift_epochs = 0;
    bool all_match = true;
    long long first_mismatch = -1; // epoch index, -1 when none
    double epoch_frequency = 0.0;  // shift_epochs / steps -> 1/2
};

// runs shift_or_swap for t steps and checks that collapsing each swap run by
// parity reproduces, at every shift epoch, the deck of a rudvalis(1/3) chain
ShiftCountReport shift_count_equivalence(int n, long long t, std::uint64_t seed);
ShiftCountReport shift_count_equivalence(int n, std::span<const Move> moves);

} // namespace rudvalis
