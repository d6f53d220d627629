// Exact distribution evolution on small instances.
//
// The lifted chain lives on S_n x Z_n; states are indexed as
// rank(perm) * n + y with Lehmer-code ranking. Every move is a bijection on
// states, so one transition step is a gather over per-move predecessor tables:
// out[s] = sum_m q_m * in[pred_m[s]]. Each output cell is independent, which
// makes the OpenMP version bitwise identical to the serial one.
//
// A separate single-card chain (position marginal of one tracked card) is used
// for mixing-time exponent fits at deck sizes where the full chain is out of
// reach.
#pragma once

#include "rudvalis/spectral.hpp"

#include <complex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rudvalis {

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

long long factorial(int n);
long long rank_permutation(std::span<const int> perm);          // Lehmer code, identity -> 0
std::vector<int> unrank_permutation(long long rank, int n);

struct DistVector {
    std::vector<double> probs; // indexed by rank(perm) * n + y
};

enum class Marginal { permutation, lifted };

class LiftedChain {
public:
    // throws CapacityError when n! * n exceeds max_states
    explicit LiftedChain(const ShuffleSpec& spec, long long max_states = 1'000'000);

    const ShuffleSpec& spec() const { return spec_; }
    long long num_states() const { return num_states_; }
    long long start_index() const { return 0; } // identity deck, y = 0

    void step(const std::vector<double>& in, std::vector<double>& out, bool parallel = true) const;
    void step_serial(const std::vector<double>& in, std::vector<double>& out) const;

    DistVector evolve(long long t, bool parallel = true) const;

    std::pair<std::vector<int>, int> decode(long long index) const; // (perm, y)

    // Psi evaluated at every lifted state (start positions = card labels)
    std::vector<cxd> psi_table(const EigenSystem& es) const;

private:
    ShuffleSpec spec_;
    long long num_states_;
    std::vector<std::vector<long long>> pred_; // pred_[m][s] = predecessor of s under move m
};

double tv_to_uniform(const DistVector& dist, int n, Marginal marginal);

DistVector evolve_full(const ShuffleSpec& spec, long long t);

// (E[Psi_t], E|Psi_t|^2) under the exact distribution at time t
std::pair<cxd, double> psi_moments_exact(const ShuffleSpec& spec, const EigenSystem& es, long long t);

// ---------- single tracked card ----------

inline constexpr int kSingleCardMaxN = 512;

class SingleCardChain {
public:
    explicit SingleCardChain(const ShuffleSpec& spec); // throws CapacityError past kSingleCardMaxN

    void step(std::vector<double>& dist) const;
    std::vector<double> distribution_at(long long t) const; // from point mass at position 1
    static double tv_uniform(const std::vector<double>& dist);

private:
    int n_;
    std::vector<std::pair<std::vector<int>, double>> pred_; // (predecessor position table, weight)
};

// TV to uniform of the tracked-card position at each requested time (sorted grid)
std::vector<std::pair<long long, double>> single_card_tv_curve(const ShuffleSpec& spec,
                                                               std::span<const long long> t_grid);

// first t with TV < threshold
long long single_card_mixing_time(const ShuffleSpec& spec, double threshold = 0.25);

} // namespace rudvalis
