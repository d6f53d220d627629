// Complex eigenfunctions for the lifted shuffles.
//
// For a move distribution {(m, q_m)} the single-card action on (x, z) induces
// an n x n twisted transition matrix M with entries
//
//   M(x, x') = sum over moves m taking position x to x':  q_m * w^{dz_m(x)},
//
// w = exp(2*pi*i/n). A right eigenvector M v = lambda v yields a chain
// eigenfunction Psi(deck, y) = sum over cards of v(x_card) * w^{z_card} with
// E[Psi_{t+1} | state] = lambda * Psi_t. Each shuffle admits a closed-form
// characteristic equation for the eigenvalue near 1; those are solved by
// Newton (rudvalis, shift_or_swap) or bracketed bisection (symmetrized), with
// a dense eigendecomposition fallback when Newton leaves the basin.
#pragma once

#include "rudvalis/shuffle.hpp"

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace rudvalis {

using cxd = std::complex<double>;

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TwistedMatrix {
    int n = 0;
    std::vector<cxd> a; // row-major, row = current position, col = next position

    cxd& at(int x, int xp) { return a[(x - 1) * n + (xp - 1)]; }
    const cxd& at(int x, int xp) const { return a[(x - 1) * n + (xp - 1)]; }
};

struct EigenSystem {
    ShuffleSpec spec;
    cxd lambda;
    std::vector<cxd> v;     // v[x-1] for positions x = 1..n
    cxd w;                  // exp(2*pi*i/n)
    cxd chi;                // bottom-row boundary value v(n), geometric shuffles
    double theta = 0.0;     // symmetrized frequency
    double delta = 0.0;     // symmetrized odd/even mixing coefficient
    double gamma = 0.0;     // 1 - Re(lambda)
    double psi_max = 0.0;   // |Psi| at the deterministic start state
    double r_bound = 0.0;   // certified bound on E|Psi_{t+1} - Psi_t|^2
    double residual = 0.0;  // characteristic-equation residual at lambda
    bool used_fallback = false;
};

// single-card phase factor w^{dz} for a move applied at position x (dz is 0 or +-1)
cxd move_phase(Move m, int x, int n, cxd w);

TwistedMatrix build_twisted_matrix(const ShuffleSpec& spec);
// same matrix with an arbitrary twist value (w_override = 1 gives the plain
// doubly stochastic single-card transition matrix)
TwistedMatrix build_twisted_matrix(const ShuffleSpec& spec, cxd w_override);

std::vector<cxd> dense_spectrum(const TwistedMatrix& m);

EigenSystem solve_rudvalis(int n, double p);
EigenSystem solve_shift_or_swap(int n);
EigenSystem solve_symmetrized(int n);
EigenSystem solve_eigensystem(const ShuffleSpec& spec);

// max over positions x of | sum_m q_m v(x'_m(x)) w^{dz_m(x)} - lambda v(x) |,
// computed from the move table, independent of build_twisted_matrix
double verify_eigensystem(const EigenSystem& es);

// Psi for a deck with winding y; start positions default to the card labels
cxd psi_eval(const Deck& deck, int y, const EigenSystem& es);
cxd psi_eval(const Deck& deck, int y, std::span<const int> x0, const EigenSystem& es);

double compute_psi_max(const EigenSystem& es);  // = |sum_x v(x)|
double compute_r_bound(const EigenSystem& es);

// integer power by repeated squaring (no exp/log error accumulation)
cxd pow_int(cxd z, long long k);

} // namespace rudvalis
