// Mixing-time lower bound from the eigenfunction moments.
//
// With |E[Psi_t]| = psi_max (1-gamma)^t and Var[Psi_t] <= r/(2 gamma), a
// second-moment separation argument gives TV(t) >= 1 - eps for every
//
//   t <= ( ln psi_max + (1/2) ln(gamma eps / (4 r)) ) / ( -ln(1-gamma) ).
//
// lower_bound_time returns the floor of that expression, clamped at 0. The
// asymptotic reference constants are the n -> infinity limits of
// t_lower / (n^3 ln n).
#pragma once

#include "rudvalis/spectral.hpp"

#include <span>
#include <vector>

namespace rudvalis {

struct BoundReport {
    ShuffleKind kind;
    int n = 0;
    double p = 0.0;
    double epsilon = 0.0;
    double lambda_re = 0.0;
    double lambda_im = 0.0;
    double gamma = 0.0;
    double psi_max = 0.0;
    double r_bound = 0.0;
    long long t_lower = 0;
    double theorem_constant = 0.0;   // t_lower / (n^3 ln n)
    double reference_constant = 0.0; // asymptotic limit of the above
    double diagnostic = 0.0;         // |theorem_constant / reference_constant - 1|
};

// throws std::invalid_argument on out-of-range inputs and std::domain_error
// ("lemma-inapplicable") when gamma > 1/2
long long lower_bound_time(double psi_max, double gamma, double r, double epsilon);

double reference_constant(ShuffleKind kind, double p);

BoundReport make_bound_report(const EigenSystem& es, double epsilon);

std::vector<BoundReport> theorem_constants(ShuffleKind kind, double p, double epsilon,
                                           std::span<const int> n_grid);

} // namespace rudvalis
