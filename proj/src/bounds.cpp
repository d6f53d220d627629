#include "rudvalis/bounds.hpp"

#include <cmath>
#include <numbers>

namespace rudvalis {

long long lower_bound_time(double psi_max, double gamma, double r, double epsilon) {
    if (!(psi_max > 0.0) || !std::isfinite(psi_max)) throw std::invalid_argument("psi_max must be positive");
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("r must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0,1)");
    if (gamma > 0.5) throw std::domain_error("lemma-inapplicable: needs Re(lambda) >= 1/2");

    const double num = std::log(psi_max) + 0.5 * std::log(gamma * epsilon / (4.0 * r));
    if (num <= 0.0) return 0;
    const double den = -std::log1p(-gamma);
    return static_cast<long long>(std::floor(num / den));
}

double reference_constant(ShuffleKind kind, double p) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    switch (kind) {
        case ShuffleKind::rudvalis: return (1.0 - p) / (8.0 * pi2 * p);
        case ShuffleKind::shift_or_swap: return 1.0 / (2.0 * pi2);
        case ShuffleKind::symmetrized: return 1.0 / pi2;
    }
    throw std::invalid_argument("unknown shuffle kind");
}

BoundReport make_bound_report(const EigenSystem& es, double epsilon) {
    BoundReport r;
    r.kind = es.spec.kind;
    r.n = es.spec.n;
    r.p = es.spec.p;
    r.epsilon = epsilon;
    r.lambda_re = es.lambda.real();
    r.lambda_im = es.lambda.imag();
    r.gamma = es.gamma;
    r.psi_max = es.psi_max;
    r.r_bound = es.r_bound;
    r.t_lower = lower_bound_time(es.psi_max, es.gamma, es.r_bound, epsilon);
    const double scale = std::pow(static_cast<double>(r.n), 3.0) * std::log(static_cast<double>(r.n));
    r.theorem_constant = static_cast<double>(r.t_lower) / scale;
    r.reference_constant = reference_constant(r.kind, r.p);
    r.diagnostic = std::abs(r.theorem_constant / r.reference_constant - 1.0);
    return r;
}

std::vector<BoundReport> theorem_constants(ShuffleKind kind, double p, double epsilon,
                                           std::span<const int> n_grid) {
    std::vector<BoundReport> out;
    out.reserve(n_grid.size());
    for (int n : n_grid) {
        ShuffleSpec spec = kind == ShuffleKind::rudvalis ? ShuffleSpec::rudvalis(n, p)
                           : kind == ShuffleKind::shift_or_swap ? ShuffleSpec::shift_or_swap(n)
                                                                : ShuffleSpec::symmetrized(n);
        out.push_back(make_bound_report(solve_eigensystem(spec), epsilon));
    }
    return out;
}

} // namespace rudvalis
