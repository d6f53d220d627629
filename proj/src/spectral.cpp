#include "rudvalis/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rudvalis {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

cxd root_of_unity(int n) { return std::polar(1.0, two_pi / n); }

// Newton accepts only a root that is (a) a numerical root, (b) consistent
// across the two boundary expressions for chi, (c) inside the basin around 1.
// Spurious roots of the characteristic polynomial (e.g. lambda = 0 for
// rudvalis at small n) pass (a) and (b) but not (c).
struct Gates {
    double residual_tol;
    double chi_tol = 1e-9;
    double basin_radius = 0.5;
};

template <typename F, typename DF>
cxd newton(F f, DF df, cxd z0, int iters = 100) {
    cxd z = z0;
    for (int i = 0; i < iters; ++i) {
        const cxd step = f(z) / df(z);
        z -= step;
        if (std::abs(step) < 1e-16) break;
    }
    return z;
}

cxd dense_max_re_eigenvalue(const TwistedMatrix& m) {
    const auto ev = dense_spectrum(m);
    cxd best = ev.front();
    for (const cxd& e : ev) {
        if (e.real() > best.real() + 1e-14 ||
            (std::abs(e.real() - best.real()) <= 1e-14 && std::abs(e.imag()) < std::abs(best.imag())))
            best = e;
    }
    return best;
}

// shared tail for rudvalis / shift_or_swap: interior rows are geometric with
// ratio `base` (v(x-1) = base * v(x)), the bottom entry is chi
EigenSystem finish_geometric(ShuffleSpec spec, cxd lambda, cxd base, cxd chi, double residual,
                             bool used_fallback) {
    EigenSystem es;
    es.spec = std::move(spec);
    const int n = es.spec.n;
    es.lambda = lambda;
    es.w = root_of_unity(n);
    es.chi = chi;
    es.gamma = 1.0 - lambda.real();
    es.residual = residual;
    es.used_fallback = used_fallback;
    es.v.assign(n, cxd(0.0));
    es.v[n - 2] = 1.0; // v(n-1) = base^0
    for (int x = n - 1; x >= 2; --x) es.v[x - 2] = base * es.v[x - 1];
    es.v[n - 1] = chi;
    es.psi_max = compute_psi_max(es);
    es.r_bound = compute_r_bound(es);
    return es;
}

} // namespace

cxd pow_int(cxd z, long long k) {
    if (k < 0) return 1.0 / pow_int(z, -k);
    cxd acc = 1.0, base = z;
    while (k > 0) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

cxd move_phase(Move m, int x, int n, cxd w) {
    const CardPhase next = card_phase_update({x, 0, x}, m, n);
    if (next.z == 0) return cxd(1.0);
    if (next.z == 1) return w;
    if (next.z == n - 1) return std::conj(w);
    return std::polar(1.0, two_pi * next.z / n);
}

TwistedMatrix build_twisted_matrix(const ShuffleSpec& spec, cxd w_override) {
    const int n = spec.n;
    TwistedMatrix m;
    m.n = n;
    m.a.assign(static_cast<std::size_t>(n) * n, cxd(0.0));
    for (int x = 1; x <= n; ++x) {
        for (const auto& [mv, q] : spec.moves) {
            const CardPhase next = card_phase_update({x, 0, x}, mv, n);
            m.at(x, next.x) += q * move_phase(mv, x, n, w_override);
        }
    }
    return m;
}

TwistedMatrix build_twisted_matrix(const ShuffleSpec& spec) {
    return build_twisted_matrix(spec, root_of_unity(spec.n));
}

std::vector<cxd> dense_spectrum(const TwistedMatrix& m) {
    Eigen::MatrixXcd em(m.n, m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) em(i, j) = m.a[static_cast<std::size_t>(i) * m.n + j];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(em, /*computeEigenvectors=*/false);
    if (ces.info() != Eigen::Success) throw SolverError("dense eigendecomposition failed");
    std::vector<cxd> out(m.n);
    for (int i = 0; i < m.n; ++i) out[i] = ces.eigenvalues()(i);
    return out;
}

EigenSystem solve_rudvalis(int n, double p) {
    if (n < 3) throw std::invalid_argument("solve_rudvalis: n must be at least 3");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("solve_rudvalis: p must lie in (0,1)");
    const cxd w = root_of_unity(n);
    const cxd wi = std::conj(w);

    // lambda^n - p w lambda^{n-1} - p w^{-1} lambda - 1 + 2p = 0
    auto f = [&](cxd z) {
        const cxd zn1 = pow_int(z, n - 1);
        return zn1 * z - p * w * zn1 - p * wi * z - 1.0 + 2.0 * p;
    };
    auto df = [&](cxd z) {
        return static_cast<double>(n) * pow_int(z, n - 1) -
               p * w * static_cast<double>(n - 1) * pow_int(z, n - 2) - p * wi;
    };
    auto chi_pair = [&](cxd lam) {
        const cxd c1 = (pow_int(lam, n - 1) - p * wi) / (1.0 - p);
        const cxd c2 = (1.0 - p) / (lam - p * w);
        return std::pair{c1, c2};
    };

    const Gates g{1e-12 * n};
    cxd lam = newton(f, df, cxd(1.0));
    auto [c1, c2] = chi_pair(lam);
    bool ok = std::abs(f(lam)) < g.residual_tol && std::abs(c1 - c2) < g.chi_tol &&
              std::abs(lam - 1.0) < g.basin_radius;
    bool fallback = false;
    if (!ok) {
        lam = newton(f, df, dense_max_re_eigenvalue(build_twisted_matrix(ShuffleSpec::rudvalis(n, p))), 50);
        std::tie(c1, c2) = chi_pair(lam);
        fallback = true;
        if (!(std::abs(f(lam)) < g.residual_tol && std::abs(c1 - c2) < g.chi_tol))
            throw SolverError("solve_rudvalis: no-root (newton and dense fallback both rejected)");
    }
    auto spec = ShuffleSpec::rudvalis(n, p);
    return finish_geometric(std::move(spec), lam, lam, c1, std::abs(f(lam)), fallback);
}

EigenSystem solve_shift_or_swap(int n) {
    if (n < 3) throw std::invalid_argument("solve_shift_or_swap: n must be at least 3");
    const cxd w = root_of_unity(n);
    const cxd wi = std::conj(w);

    // chi eliminated between the two boundary rows:
    //   4 lambda^2 (2 lambda - 1)^{n-2} = (1 + w^{-1}) (1 + w (2 lambda - 1)^{n-2})
    auto f = [&](cxd z) {
        const cxd u = pow_int(2.0 * z - 1.0, n - 2);
        return 4.0 * z * z * u - (1.0 + wi) * (1.0 + w * u);
    };
    auto df = [&](cxd z) {
        const cxd u = pow_int(2.0 * z - 1.0, n - 2);
        const cxd u3 = pow_int(2.0 * z - 1.0, n - 3);
        return 8.0 * z * u + 2.0 * static_cast<double>(n - 2) * u3 * (4.0 * z * z - (1.0 + wi) * w);
    };
    auto chi_pair = [&](cxd lam) {
        const cxd u = pow_int(2.0 * lam - 1.0, n - 2);
        return std::pair{2.0 * lam * u / (1.0 + wi), (1.0 + w * u) / (2.0 * lam)};
    };

    const Gates g{1e-12 * n};
    cxd lam = newton(f, df, cxd(1.0));
    auto [c1, c2] = chi_pair(lam);
    bool ok = std::abs(f(lam)) < g.residual_tol && std::abs(c1 - c2) < g.chi_tol &&
              std::abs(lam - 1.0) < g.basin_radius;
    bool fallback = false;
    if (!ok) {
        lam = newton(f, df, dense_max_re_eigenvalue(build_twisted_matrix(ShuffleSpec::shift_or_swap(n))), 50);
        std::tie(c1, c2) = chi_pair(lam);
        fallback = true;
        if (!(std::abs(f(lam)) < g.residual_tol && std::abs(c1 - c2) < g.chi_tol))
            throw SolverError("solve_shift_or_swap: no-root (newton and dense fallback both rejected)");
    }
    auto spec = ShuffleSpec::shift_or_swap(n);
    return finish_geometric(std::move(spec), lam, 2.0 * lam - 1.0, c1, std::abs(f(lam)), fallback);
}

EigenSystem solve_symmetrized(int n) {
    auto spec = ShuffleSpec::symmetrized(n); // validates odd n >= 3
    const double c = std::cos(two_pi / n);
    const double s = std::sin(two_pi / n);

    auto eq1 = [&](double th) {
        return (0.5 + c) * std::sin(th * (n - 1)) - 0.5 * std::sin(th * (n + 1)) -
               std::sin(th * static_cast<double>(n)) + (1.0 + c) * std::sin(th);
    };
    auto deq1 = [&](double th) {
        return (0.5 + c) * (n - 1) * std::cos(th * (n - 1)) - 0.5 * (n + 1) * std::cos(th * (n + 1)) -
               static_cast<double>(n) * std::cos(th * static_cast<double>(n)) + (1.0 + c) * std::cos(th);
    };

    // smallest positive root sits near theta_hat = sqrt(2) pi n^{-3/2}
    const double theta_hat = std::numbers::sqrt2 * std::numbers::pi * std::pow(n, -1.5);
    double lo = theta_hat / 2, hi = 2 * theta_hat;
    double flo = eq1(lo), fhi = eq1(hi);
    if (flo * fhi >= 0.0) {
        // coarse forward scan for the first sign change
        bool found = false;
        double prev_th = theta_hat / 40, prev_f = eq1(prev_th);
        for (int k = 2; k <= 800 && !found; ++k) {
            const double th = k * theta_hat / 40;
            const double fv = eq1(th);
            if (prev_f * fv < 0.0) {
                lo = prev_th;
                hi = th;
                flo = prev_f;
                found = true;
            }
            prev_th = th;
            prev_f = fv;
        }
        if (!found) throw SolverError("solve_symmetrized: no-root (no sign change near theta_hat)");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = eq1(mid);
        if (flo * fm <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    double theta = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) theta -= eq1(theta) / deq1(theta); // polish
    if (!(theta > 0.0) || std::abs(eq1(theta)) > 1e-12 * n)
        throw SolverError("solve_symmetrized: root rejected by residual gate");

    const double a = theta * (n - 1) / 2;
    const double b = theta * (n + 1) / 2;
    const double delta = s * std::cos(a) / (2.0 * std::sin(a) + c * std::sin(a) + std::sin(b));
    const double delta_alt = (c * std::cos(a) - std::cos(b)) / (-s * std::sin(a));
    if (std::abs(delta - delta_alt) > 1e-9)
        throw SolverError("solve_symmetrized: boundary coefficient mismatch between the two delta forms");

    EigenSystem es;
    es.spec = std::move(spec);
    es.lambda = cxd((1.0 + std::cos(theta)) / 2.0, 0.0);
    es.w = root_of_unity(n);
    es.theta = theta;
    es.delta = delta;
    es.gamma = 1.0 - es.lambda.real();
    es.residual = std::abs(eq1(theta));
    es.v.resize(n);
    for (int x = 1; x <= n; ++x) {
        const double sx = x - (n + 1) / 2.0;
        es.v[x - 1] = cxd(std::cos(theta * sx), delta * std::sin(theta * sx));
    }
    es.chi = es.v[n - 1];
    es.psi_max = compute_psi_max(es);
    es.r_bound = compute_r_bound(es);
    return es;
}

EigenSystem solve_eigensystem(const ShuffleSpec& spec) {
    switch (spec.kind) {
        case ShuffleKind::rudvalis: return solve_rudvalis(spec.n, spec.p);
        case ShuffleKind::shift_or_swap: return solve_shift_or_swap(spec.n);
        case ShuffleKind::symmetrized: return solve_symmetrized(spec.n);
    }
    throw std::invalid_argument("unknown shuffle kind");
}

double verify_eigensystem(const EigenSystem& es) {
    const int n = es.spec.n;
    double worst = 0.0;
    for (int x = 1; x <= n; ++x) {
        cxd acc(0.0);
        for (const auto& [mv, q] : es.spec.moves) {
            const CardPhase next = card_phase_update({x, 0, x}, mv, n);
            acc += q * es.v[next.x - 1] * move_phase(mv, x, n, es.w);
        }
        worst = std::max(worst, std::abs(acc - es.lambda * es.v[x - 1]));
    }
    return worst;
}

static std::vector<cxd> unity_powers(int n) {
    std::vector<cxd> wp(n);
    for (int k = 0; k < n; ++k) wp[k] = std::polar(1.0, two_pi * k / n);
    return wp;
}

cxd psi_eval(const Deck& deck, int y, std::span<const int> x0, const EigenSystem& es) {
    const int n = es.spec.n;
    const auto wp = unity_powers(n);
    cxd acc(0.0);
    for (int pos = 1; pos <= n; ++pos) {
        const int card = deck.order[pos - 1];
        const int z = ((pos - x0[card - 1] + y) % n + n) % n;
        acc += es.v[pos - 1] * wp[z];
    }
    return acc;
}

cxd psi_eval(const Deck& deck, int y, const EigenSystem& es) {
    std::vector<int> x0(es.spec.n);
    for (int c = 1; c <= es.spec.n; ++c) x0[c - 1] = c;
    return psi_eval(deck, y, x0, es);
}

double compute_psi_max(const EigenSystem& es) {
    cxd acc(0.0);
    for (const cxd& vx : es.v) acc += vx;
    return std::abs(acc);
}

// R = sum_m q_m * (sum_x |v(x'_m(x)) w^{dz_m(x)} - v(x)|)^2: per-move triangle
// inequality across positions; each per-position term is exact, so R dominates
// E|Psi_{t+1}-Psi_t|^2 from every state.
double compute_r_bound(const EigenSystem& es) {
    const int n = es.spec.n;
    double out = 0.0;
    for (const auto& [mv, q] : es.spec.moves) {
        double s = 0.0;
        for (int x = 1; x <= n; ++x) {
            const CardPhase next = card_phase_update({x, 0, x}, mv, n);
            s += std::abs(es.v[next.x - 1] * move_phase(mv, x, n, es.w) - es.v[x - 1]);
        }
        out += q * s * s;
    }
    return out;
}

} // namespace rudvalis
