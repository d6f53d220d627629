#include "rudvalis/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rudvalis {

long long factorial(int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

long long rank_permutation(std::span<const int> perm) {
    const int n = static_cast<int>(perm.size());
    long long rank = 0;
    for (int i = 0; i < n; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < n; ++j)
            if (perm[j] < perm[i]) ++smaller;
        rank += smaller * factorial(n - 1 - i);
    }
    return rank;
}

std::vector<int> unrank_permutation(long long rank, int n) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i + 1;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) {
        const long long f = factorial(n - 1 - i);
        const long long k = rank / f;
        rank %= f;
        perm[i] = pool[k];
        pool.erase(pool.begin() + k);
    }
    return perm;
}

LiftedChain::LiftedChain(const ShuffleSpec& spec, long long max_states) : spec_(spec) {
    const int n = spec.n;
    const long long nf = factorial(n);
    num_states_ = nf * n;
    if (num_states_ > max_states)
        throw CapacityError("lifted state space " + std::to_string(num_states_) +
                            " exceeds cap " + std::to_string(max_states));

    const int k = static_cast<int>(spec.moves.size());
    pred_.assign(k, std::vector<long long>(num_states_));
    std::vector<int> perm;
    Deck d;
    for (long long r = 0; r < nf; ++r) {
        perm = unrank_permutation(r, n);
        d.order = perm;
        for (int m = 0; m < k; ++m) {
            const Move mv = spec.moves[m].first;
            const long long r2 = rank_permutation(apply_move(d, mv).order);
            const int dy = winding_increment(mv);
            for (int y = 0; y < n; ++y) {
                const long long s = r * n + y;
                const long long s2 = r2 * n + (y + dy + n) % n;
                pred_[m][s2] = s;
            }
        }
    }
}

void LiftedChain::step_serial(const std::vector<double>& in, std::vector<double>& out) const {
    const int k = static_cast<int>(spec_.moves.size());
    for (long long s = 0; s < num_states_; ++s) {
        double acc = 0.0;
        for (int m = 0; m < k; ++m) acc += spec_.moves[m].second * in[pred_[m][s]];
        out[s] = acc;
    }
}

void LiftedChain::step(const std::vector<double>& in, std::vector<double>& out, bool parallel) const {
    if (!parallel) {
        step_serial(in, out);
        return;
    }
    const int k = static_cast<int>(spec_.moves.size());
#pragma omp parallel for schedule(static)
    for (long long s = 0; s < num_states_; ++s) {
        double acc = 0.0;
        for (int m = 0; m < k; ++m) acc += spec_.moves[m].second * in[pred_[m][s]];
        out[s] = acc;
    }
}

DistVector LiftedChain::evolve(long long t, bool parallel) const {
    std::vector<double> cur(num_states_, 0.0), nxt(num_states_);
    cur[start_index()] = 1.0;
    for (long long i = 0; i < t; ++i) {
        step(cur, nxt, parallel);
        cur.swap(nxt);
    }
    return DistVector{std::move(cur)};
}

std::pair<std::vector<int>, int> LiftedChain::decode(long long index) const {
    return {unrank_permutation(index / spec_.n, spec_.n), static_cast<int>(index % spec_.n)};
}

std::vector<cxd> LiftedChain::psi_table(const EigenSystem& es) const {
    const int n = spec_.n;
    std::vector<cxd> wp(n);
    for (int z = 0; z < n; ++z) wp[z] = std::polar(1.0, 2.0 * std::numbers::pi * z / n);
    std::vector<cxd> table(num_states_);
    const long long nf = factorial(n);
    for (long long r = 0; r < nf; ++r) {
        const auto perm = unrank_permutation(r, n);
        for (int y = 0; y < n; ++y) {
            cxd acc(0.0);
            for (int pos = 1; pos <= n; ++pos) {
                const int z = ((pos - perm[pos - 1] + y) % n + n) % n;
                acc += es.v[pos - 1] * wp[z];
            }
            table[r * n + y] = acc;
        }
    }
    return table;
}

double tv_to_uniform(const DistVector& dist, int n, Marginal marginal) {
    const long long nf = factorial(n);
    if (marginal == Marginal::lifted) {
        const double u = 1.0 / static_cast<double>(nf * n);
        double acc = 0.0;
        for (double q : dist.probs) acc += std::abs(q - u);
        return 0.5 * acc;
    }
    const double u = 1.0 / static_cast<double>(nf);
    double acc = 0.0;
    for (long long r = 0; r < nf; ++r) {
        double m = 0.0;
        for (int y = 0; y < n; ++y) m += dist.probs[r * n + y];
        acc += std::abs(m - u);
    }
    return 0.5 * acc;
}

DistVector evolve_full(const ShuffleSpec& spec, long long t) {
    return LiftedChain(spec).evolve(t);
}

std::pair<cxd, double> psi_moments_exact(const ShuffleSpec& spec, const EigenSystem& es, long long t) {
    LiftedChain chain(spec);
    const auto dist = chain.evolve(t);
    const auto psi = chain.psi_table(es);
    cxd mean(0.0);
    double second = 0.0;
    for (long long s = 0; s < chain.num_states(); ++s) {
        mean += dist.probs[s] * psi[s];
        second += dist.probs[s] * std::norm(psi[s]);
    }
    return {mean, second};
}

// ---------- single tracked card ----------

SingleCardChain::SingleCardChain(const ShuffleSpec& spec) : n_(spec.n) {
    if (n_ > kSingleCardMaxN)
        throw CapacityError("single-card chain capped at n = " + std::to_string(kSingleCardMaxN));
    for (const auto& [mv, q] : spec.moves) {
        std::vector<int> pred(n_);
        for (int x = 1; x <= n_; ++x) {
            const int x2 = card_phase_update({x, 0, x}, mv, n_).x;
            pred[x2 - 1] = x - 1;
        }
        pred_.emplace_back(std::move(pred), q);
    }
}

void SingleCardChain::step(std::vector<double>& dist) const {
    std::vector<double> out(n_, 0.0);
    for (const auto& [pred, q] : pred_)
        for (int i = 0; i < n_; ++i) out[i] += q * dist[pred[i]];
    dist.swap(out);
}

std::vector<double> SingleCardChain::distribution_at(long long t) const {
    std::vector<double> dist(n_, 0.0);
    dist[0] = 1.0;
    for (long long i = 0; i < t; ++i) step(dist);
    return dist;
}

double SingleCardChain::tv_uniform(const std::vector<double>& dist) {
    const double u = 1.0 / static_cast<double>(dist.size());
    double acc = 0.0;
    for (double q : dist) acc += std::abs(q - u);
    return 0.5 * acc;
}

std::vector<std::pair<long long, double>> single_card_tv_curve(const ShuffleSpec& spec,
                                                               std::span<const long long> t_grid) {
    SingleCardChain chain(spec);
    std::vector<std::pair<long long, double>> out;
    out.reserve(t_grid.size());
    std::vector<double> dist(spec.n, 0.0);
    dist[0] = 1.0;
    long long t = 0;
    for (long long target : t_grid) {
        if (target < t) throw std::invalid_argument("t_grid must be nondecreasing");
        for (; t < target; ++t) chain.step(dist);
        out.emplace_back(target, SingleCardChain::tv_uniform(dist));
    }
    return out;
}

long long single_card_mixing_time(const ShuffleSpec& spec, double threshold) {
    SingleCardChain chain(spec);
    std::vector<double> dist(spec.n, 0.0);
    dist[0] = 1.0;
    const long long limit = 100'000'000;
    for (long long t = 0; t <= limit; ++t) {
        if (SingleCardChain::tv_uniform(dist) < threshold) return t;
        chain.step(dist);
    }
    throw SolverError("single_card_mixing_time: threshold not reached within step limit");
}

} // namespace rudvalis
