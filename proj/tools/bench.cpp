// Micro-benchmark: OpenMP kernels vs their serial reference twins.
//
//   bench [reps]
//
// Times the exact-evolution gather step and the Monte Carlo trial loop in
// both modes, checks the outputs agree bitwise, and prints the speedup.
#include "rudvalis/exact.hpp"
#include "rudvalis/montecarlo.hpp"
#include "rudvalis/spectral.hpp"

#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <string>

using namespace rudvalis;

namespace {

template <typename F>
double time_best(int reps, F&& body) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = omp_get_wtime();
        body();
        const double t1 = omp_get_wtime();
        if (t1 - t0 < best) best = t1 - t0;
    }
    return best;
}

void report(const char* name, double serial, double parallel, bool match) {
    std::printf("%-28s %10.4f ms %10.4f ms %8.2fx   %s\n", name, serial * 1e3, parallel * 1e3,
                serial / parallel, match ? "outputs-match" : "OUTPUTS-DIFFER");
}

} // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::atoi(argv[1]) : 5;
    std::printf("threads: %d   reps: %d (best-of)\n", omp_get_max_threads(), reps);
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    { // exact lifted evolution, n = 8: 8! * 8 = 322560 states, 64 steps
        const auto spec = ShuffleSpec::rudvalis(8, 0.5);
        LiftedChain chain(spec);
        std::vector<double> a(chain.num_states(), 0.0);
        a[chain.start_index()] = 1.0;
        std::vector<double> b = a;
        std::vector<double> scratch(a.size());
        const int steps = 64;
        const double ts = time_best(reps, [&] {
            for (int t = 0; t < steps; ++t) {
                chain.step(a, scratch, false);
                std::swap(a, scratch);
            }
        });
        const double tp = time_best(reps, [&] {
            for (int t = 0; t < steps; ++t) {
                chain.step(b, scratch, true);
                std::swap(b, scratch);
            }
        });
        report("lifted-evolution n=8", ts, tp, a == b);
    }

    { // Monte Carlo trial loop, n = 40, t = 4000, 256 trials
        const auto spec = ShuffleSpec::rudvalis(40, 0.5);
        const auto es = solve_eigensystem(spec);
        const double ts = time_best(reps, [&] { sample_psi(es, 4000, 256, 12345, false); });
        const double tp = time_best(reps, [&] { sample_psi(es, 4000, 256, 12345, true); });
        const auto s = sample_psi(es, 4000, 256, 12345, false);
        const auto p = sample_psi(es, 4000, 256, 12345, true);
        report("monte-carlo n=40 t=4000", ts, tp, s.psi == p.psi);
    }

    return 0;
}
