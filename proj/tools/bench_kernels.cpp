// Compares the serial reference kernels against the OpenMP ones on sizable
// dense tensors and reports timings plus a correctness check. Sizes stay
// inside the configured component cap.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tensor1/kernels.hpp"

namespace {

using namespace tensor1;

using Clock = std::chrono::steady_clock;

double best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = Clock::now();
        fn();
        auto t1 = Clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> out(n);
    for (double& x : out) x = dist(rng);
    return out;
}

bool identical(const std::vector<double>& a, const std::vector<double>& b) {
    return a == b;
}

void report(const char* name, double serial_ms, double parallel_ms, bool match) {
    std::printf("%-22s serial %9.2f ms   openmp %9.2f ms   speedup %5.2fx   %s\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms, match ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both columns run the serial code\n");
#endif
    std::mt19937_64 rng(20260809);
    const int reps = 5;
    int failures = 0;

    {
        // outer product: dim 12 order 3 x order 3 -> order 6 (~3.0M elements)
        const int dim = 12;
        std::vector<double> a = random_vec(kernels::ipow_index(dim, 3), rng);
        std::vector<double> b = random_vec(kernels::ipow_index(dim, 3), rng);
        std::vector<double> out_s(a.size() * b.size()), out_p(a.size() * b.size());
        double ts = best_of(reps, [&] { kernels::serial::outer_product(a, b, out_s); });
        double tp = best_of(reps, [&] { kernels::parallel::outer_product(a, b, out_p); });
        bool ok = identical(out_s, out_p);
        failures += !ok;
        report("outer_product", ts, tp, ok);
    }

    {
        // contraction: dim 12, order 6 (~3.0M elements) over slots (1, 4)
        const int dim = 12, order = 6;
        std::vector<double> in = random_vec(kernels::ipow_index(dim, order), rng);
        std::vector<double> out_s(kernels::ipow_index(dim, order - 2));
        std::vector<double> out_p(out_s.size());
        double ts = best_of(reps, [&] { kernels::serial::contract(in, dim, order, 1, 4, out_s); });
        double tp = best_of(reps, [&] { kernels::parallel::contract(in, dim, order, 1, 4, out_p); });
        bool ok = identical(out_s, out_p);
        failures += !ok;
        report("contract", ts, tp, ok);
    }

    {
        // change of basis on one slot: dim 12, order 6
        const int dim = 12, order = 6;
        std::vector<double> in = random_vec(kernels::ipow_index(dim, order), rng);
        std::vector<double> m = random_vec(static_cast<std::size_t>(dim) * dim, rng);
        std::vector<double> out_s(in.size()), out_p(in.size());
        double ts = best_of(reps, [&] { kernels::serial::mode_apply(in, dim, order, 2, m, out_s); });
        double tp = best_of(reps, [&] { kernels::parallel::mode_apply(in, dim, order, 2, m, out_p); });
        bool ok = identical(out_s, out_p);
        failures += !ok;
        report("mode_apply", ts, tp, ok);
    }

    {
        // permutation symbol fill: n = 8 -> 16.7M entries (bench only; the
        // engine caps Levi-Civita at n <= 6 by default)
        const int n = 8;
        std::vector<double> out_s(kernels::ipow_index(n, n)), out_p(out_s.size());
        double ts = best_of(reps, [&] { kernels::serial::levi_civita_fill(out_s, n); });
        double tp = best_of(reps, [&] { kernels::parallel::levi_civita_fill(out_p, n); });
        bool ok = identical(out_s, out_p);
        failures += !ok;
        report("levi_civita_fill", ts, tp, ok);
    }

    return failures;
}
