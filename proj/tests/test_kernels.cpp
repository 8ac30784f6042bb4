#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tensor1/kernels.hpp"

using namespace tensor1;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<double> out(n);
    for (double& x : out) x = dist(rng);
    return out;
}

}  // namespace

TEST_CASE("serial and parallel kernels are bitwise identical") {
    std::mt19937_64 rng(42);

    SUBCASE("outer product") {
        for (auto [na, nb] : {std::pair<int, int>{3, 4}, {16, 16}, {81, 243}}) {
            std::vector<double> a = random_vec(static_cast<std::size_t>(na), rng);
            std::vector<double> b = random_vec(static_cast<std::size_t>(nb), rng);
            std::vector<double> s(a.size() * b.size()), p(a.size() * b.size());
            kernels::serial::outer_product(a, b, s);
            kernels::parallel::outer_product(a, b, p);
            CHECK(s == p);
        }
    }

    SUBCASE("contract over every slot pair") {
        const int dim = 3, order = 4;
        std::vector<double> in = random_vec(kernels::ipow_index(dim, order), rng);
        for (int sa = 0; sa < order; ++sa)
            for (int sb = 0; sb < order; ++sb) {
                if (sa == sb) continue;
                std::vector<double> s(kernels::ipow_index(dim, order - 2));
                std::vector<double> p(s.size());
                kernels::serial::contract(in, dim, order, sa, sb, s);
                kernels::parallel::contract(in, dim, order, sa, sb, p);
                CHECK(s == p);
            }
    }

    SUBCASE("mode_apply over every slot") {
        const int dim = 4, order = 3;
        std::vector<double> in = random_vec(kernels::ipow_index(dim, order), rng);
        std::vector<double> m = random_vec(static_cast<std::size_t>(dim) * dim, rng);
        for (int slot = 0; slot < order; ++slot) {
            std::vector<double> s(in.size()), p(in.size());
            kernels::serial::mode_apply(in, dim, order, slot, m, s);
            kernels::parallel::mode_apply(in, dim, order, slot, m, p);
            CHECK(s == p);
        }
    }

    SUBCASE("levi fill") {
        for (int n = 1; n <= 5; ++n) {
            std::vector<double> s(kernels::ipow_index(n, n)), p(s.size());
            kernels::serial::levi_civita_fill(s, n);
            kernels::parallel::levi_civita_fill(p, n);
            CHECK(s == p);
        }
    }
}

TEST_CASE("contract kernel matches explicit odometer summation") {
    std::mt19937_64 rng(43);
    for (int dim : {2, 3}) {
        for (int order : {2, 3, 4}) {
            std::vector<double> in = random_vec(kernels::ipow_index(dim, order), rng);
            for (int sa = 0; sa < order; ++sa)
                for (int sb = sa + 1; sb < order; ++sb) {
                    std::vector<double> got(kernels::ipow_index(dim, order - 2));
                    kernels::serial::contract(in, dim, order, sa, sb, got);

                    // oracle: enumerate all input tuples, accumulate the diagonal
                    std::vector<double> want(got.size(), 0.0);
                    oracles::odometer(dim, order, [&](const std::vector<long long>& idx,
                                                      std::size_t off) {
                        if (idx[static_cast<std::size_t>(sa)] != idx[static_cast<std::size_t>(sb)])
                            return;
                        std::vector<long long> kept;
                        for (int s = 0; s < order; ++s)
                            if (s != sa && s != sb) kept.push_back(idx[static_cast<std::size_t>(s)]);
                        std::size_t out_off = 0;
                        for (long long k : kept)
                            out_off = out_off * static_cast<std::size_t>(dim) +
                                      static_cast<std::size_t>(k - 1);
                        want[out_off] += in[off];
                    });
                    for (std::size_t i = 0; i < got.size(); ++i)
                        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));
                }
        }
    }
}

TEST_CASE("mode_apply matches explicit summation") {
    std::mt19937_64 rng(44);
    const int dim = 3, order = 3;
    std::vector<double> in = random_vec(kernels::ipow_index(dim, order), rng);
    std::vector<double> m = random_vec(9, rng);
    for (int slot = 0; slot < order; ++slot) {
        std::vector<double> got(in.size());
        kernels::serial::mode_apply(in, dim, order, slot, m, got);
        oracles::odometer(dim, order, [&](const std::vector<long long>& idx, std::size_t off) {
            double want = 0.0;
            std::vector<long long> src = idx;
            for (long long j = 1; j <= dim; ++j) {
                src[static_cast<std::size_t>(slot)] = j;
                std::size_t src_off = 0;
                for (long long k : src)
                    src_off = src_off * static_cast<std::size_t>(dim) + static_cast<std::size_t>(k - 1);
                want += m[static_cast<std::size_t>((idx[static_cast<std::size_t>(slot)] - 1) * dim +
                                                   (j - 1))] *
                        in[src_off];
            }
            CHECK(got[off] == doctest::Approx(want).epsilon(1e-14));
        });
    }
}

TEST_CASE("levi fill matches the permutation-sign oracle") {
    for (int n = 2; n <= 4; ++n) {
        std::vector<double> got(kernels::ipow_index(n, n));
        kernels::serial::levi_civita_fill(got, n);
        oracles::odometer(n, n, [&](const std::vector<long long>& idx, std::size_t off) {
            CHECK(got[off] == static_cast<double>(oracles::permutation_sign(idx)));
        });
    }
}

TEST_CASE("dispatcher honors the threshold") {
    std::size_t saved = kernels::parallel_threshold();
    kernels::set_parallel_threshold(1);
    std::vector<double> a{1.0, 2.0}, b{3.0, 4.0};
    std::vector<double> out(4);
    kernels::outer_product(a, b, out);
    CHECK(out == std::vector<double>{3.0, 4.0, 6.0, 8.0});
    kernels::set_parallel_threshold(saved);
}
