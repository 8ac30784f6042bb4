#include "tensor1/kernels.hpp"

#include <atomic>
#include <cassert>
#include <cstdint>

namespace tensor1::kernels {

namespace {

std::atomic<std::size_t> g_threshold{std::size_t(1) << 14};

}  // namespace

std::size_t parallel_threshold() { return g_threshold.load(std::memory_order_relaxed); }
void set_parallel_threshold(std::size_t elements) {
    g_threshold.store(elements, std::memory_order_relaxed);
}

std::size_t ipow_index(int base, int exponent) {
    std::size_t out = 1;
    for (int i = 0; i < exponent; ++i) out *= static_cast<std::size_t>(base);
    return out;
}

namespace {

inline double outer_one(std::span<const double> a, std::span<const double> b, std::size_t t) {
    return a[t / b.size()] * b[t % b.size()];
}

// For output element L of the contraction, the corresponding base offset in
// the input (diagonal slots at index 0) plus the combined diagonal stride.
struct ContractPlan {
    std::size_t stride_a, stride_b;  // input strides of the two diagonal slots
    std::size_t out_size;
    std::size_t low_size, mid_size;  // digit-group sizes around the removed slots
    std::size_t dim;

    ContractPlan(int dim_, int order, int slot_a, int slot_b)
        : dim(static_cast<std::size_t>(dim_)) {
        int slot_lo = slot_a < slot_b ? slot_a : slot_b;
        int slot_hi = slot_a < slot_b ? slot_b : slot_a;
        stride_a = ipow_index(dim_, order - 1 - slot_a);
        stride_b = ipow_index(dim_, order - 1 - slot_b);
        out_size = ipow_index(dim_, order - 2);
        low_size = ipow_index(dim_, order - 1 - slot_hi);
        mid_size = ipow_index(dim_, slot_hi - slot_lo - 1);
    }

    // Base input offset for output linear index L: re-insert a zero digit
    // at each removed slot position.
    inline std::size_t base_offset(std::size_t L) const {
        std::size_t low = L % low_size;
        std::size_t rest = L / low_size;
        std::size_t mid = rest % mid_size;
        std::size_t high = rest / mid_size;
        return ((high * dim * mid_size + mid) * dim) * low_size + low;
    }
};

inline double contract_one(std::span<const double> in, const ContractPlan& p, std::size_t L) {
    std::size_t base = p.base_offset(L);
    std::size_t step = p.stride_a + p.stride_b;
    double acc = 0.0;
    for (std::size_t k = 0; k < p.dim; ++k) acc += in[base + k * step];
    return acc;
}

struct ModePlan {
    std::size_t stride;  // stride of the applied slot
    int dim;

    ModePlan(int dim_, int order, int slot)
        : stride(ipow_index(dim_, order - 1 - slot)), dim(dim_) {}
};

inline double mode_one(std::span<const double> in, std::span<const double> m,
                       const ModePlan& p, std::size_t L) {
    std::size_t d = static_cast<std::size_t>(p.dim);
    std::size_t i = (L / p.stride) % d;
    std::size_t base = L - i * p.stride;
    double acc = 0.0;
    const double* row = m.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) acc += row[j] * in[base + j * p.stride];
    return acc;
}

inline double levi_one(int n, std::size_t L) {
    int idx[16];
    std::size_t rest = L;
    for (int m = n - 1; m >= 0; --m) {
        idx[m] = static_cast<int>(rest % static_cast<std::size_t>(n));
        rest /= static_cast<std::size_t>(n);
    }
    int inversions = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (idx[i] == idx[j]) return 0.0;
            if (idx[i] > idx[j]) ++inversions;
        }
    return (inversions % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

namespace serial {

void outer_product(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    assert(out.size() == a.size() * b.size());
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = outer_one(a, b, t);
}

void contract(std::span<const double> in, int dim, int order, int slot_a, int slot_b,
              std::span<double> out) {
    ContractPlan p(dim, order, slot_a, slot_b);
    assert(out.size() == p.out_size);
    for (std::size_t L = 0; L < out.size(); ++L) out[L] = contract_one(in, p, L);
}

void mode_apply(std::span<const double> in, int dim, int order, int slot,
                std::span<const double> m, std::span<double> out) {
    ModePlan p(dim, order, slot);
    assert(in.size() == out.size());
    for (std::size_t L = 0; L < out.size(); ++L) out[L] = mode_one(in, m, p, L);
}

void levi_civita_fill(std::span<double> out, int n) {
    for (std::size_t L = 0; L < out.size(); ++L) out[L] = levi_one(n, L);
}

}  // namespace serial

namespace parallel {

void outer_product(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    assert(out.size() == a.size() * b.size());
    const std::int64_t total = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < total; ++t)
        out[static_cast<std::size_t>(t)] = outer_one(a, b, static_cast<std::size_t>(t));
}

void contract(std::span<const double> in, int dim, int order, int slot_a, int slot_b,
              std::span<double> out) {
    ContractPlan p(dim, order, slot_a, slot_b);
    assert(out.size() == p.out_size);
    const std::int64_t total = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t L = 0; L < total; ++L)
        out[static_cast<std::size_t>(L)] = contract_one(in, p, static_cast<std::size_t>(L));
}

void mode_apply(std::span<const double> in, int dim, int order, int slot,
                std::span<const double> m, std::span<double> out) {
    ModePlan p(dim, order, slot);
    assert(in.size() == out.size());
    const std::int64_t total = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t L = 0; L < total; ++L)
        out[static_cast<std::size_t>(L)] = mode_one(in, m, p, static_cast<std::size_t>(L));
}

void levi_civita_fill(std::span<double> out, int n) {
    const std::int64_t total = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t L = 0; L < total; ++L)
        out[static_cast<std::size_t>(L)] = levi_one(n, static_cast<std::size_t>(L));
}

}  // namespace parallel

void outer_product(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    if (out.size() >= parallel_threshold())
        parallel::outer_product(a, b, out);
    else
        serial::outer_product(a, b, out);
}

void contract(std::span<const double> in, int dim, int order, int slot_a, int slot_b,
              std::span<double> out) {
    if (in.size() >= parallel_threshold())
        parallel::contract(in, dim, order, slot_a, slot_b, out);
    else
        serial::contract(in, dim, order, slot_a, slot_b, out);
}

void mode_apply(std::span<const double> in, int dim, int order, int slot,
                std::span<const double> m, std::span<double> out) {
    if (out.size() >= parallel_threshold())
        parallel::mode_apply(in, dim, order, slot, m, out);
    else
        serial::mode_apply(in, dim, order, slot, m, out);
}

void levi_civita_fill(std::span<double> out, int n) {
    if (out.size() >= parallel_threshold())
        parallel::levi_civita_fill(out, n);
    else
        serial::levi_civita_fill(out, n);
}

}  // namespace tensor1::kernels
