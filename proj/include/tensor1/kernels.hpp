#pragma once

#include <cstddef>
#include <span>

namespace tensor1::kernels {

// Dense row-major kernels behind the tensor operations. Every kernel has a
// serial reference implementation and an OpenMP one that parallelizes over
// independent output elements, so the two produce bitwise-identical
// results. The unqualified entry points dispatch on output size.

std::size_t parallel_threshold();
void set_parallel_threshold(std::size_t elements);

std::size_t ipow_index(int base, int exponent);

namespace serial {

// out[i*b.size() + j] = a[i] * b[j]
void outer_product(std::span<const double> a, std::span<const double> b, std::span<double> out);

// Sum over the diagonal of slots (slot_a, slot_b) of an order-`order`
// tensor with extent `dim` per slot; out has order-2 slots.
void contract(std::span<const double> in, int dim, int order, int slot_a, int slot_b,
              std::span<double> out);

// Apply matrix m (dim x dim, row-major) along `slot`:
// out(..., i, ...) = sum_j m[i*dim + j] * in(..., j, ...)
void mode_apply(std::span<const double> in, int dim, int order, int slot,
                std::span<const double> m, std::span<double> out);

// Components of the order-n permutation symbol: sign of the index
// permutation, zero on repeated indexes. out.size() == n^n.
void levi_civita_fill(std::span<double> out, int n);

}  // namespace serial

namespace parallel {

void outer_product(std::span<const double> a, std::span<const double> b, std::span<double> out);
void contract(std::span<const double> in, int dim, int order, int slot_a, int slot_b,
              std::span<double> out);
void mode_apply(std::span<const double> in, int dim, int order, int slot,
                std::span<const double> m, std::span<double> out);
void levi_civita_fill(std::span<double> out, int n);

}  // namespace parallel

void outer_product(std::span<const double> a, std::span<const double> b, std::span<double> out);
void contract(std::span<const double> in, int dim, int order, int slot_a, int slot_b,
              std::span<double> out);
void mode_apply(std::span<const double> in, int dim, int order, int slot,
                std::span<const double> m, std::span<double> out);
void levi_civita_fill(std::span<double> out, int n);

}  // namespace tensor1::kernels
