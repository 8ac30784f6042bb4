#pragma once

#include <optional>
#include <span>
#include <vector>

namespace tensor1 {

// Small square matrix, row-major, 0-based. Frame dimensions are capped at
// 16, so plain LU with partial pivoting is all that is needed.
struct Mat {
    int n = 0;
    std::vector<double> a;

    Mat() = default;
    explicit Mat(int size) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {}

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    static Mat identity(int n);
};

Mat mat_mul(const Mat& x, const Mat& y);
Mat transpose(const Mat& x);
std::vector<double> mat_vec(const Mat& m, std::span<const double> v);

double determinant(const Mat& m);

// LU inverse with partial pivoting; nullopt on a zero pivot. When det_out
// is non-null it receives the determinant even if inversion fails.
std::optional<Mat> invert(const Mat& m, double* det_out = nullptr);

}  // namespace tensor1
