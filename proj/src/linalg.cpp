#include "tensor1/linalg.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace tensor1 {

Mat Mat::identity(int n) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

Mat mat_mul(const Mat& x, const Mat& y) {
    if (x.n != y.n) throw std::invalid_argument("matrix size mismatch");
    Mat out(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int k = 0; k < x.n; ++k) {
            double xv = x.at(i, k);
            if (xv == 0.0) continue;
            for (int j = 0; j < x.n; ++j) out.at(i, j) += xv * y.at(k, j);
        }
    return out;
}

Mat transpose(const Mat& x) {
    Mat out(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < x.n; ++j) out.at(j, i) = x.at(i, j);
    return out;
}

std::vector<double> mat_vec(const Mat& m, std::span<const double> v) {
    if (static_cast<int>(v.size()) != m.n) throw std::invalid_argument("matrix-vector size mismatch");
    std::vector<double> out(v.size(), 0.0);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) out[static_cast<std::size_t>(i)] += m.at(i, j) * v[static_cast<std::size_t>(j)];
    return out;
}

namespace {

// In-place LU factorization with partial pivoting. Returns false on a zero
// pivot; `sign` accumulates the permutation parity.
bool lu_factor(Mat& m, std::vector<int>& perm, double& sign) {
    int n = m.n;
    perm.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    sign = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::fabs(m.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = std::fabs(m.at(r, col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best == 0.0) return false;
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(m.a[static_cast<std::size_t>(pivot) * n + j],
                                                  m.a[static_cast<std::size_t>(col) * n + j]);
            std::swap(perm[static_cast<std::size_t>(pivot)], perm[static_cast<std::size_t>(col)]);
            sign = -sign;
        }
        double inv = 1.0 / m.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            double f = m.at(r, col) * inv;
            m.at(r, col) = f;
            for (int j = col + 1; j < n; ++j) m.at(r, j) -= f * m.at(col, j);
        }
    }
    return true;
}

}  // namespace

double determinant(const Mat& m) {
    Mat lu = m;
    std::vector<int> perm;
    double sign = 1.0;
    if (!lu_factor(lu, perm, sign)) return 0.0;
    double det = sign;
    for (int i = 0; i < m.n; ++i) det *= lu.at(i, i);
    return det;
}

std::optional<Mat> invert(const Mat& m, double* det_out) {
    int n = m.n;
    Mat lu = m;
    std::vector<int> perm;
    double sign = 1.0;
    bool ok = lu_factor(lu, perm, sign);
    if (det_out) {
        if (!ok) {
            *det_out = 0.0;
        } else {
            double det = sign;
            for (int i = 0; i < n; ++i) det *= lu.at(i, i);
            *det_out = det;
        }
    }
    if (!ok) return std::nullopt;

    Mat inv(n);
    std::vector<double> col(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) {
        // forward substitution on the permuted unit vector
        for (int i = 0; i < n; ++i) {
            double s = perm[static_cast<std::size_t>(i)] == e ? 1.0 : 0.0;
            for (int j = 0; j < i; ++j) s -= lu.at(i, j) * col[static_cast<std::size_t>(j)];
            col[static_cast<std::size_t>(i)] = s;
        }
        // back substitution
        for (int i = n - 1; i >= 0; --i) {
            double s = col[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < n; ++j) s -= lu.at(i, j) * col[static_cast<std::size_t>(j)];
            col[static_cast<std::size_t>(i)] = s / lu.at(i, i);
        }
        for (int i = 0; i < n; ++i) inv.at(i, e) = col[static_cast<std::size_t>(i)];
    }
    return inv;
}

}  // namespace tensor1
