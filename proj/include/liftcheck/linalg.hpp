#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace liftcheck {

// Dense helpers sized for chart dimensions (n or 2n with small n).
// Row-major throughout; no expression templates, no aliasing tricks.

class Mat {
public:
    Mat() = default;
    Mat(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

    static Mat identity(size_t n) {
        Mat m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    double& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
    double operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<double>& data() const { return a_; }

private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

inline Mat operator*(const Mat& x, const Mat& y) {
    if (x.cols() != y.rows()) throw std::invalid_argument("matrix shape mismatch");
    Mat r(x.rows(), y.cols());
    for (size_t i = 0; i < x.rows(); ++i)
        for (size_t k = 0; k < x.cols(); ++k) {
            double v = x(i, k);
            if (v == 0.0) continue;
            for (size_t j = 0; j < y.cols(); ++j) r(i, j) += v * y(k, j);
        }
    return r;
}

inline Mat operator-(const Mat& x, const Mat& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw std::invalid_argument("matrix shape mismatch");
    Mat r(x.rows(), x.cols());
    for (size_t i = 0; i < x.rows(); ++i)
        for (size_t j = 0; j < x.cols(); ++j) r(i, j) = x(i, j) - y(i, j);
    return r;
}

inline Mat operator+(const Mat& x, const Mat& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw std::invalid_argument("matrix shape mismatch");
    Mat r(x.rows(), x.cols());
    for (size_t i = 0; i < x.rows(); ++i)
        for (size_t j = 0; j < x.cols(); ++j) r(i, j) = x(i, j) + y(i, j);
    return r;
}

inline Mat operator*(double s, const Mat& x) {
    Mat r(x.rows(), x.cols());
    for (size_t i = 0; i < x.rows(); ++i)
        for (size_t j = 0; j < x.cols(); ++j) r(i, j) = s * x(i, j);
    return r;
}

inline Mat transpose(const Mat& x) {
    Mat r(x.cols(), x.rows());
    for (size_t i = 0; i < x.rows(); ++i)
        for (size_t j = 0; j < x.cols(); ++j) r(j, i) = x(i, j);
    return r;
}

inline double max_abs(const Mat& x) {
    double m = 0.0;
    for (double v : x.data()) m = std::max(m, std::abs(v));
    return m;
}

// Gaussian elimination with partial pivoting. Throws on a pivot smaller
// than 1e-13 times the matrix scale; callers treat that as a singular input.
inline Mat lu_inverse(const Mat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square");
    const size_t n = m.rows();
    Mat a = m;
    Mat inv = Mat::identity(n);
    double scale = std::max(max_abs(m), 1.0);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) <= 1e-13 * scale)
            throw std::runtime_error("singular matrix");
        if (piv != col)
            for (size_t j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        double d = a(col, col);
        for (size_t j = 0; j < n; ++j) {
            a(col, j) /= d;
            inv(col, j) /= d;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a(r, col);
            if (f == 0.0) continue;
            for (size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(size_t n1, size_t n2, size_t n3)
        : n1_(n1), n2_(n2), n3_(n3), a_(n1 * n2 * n3, 0.0) {}

    double& operator()(size_t i, size_t j, size_t k) {
        return a_[(i * n2_ + j) * n3_ + k];
    }
    double operator()(size_t i, size_t j, size_t k) const {
        return a_[(i * n2_ + j) * n3_ + k];
    }

    size_t dim1() const { return n1_; }
    size_t dim2() const { return n2_; }
    size_t dim3() const { return n3_; }
    const std::vector<double>& data() const { return a_; }

private:
    size_t n1_ = 0, n2_ = 0, n3_ = 0;
    std::vector<double> a_;
};

class Tensor4 {
public:
    Tensor4() = default;
    Tensor4(size_t n1, size_t n2, size_t n3, size_t n4)
        : n1_(n1), n2_(n2), n3_(n3), n4_(n4), a_(n1 * n2 * n3 * n4, 0.0) {}

    double& operator()(size_t i, size_t j, size_t k, size_t l) {
        return a_[((i * n2_ + j) * n3_ + k) * n4_ + l];
    }
    double operator()(size_t i, size_t j, size_t k, size_t l) const {
        return a_[((i * n2_ + j) * n3_ + k) * n4_ + l];
    }

    size_t dim1() const { return n1_; }
    size_t dim2() const { return n2_; }
    size_t dim3() const { return n3_; }
    size_t dim4() const { return n4_; }
    const std::vector<double>& data() const { return a_; }

private:
    size_t n1_ = 0, n2_ = 0, n3_ = 0, n4_ = 0;
    std::vector<double> a_;
};

inline double max_abs(const Tensor3& t) {
    double m = 0.0;
    for (double v : t.data()) m = std::max(m, std::abs(v));
    return m;
}

inline double max_abs(const Tensor4& t) {
    double m = 0.0;
    for (double v : t.data()) m = std::max(m, std::abs(v));
    return m;
}

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace liftcheck
