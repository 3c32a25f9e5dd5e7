#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace halo::linalg {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill) : r_(rows), c_(cols), a_(rows * cols, fill) {}

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    T& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    Matrix transposed() const {
        Matrix t(c_, r_, a_.empty() ? T{} : a_[0]);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<T> a_;
};

// Product with explicit zero so element types without a default value work.
template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b, const T& zero) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
    Matrix<T> c(a.rows(), b.cols(), zero);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = c(i, j) + a(i, k) * b(k, j);
    return c;
}

// Coefficients c_0..c_n of det(1 - t A), division free (Berkowitz).
template <class T>
std::vector<T> fredholm_berkowitz(const Matrix<T>& A, const T& zero, const T& one) {
    const std::size_t n = A.rows();
    if (A.cols() != n) throw std::invalid_argument("Berkowitz needs a square matrix");
    if (n == 0) return {one};
    std::vector<T> vect{one, zero - A(0, 0)};
    for (std::size_t r = 1; r < n; ++r) {
        // q = [1, -a, -R C, -R A C, ..., -R A^{r-1} C]
        std::vector<T> q;
        q.reserve(r + 2);
        q.push_back(one);
        q.push_back(zero - A(r, r));
        std::vector<T> v(r, zero);
        for (std::size_t i = 0; i < r; ++i) v[i] = A(i, r);
        for (std::size_t k = 0; k < r; ++k) {
            T s = zero;
            for (std::size_t i = 0; i < r; ++i) s = s + A(r, i) * v[i];
            q.push_back(zero - s);
            if (k + 1 < r) {
                std::vector<T> w(r, zero);
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < r; ++j) w[i] = w[i] + A(i, j) * v[j];
                v = std::move(w);
            }
        }
        std::vector<T> nv(r + 2, zero);
        for (std::size_t i = 0; i < r + 2; ++i)
            for (std::size_t j = 0; j <= std::min(i, r); ++j) nv[i] = nv[i] + q[i - j] * vect[j];
        vect = std::move(nv);
    }
    return vect;
}

}  // namespace halo::linalg
