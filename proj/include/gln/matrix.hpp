// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#ifndef GLN_MATRIX_HPP
#define GLN_MATRIX_HPP

#include "exactnum.hpp"

#include <Eigen/Dense>

#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace gln {

/// Dense row-major matrix over a ring T.
template <class T>
class Matrix
{
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0)) : r_(rows), c_(cols), a_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<T>> rows)
    {
        r_ = rows.size();
        c_ = r_ ? rows.begin()->size() : 0;
        for (const auto& row : rows) {
            if (row.size() != c_) throw std::invalid_argument("Matrix: ragged rows");
            a_.insert(a_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    T& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    Matrix transpose() const
    {
        Matrix t(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.c_ != b.r_) throw std::invalid_argument("Matrix: shape mismatch");
        Matrix m(a.r_, b.c_);
        for (std::size_t i = 0; i < a.r_; ++i)
            for (std::size_t k = 0; k < a.c_; ++k) {
                const T& x = a(i, k);
                if (is_zero(x)) continue;
                for (std::size_t j = 0; j < b.c_; ++j) m(i, j) = m(i, j) + x * b(k, j);
            }
        return m;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b)
    {
        Matrix m = a;
        for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = m.a_[i] + b.a_[i];
        return m;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b)
    {
        Matrix m = a;
        for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = m.a_[i] - b.a_[i];
        return m;
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        if (a.r_ != b.r_ || a.c_ != b.c_) return false;
        for (std::size_t i = 0; i < a.a_.size(); ++i)
            if (!is_zero(T(a.a_[i] - b.a_[i]))) return false;
        return true;
    }

    friend std::ostream& operator<<(std::ostream& os, const Matrix& m)
    {
        os << "[";
        for (std::size_t i = 0; i < m.r_; ++i) {
            os << (i ? ",[" : "[");
            for (std::size_t j = 0; j < m.c_; ++j) os << (j ? "," : "") << m(i, j);
            os << "]";
        }
        return os << "]";
    }

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<T> a_;
};

using RatMatrix = Matrix<Rational>;
using CMatrix = Matrix<cplx>;

/// Determinant over a field by Gaussian elimination.
template <class T>
T determinant(Matrix<T> m)
{
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
    std::size_t n = m.rows();
    T det = T(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = n;
        for (std::size_t r = c; r < n; ++r)
            if (!is_zero(m(r, c))) {
                piv = r;
                break;
            }
        if (piv == n) return T(0);
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
            det = -det;
        }
        det = det * m(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            if (is_zero(m(r, c))) continue;
            T f = m(r, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(r, j) = m(r, j) - f * m(c, j);
        }
    }
    return det;
}

/// Inverse over a field; throws on singular input.
template <class T>
Matrix<T> inverse(Matrix<T> m)
{
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: not square");
    std::size_t n = m.rows();
    Matrix<T> inv = Matrix<T>::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = n;
        for (std::size_t r = c; r < n; ++r)
            if (!is_zero(m(r, c))) {
                piv = r;
                break;
            }
        if (piv == n) throw std::domain_error("inverse: singular matrix");
        if (piv != c)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(piv, j), m(c, j));
                std::swap(inv(piv, j), inv(c, j));
            }
        T d = m(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            m(c, j) = m(c, j) / d;
            inv(c, j) = inv(c, j) / d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || is_zero(m(r, c))) continue;
            T f = m(r, c);
            for (std::size_t j = 0; j < n; ++j) {
                m(r, j) = m(r, j) - f * m(c, j);
                inv(r, j) = inv(r, j) - f * inv(c, j);
            }
        }
    }
    return inv;
}

inline Eigen::MatrixXcd to_eigen(const CMatrix& m)
{
    Eigen::MatrixXcd e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return e;
}

inline CMatrix from_eigen(const Eigen::MatrixXcd& e)
{
    CMatrix m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return m;
}

/// 2-norm condition number from the singular values.
inline double condition_number(const CMatrix& m)
{
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
    const auto& s = svd.singularValues();
    return s(s.size() - 1) == 0.0 ? std::numeric_limits<double>::infinity() : s(0) / s(s.size() - 1);
}

/// Numeric inverse via partial-pivot LU.
inline CMatrix complex_inverse(const CMatrix& m)
{
    return from_eigen(to_eigen(m).partialPivLu().inverse());
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b)
{
    double d = 0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

} // namespace gln

#endif // GLN_MATRIX_HPP
