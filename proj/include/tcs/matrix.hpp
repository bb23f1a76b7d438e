#pragma once

#include "tcs/numeric.hpp"

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace tcs {

/// Dense row-major matrix over an exact integer type.
template <class T>
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<T> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, T(0)) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows = init.size();
        cols = rows ? init.begin()->size() : 0;
        a.reserve(rows * cols);
        for (const auto& row : init) {
            if (row.size() != cols) throw std::invalid_argument("ragged matrix literal");
            for (const auto& v : row) a.push_back(v);
        }
    }

    T& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    bool operator==(const Matrix& o) const = default;

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    Matrix transposed() const {
        Matrix m(cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t k = 0; k < cols; ++k) std::swap((*this)(i, k), (*this)(j, k));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t k = 0; k < rows; ++k) std::swap((*this)(k, i), (*this)(k, j));
    }
    /// row_i += c * row_j
    void add_row(std::size_t i, std::size_t j, const T& c) {
        for (std::size_t k = 0; k < cols; ++k) (*this)(i, k) += c * (*this)(j, k);
    }
    /// col_i += c * col_j
    void add_col(std::size_t i, std::size_t j, const T& c) {
        for (std::size_t k = 0; k < rows; ++k) (*this)(k, i) += c * (*this)(k, j);
    }
    void negate_row(std::size_t i) {
        for (std::size_t k = 0; k < cols; ++k) (*this)(i, k) = -(*this)(i, k);
    }
    void negate_col(std::size_t i) {
        for (std::size_t k = 0; k < rows; ++k) (*this)(k, i) = -(*this)(k, i);
    }
};

template <class T>
Matrix<T> operator*(const Matrix<T>& x, const Matrix<T>& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matrix product shape mismatch");
    Matrix<T> z(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            const T& v = x(i, k);
            if (v == T(0)) continue;
            for (std::size_t j = 0; j < y.cols; ++j) z(i, j) += v * y(k, j);
        }
    return z;
}

using IMat = Matrix<Int>;
using BMat = Matrix<BigInt>;

inline BMat to_big(const IMat& m) {
    BMat b(m.rows, m.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) b.a[i] = m.a[i];
    return b;
}

inline IMat to_small(const BMat& m, const char* what = "matrix entry") {
    IMat s(m.rows, m.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) s.a[i] = to_int_checked(m.a[i], what);
    return s;
}

}  // namespace tcs
