#pragma once

#include "tcs/matrix.hpp"
#include "tcs/numeric.hpp"

#include <cstddef>
#include <optional>
#include <vector>

// Integer elimination: Hermite and Smith normal forms, kernels, saturation.
// Pivot selection is the smallest nonzero absolute value, ties broken by the
// lowest row index (then lowest column index), so every result is
// deterministic and suitable for golden tests.

namespace tcs {

template <class T>
T floor_div(const T& a, const T& b) {
    T q = a / b;
    if (q * b != a && ((a < T(0)) != (b < T(0)))) q -= T(1);
    return q;
}

/// L * input * R = d with L, R unimodular; left_inv = L^-1.
template <class T>
struct SmithResult {
    Matrix<T> d;
    Matrix<T> left;
    Matrix<T> left_inv;
    Matrix<T> right;
};

namespace detail {

template <class T>
std::optional<std::pair<std::size_t, std::size_t>> min_abs_pivot(const Matrix<T>& m,
                                                                 std::size_t from) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = from; i < m.rows; ++i)
        for (std::size_t j = from; j < m.cols; ++j) {
            if (m(i, j) == T(0)) continue;
            if (!best || abs_of(m(i, j)) < abs_of(m(best->first, best->second))) best = {{i, j}};
        }
    return best;
}

}  // namespace detail

template <class T>
SmithResult<T> smith_normal_form(Matrix<T> m) {
    const std::size_t n = m.rows, k = m.cols;
    SmithResult<T> res;
    res.left = Matrix<T>::identity(n);
    res.left_inv = Matrix<T>::identity(n);
    res.right = Matrix<T>::identity(k);

    auto row_op = [&](std::size_t i, std::size_t j, const T& c) {
        m.add_row(i, j, c);
        res.left.add_row(i, j, c);
        res.left_inv.add_col(j, i, -c);
    };
    auto row_swap = [&](std::size_t i, std::size_t j) {
        m.swap_rows(i, j);
        res.left.swap_rows(i, j);
        res.left_inv.swap_cols(i, j);
    };
    auto row_neg = [&](std::size_t i) {
        m.negate_row(i);
        res.left.negate_row(i);
        res.left_inv.negate_col(i);
    };
    auto col_op = [&](std::size_t i, std::size_t j, const T& c) {
        m.add_col(i, j, c);
        res.right.add_col(i, j, c);
    };
    auto col_swap = [&](std::size_t i, std::size_t j) {
        m.swap_cols(i, j);
        res.right.swap_cols(i, j);
    };

    std::size_t t = 0;
    const std::size_t steps = std::min(n, k);
    while (t < steps) {
        auto piv = detail::min_abs_pivot(m, t);
        if (!piv) break;
        row_swap(t, piv->first);
        col_swap(t, piv->second);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < n; ++i) {
                if (m(i, t) == T(0)) continue;
                row_op(i, t, -floor_div(m(i, t), m(t, t)));
                if (m(i, t) != T(0)) {  // remainder smaller than pivot: promote it
                    row_swap(t, i);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < k; ++j) {
                if (m(t, j) == T(0)) continue;
                col_op(j, t, -floor_div(m(t, j), m(t, t)));
                if (m(t, j) != T(0)) {
                    col_swap(t, j);
                    clean = false;
                }
            }
        }
        if (m(t, t) < T(0)) row_neg(t);

        // Divisibility chain: fold any non-multiple into the pivot position.
        bool redo = false;
        for (std::size_t i = t + 1; i < n && !redo; ++i)
            for (std::size_t j = t + 1; j < k && !redo; ++j)
                if (m(i, j) % m(t, t) != T(0)) {
                    row_op(t, i, T(1));
                    redo = true;
                }
        if (redo) continue;
        ++t;
    }
    res.d = std::move(m);
    return res;
}

/// Nonzero diagonal entries of the Smith form, in divisibility order.
template <class T>
std::vector<T> invariant_factors(const Matrix<T>& m) {
    auto snf = smith_normal_form(m);
    std::vector<T> out;
    for (std::size_t i = 0; i < std::min(m.rows, m.cols); ++i)
        if (snf.d(i, i) != T(0)) out.push_back(snf.d(i, i));
    return out;
}

/// Canonical row Hermite form: pivots positive, entries above a pivot reduced
/// into [0, pivot). Zero rows are dropped, so the result is a canonical basis
/// of the row span.
template <class T>
Matrix<T> row_hermite_form(Matrix<T> m) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        // Euclidean-reduce column c below row r to a single nonzero entry.
        while (true) {
            std::optional<std::size_t> piv;
            for (std::size_t i = r; i < m.rows; ++i) {
                if (m(i, c) == T(0)) continue;
                if (!piv || abs_of(m(i, c)) < abs_of(m(*piv, c))) piv = i;
            }
            if (!piv) break;
            m.swap_rows(r, *piv);
            bool others = false;
            for (std::size_t i = r + 1; i < m.rows; ++i) {
                if (m(i, c) == T(0)) continue;
                m.add_row(i, r, -floor_div(m(i, c), m(r, c)));
                if (m(i, c) != T(0)) others = true;
            }
            if (!others) break;
        }
        if (m(r, c) == T(0)) continue;
        if (m(r, c) < T(0)) m.negate_row(r);
        for (std::size_t i = 0; i < r; ++i)
            m.add_row(i, r, -floor_div(m(i, c), m(r, c)));
        ++r;
    }
    Matrix<T> out(r, m.cols);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out(i, j) = m(i, j);
    return out;
}

template <class T>
std::size_t rank_of(const Matrix<T>& m) {
    return row_hermite_form(m).rows;
}

/// Basis of {x in Z^n : m x = 0} for an r x n matrix, returned as the rows of
/// a canonical (Hermite-reduced) matrix. The kernel of an integer matrix is
/// saturated, so this basis generates a primitive sublattice.
template <class T>
Matrix<T> kernel_rows(const Matrix<T>& m) {
    Matrix<T> b = m.transposed();           // n x r
    Matrix<T> u = Matrix<T>::identity(b.rows);
    std::size_t r = 0;
    for (std::size_t c = 0; c < b.cols && r < b.rows; ++c) {
        while (true) {
            std::optional<std::size_t> piv;
            for (std::size_t i = r; i < b.rows; ++i) {
                if (b(i, c) == T(0)) continue;
                if (!piv || abs_of(b(i, c)) < abs_of(b(*piv, c))) piv = i;
            }
            if (!piv) break;
            b.swap_rows(r, *piv);
            u.swap_rows(r, *piv);
            bool others = false;
            for (std::size_t i = r + 1; i < b.rows; ++i) {
                if (b(i, c) == T(0)) continue;
                T q = -floor_div(b(i, c), b(r, c));
                b.add_row(i, r, q);
                u.add_row(i, r, q);
                if (b(i, c) != T(0)) others = true;
            }
            if (!others) break;
        }
        if (b(r, c) != T(0)) ++r;
    }
    Matrix<T> ker(b.rows - r, b.cols == 0 ? u.cols : u.cols);
    for (std::size_t i = r; i < b.rows; ++i)
        for (std::size_t j = 0; j < u.cols; ++j) ker(i - r, j) = u(i, j);
    return row_hermite_form(ker);
}

/// Canonical basis (as rows) of the saturation of the column span of m:
/// the smallest sublattice of Z^n containing the columns whose quotient is
/// torsion-free.
template <class T>
Matrix<T> saturation_rows(const Matrix<T>& m) {
    auto snf = smith_normal_form(m);
    std::size_t r = 0;
    for (std::size_t i = 0; i < std::min(m.rows, m.cols); ++i)
        if (snf.d(i, i) != T(0)) ++r;
    Matrix<T> gen(r, m.rows);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < m.rows; ++i) gen(j, i) = snf.left_inv(i, j);
    return row_hermite_form(gen);
}

/// Fraction-free determinant of a square matrix.
template <class T>
T bareiss_determinant(Matrix<T> m) {
    if (m.rows != m.cols) throw std::invalid_argument("determinant of non-square matrix");
    const std::size_t n = m.rows;
    if (n == 0) return T(1);
    T sign(1), prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == T(0)) {
            std::size_t s = k + 1;
            while (s < n && m(s, k) == T(0)) ++s;
            if (s == n) return T(0);
            m.swap_rows(k, s);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

namespace detail {

template <class T>
Matrix<T> convert(const IMat& m) {
    Matrix<T> out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) out.a[i] = T(m.a[i]);
    return out;
}

inline IMat from_checked(const Matrix<CheckedInt>& m) {
    IMat out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) out.a[i] = m.a[i].v;
    return out;
}

}  // namespace detail

/// Runs fn on a CheckedInt copy of m, retrying with BigInt on overflow.
/// fn must be a template-friendly callable returning Matrix<T>.
template <class F>
IMat with_exact_fallback(const IMat& m, F&& fn) {
    try {
        return detail::from_checked(fn(detail::convert<CheckedInt>(m)));
    } catch (const std::overflow_error&) {
        BMat big = fn(detail::convert<BigInt>(m));
        return to_small(big);
    }
}

inline IMat kernel_rows_exact(const IMat& m) {
    return with_exact_fallback(m, [](auto x) { return kernel_rows(x); });
}

inline IMat saturation_rows_exact(const IMat& m) {
    return with_exact_fallback(m, [](auto x) { return saturation_rows(x); });
}

inline IMat row_hermite_form_exact(const IMat& m) {
    return with_exact_fallback(m, [](auto x) { return row_hermite_form(x); });
}

inline std::vector<BigInt> invariant_factors_exact(const IMat& m) {
    try {
        auto fs = invariant_factors(detail::convert<CheckedInt>(m));
        std::vector<BigInt> out;
        for (auto f : fs) out.emplace_back(f.v);
        return out;
    } catch (const std::overflow_error&) {
        return invariant_factors(detail::convert<BigInt>(m));
    }
}

inline std::size_t rank_exact(const IMat& m) {
    try {
        return rank_of(detail::convert<CheckedInt>(m));
    } catch (const std::overflow_error&) {
        return rank_of(detail::convert<BigInt>(m));
    }
}

inline BigInt determinant_exact(const IMat& m) {
    return bareiss_determinant(detail::convert<BigInt>(m));
}

}  // namespace tcs
