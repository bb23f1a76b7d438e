#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tcs {

// Public lattice data (Gram entries, coordinates) lives in 64-bit integers;
// elimination-style algorithms run on arbitrary precision internally so that
// intermediate coefficient growth can never overflow.
using Int = std::int64_t;
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Thrown when a bounded search ran to completion without a hit.
/// The condition searched for may still be satisfiable at a larger radius.
struct search_exhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when structured input (database record, certificate, hint file)
/// fails a consistency requirement.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Int to_int_checked(const BigInt& v, const char* what = "value") {
    if (v > BigInt(INT64_MAX) || v < BigInt(INT64_MIN))
        throw std::overflow_error(std::string(what) + " exceeds 64-bit range");
    return static_cast<Int>(v);
}

/// 64-bit integer whose arithmetic throws std::overflow_error instead of
/// wrapping. Elimination algorithms run on this type first and fall back to
/// BigInt when a computation genuinely needs more headroom.
struct CheckedInt {
    Int v = 0;

    CheckedInt() = default;
    CheckedInt(Int x) : v(x) {}  // NOLINT: implicit by design

    friend CheckedInt operator+(CheckedInt a, CheckedInt b) {
        Int r;
        if (__builtin_add_overflow(a.v, b.v, &r)) throw std::overflow_error("CheckedInt add");
        return r;
    }
    friend CheckedInt operator-(CheckedInt a, CheckedInt b) {
        Int r;
        if (__builtin_sub_overflow(a.v, b.v, &r)) throw std::overflow_error("CheckedInt sub");
        return r;
    }
    friend CheckedInt operator*(CheckedInt a, CheckedInt b) {
        Int r;
        if (__builtin_mul_overflow(a.v, b.v, &r)) throw std::overflow_error("CheckedInt mul");
        return r;
    }
    friend CheckedInt operator/(CheckedInt a, CheckedInt b) {
        if (b.v == 0) throw std::domain_error("CheckedInt division by zero");
        if (a.v == INT64_MIN && b.v == -1) throw std::overflow_error("CheckedInt div");
        return a.v / b.v;
    }
    friend CheckedInt operator%(CheckedInt a, CheckedInt b) {
        if (b.v == 0) throw std::domain_error("CheckedInt modulo by zero");
        if (a.v == INT64_MIN && b.v == -1) return 0;
        return a.v % b.v;
    }
    CheckedInt operator-() const {
        if (v == INT64_MIN) throw std::overflow_error("CheckedInt negate");
        return -v;
    }
    CheckedInt& operator+=(CheckedInt o) { return *this = *this + o; }
    CheckedInt& operator-=(CheckedInt o) { return *this = *this - o; }
    CheckedInt& operator*=(CheckedInt o) { return *this = *this * o; }

    friend bool operator==(CheckedInt a, CheckedInt b) { return a.v == b.v; }
    friend auto operator<=>(CheckedInt a, CheckedInt b) { return a.v <=> b.v; }
};

template <class T>
T abs_of(const T& x) {
    return x < T(0) ? -x : x;
}

}  // namespace tcs
