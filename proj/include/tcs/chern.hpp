#pragma once

#include "tcs/numeric.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace tcs {

/// Integer polynomial in one variable truncated at a fixed degree.
/// Multiplication discards everything above the truncation degree; inversion
/// needs a unit constant term (+1 or -1 over the integers).
class TruncatedSeries {
  public:
    explicit TruncatedSeries(std::size_t truncation) : c_(truncation + 1, 0) {}
    TruncatedSeries(std::size_t truncation, std::vector<Int> coeffs);

    static TruncatedSeries one(std::size_t truncation);
    /// a0 + a1 x
    static TruncatedSeries linear(std::size_t truncation, Int a0, Int a1);

    std::size_t truncation() const { return c_.size() - 1; }
    Int operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
    const std::vector<Int>& coefficients() const { return c_; }

    bool operator==(const TruncatedSeries&) const = default;

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);

    std::string to_string(const std::string& var = "x") const;

  private:
    std::vector<Int> c_;
};

TruncatedSeries inverse(const TruncatedSeries& s);
TruncatedSeries pow(const TruncatedSeries& s, Int exponent);

/// Z[x, y] / (x^{mx+1}, y^{my+1}): the cohomology ring of a product of two
/// projective spaces. The degree functional reads off the x^mx y^my
/// coefficient.
class BiSeries {
  public:
    BiSeries(std::size_t max_x, std::size_t max_y);

    static BiSeries one(std::size_t max_x, std::size_t max_y);
    /// a0 + ax x + ay y
    static BiSeries linear(std::size_t max_x, std::size_t max_y, Int a0, Int ax, Int ay);

    std::size_t max_x() const { return nx_ - 1; }
    std::size_t max_y() const { return ny_ - 1; }
    Int at(std::size_t i, std::size_t j) const;
    Int& at(std::size_t i, std::size_t j);
    /// Coefficient of x^max_x y^max_y.
    Int top() const { return at(max_x(), max_y()); }

    bool operator==(const BiSeries&) const = default;

    friend BiSeries operator+(const BiSeries& a, const BiSeries& b);
    friend BiSeries operator-(const BiSeries& a, const BiSeries& b);
    friend BiSeries operator*(const BiSeries& a, const BiSeries& b);

  private:
    std::size_t nx_, ny_;
    std::vector<Int> c_;
};

BiSeries inverse(const BiSeries& s);
BiSeries pow(const BiSeries& s, Int exponent);

struct ThreefoldInvariants {
    Int chi = 0;
    Int b2 = 0;
    Int b3 = 0;
    Int minus_K_cubed = 0;
    Int genus = 0;
    bool operator==(const ThreefoldInvariants&) const = default;
};

struct ChernData {
    TruncatedSeries series;
    Int degree;  // product of the hypersurface degrees
};

/// Total Chern class (1+x)^{n+1} prod (1+d_i x)^{-1} of a smooth complete
/// intersection 3-fold of multidegree (d_1..d_k) in P^n, truncated at 3.
ChernData chern_complete_intersection(Int ambient_dim, const std::vector<Int>& degrees);

ThreefoldInvariants euler_and_betti(const TruncatedSeries& series, Int degree, Int b2);

struct CurveEuler {
    TruncatedSeries series;
    Int degree;
    Int chi;
};

/// Complete-intersection curve: truncation 1, chi = c1 coefficient x degree.
CurveEuler curve_euler(Int ambient_dim, const std::vector<Int>& degrees);

/// Euler characteristic of a complete-intersection surface (truncation 2).
Int surface_euler(Int ambient_dim, const std::vector<Int>& degrees);

struct BlowupInvariants {
    Int b2 = 0;
    Int b3 = 0;
};

/// Betti numbers after blowing up the self-intersection curve of an
/// anticanonical divisor: b2 gains 1, b3 gains twice the genus.
BlowupInvariants blowup_invariants(Int b2, Int b3, Int genus);

struct DoubleCoverInvariants {
    Int chi = 0;
    Int b2 = 0;
    Int b3 = 0;
};

DoubleCoverInvariants double_cover_invariants(Int chi_base, Int chi_branch, Int b2);

}  // namespace tcs
