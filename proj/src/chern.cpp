#include "tcs/chern.hpp"

#include <cstdlib>
#include <stdexcept>

namespace tcs {

namespace {

void require_same_truncation(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("series truncation degrees differ");
}

TruncatedSeries ci_series(Int ambient_dim, const std::vector<Int>& degrees,
                          std::size_t truncation) {
    for (Int d : degrees)
        if (d < 1) throw std::invalid_argument("hypersurface degrees must be >= 1");
    auto s = pow(TruncatedSeries::linear(truncation, 1, 1), ambient_dim + 1);
    for (Int d : degrees) s = s * inverse(TruncatedSeries::linear(truncation, 1, d));
    return s;
}

Int product_of(const std::vector<Int>& degrees) {
    Int p = 1;
    for (Int d : degrees) p *= d;
    return p;
}

}  // namespace

TruncatedSeries::TruncatedSeries(std::size_t truncation, std::vector<Int> coeffs)
    : c_(std::move(coeffs)) {
    c_.resize(truncation + 1, 0);
}

TruncatedSeries TruncatedSeries::one(std::size_t truncation) {
    TruncatedSeries s(truncation);
    s.c_[0] = 1;
    return s;
}

TruncatedSeries TruncatedSeries::linear(std::size_t truncation, Int a0, Int a1) {
    TruncatedSeries s(truncation);
    s.c_[0] = a0;
    if (truncation >= 1) s.c_[1] = a1;
    return s;
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    require_same_truncation(a.truncation(), b.truncation());
    TruncatedSeries r(a.truncation());
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
    return r;
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    require_same_truncation(a.truncation(), b.truncation());
    TruncatedSeries r(a.truncation());
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] - b.c_[i];
    return r;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    require_same_truncation(a.truncation(), b.truncation());
    TruncatedSeries r(a.truncation());
    for (std::size_t i = 0; i < r.c_.size(); ++i)
        for (std::size_t j = 0; i + j < r.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    return r;
}

TruncatedSeries inverse(const TruncatedSeries& s) {
    const Int c0 = s[0];
    if (c0 != 1 && c0 != -1)
        throw std::invalid_argument("series inverse needs constant term +1 or -1");
    TruncatedSeries r(s.truncation());
    std::vector<Int> b(s.truncation() + 1, 0);
    b[0] = c0;
    for (std::size_t n = 1; n <= s.truncation(); ++n) {
        Int acc = 0;
        for (std::size_t i = 1; i <= n; ++i) acc += s[i] * b[n - i];
        b[n] = -c0 * acc;
    }
    return TruncatedSeries(s.truncation(), std::move(b));
}

TruncatedSeries pow(const TruncatedSeries& s, Int exponent) {
    if (exponent < 0) return pow(inverse(s), -exponent);
    TruncatedSeries r = TruncatedSeries::one(s.truncation());
    TruncatedSeries base = s;
    Int e = exponent;
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

std::string TruncatedSeries::to_string(const std::string& var) const {
    std::string out;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        const Int c = c_[i];
        if (c == 0) continue;
        if (first) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        const Int a = std::abs(c);
        if (i == 0)
            out += std::to_string(a);
        else {
            if (a != 1) out += std::to_string(a);
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
        first = false;
    }
    if (first) out = "0";
    return out;
}

BiSeries::BiSeries(std::size_t max_x, std::size_t max_y)
    : nx_(max_x + 1), ny_(max_y + 1), c_(nx_ * ny_, 0) {}

Int BiSeries::at(std::size_t i, std::size_t j) const { return c_[i * ny_ + j]; }
Int& BiSeries::at(std::size_t i, std::size_t j) { return c_[i * ny_ + j]; }

BiSeries BiSeries::one(std::size_t max_x, std::size_t max_y) {
    BiSeries s(max_x, max_y);
    s.at(0, 0) = 1;
    return s;
}

BiSeries BiSeries::linear(std::size_t max_x, std::size_t max_y, Int a0, Int ax, Int ay) {
    BiSeries s(max_x, max_y);
    s.at(0, 0) = a0;
    if (max_x >= 1) s.at(1, 0) = ax;
    if (max_y >= 1) s.at(0, 1) = ay;
    return s;
}

BiSeries operator+(const BiSeries& a, const BiSeries& b) {
    if (a.nx_ != b.nx_ || a.ny_ != b.ny_)
        throw std::invalid_argument("bi-series truncation mismatch");
    BiSeries r(a.max_x(), a.max_y());
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
    return r;
}

BiSeries operator-(const BiSeries& a, const BiSeries& b) {
    if (a.nx_ != b.nx_ || a.ny_ != b.ny_)
        throw std::invalid_argument("bi-series truncation mismatch");
    BiSeries r(a.max_x(), a.max_y());
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] - b.c_[i];
    return r;
}

BiSeries operator*(const BiSeries& a, const BiSeries& b) {
    if (a.nx_ != b.nx_ || a.ny_ != b.ny_)
        throw std::invalid_argument("bi-series truncation mismatch");
    BiSeries r(a.max_x(), a.max_y());
    for (std::size_t i = 0; i < a.nx_; ++i)
        for (std::size_t j = 0; j < a.ny_; ++j) {
            if (a.at(i, j) == 0) continue;
            for (std::size_t k = 0; i + k < a.nx_; ++k)
                for (std::size_t l = 0; j + l < a.ny_; ++l)
                    r.at(i + k, j + l) += a.at(i, j) * b.at(k, l);
        }
    return r;
}

BiSeries inverse(const BiSeries& s) {
    const Int c0 = s.at(0, 0);
    if (c0 != 1 && c0 != -1)
        throw std::invalid_argument("bi-series inverse needs constant term +1 or -1");
    // s = c0 (1 + c0 u) with u nilpotent, so s^-1 = c0 sum (-c0 u)^k; the
    // series stops at the total truncation degree.
    BiSeries u = s;
    u.at(0, 0) -= c0;
    BiSeries term = BiSeries::one(s.max_x(), s.max_y());
    BiSeries acc = term;
    Int sign = 1;
    const std::size_t nilpotency = s.max_x() + s.max_y();
    for (std::size_t k = 1; k <= nilpotency; ++k) {
        term = term * u;
        sign *= -c0;
        acc = sign == 1 ? acc + term : acc - term;
    }
    if (c0 == -1) acc = BiSeries(s.max_x(), s.max_y()) - acc;
    return acc;
}

BiSeries pow(const BiSeries& s, Int exponent) {
    if (exponent < 0) return pow(inverse(s), -exponent);
    BiSeries r = BiSeries::one(s.max_x(), s.max_y());
    BiSeries base = s;
    Int e = exponent;
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

ChernData chern_complete_intersection(Int ambient_dim, const std::vector<Int>& degrees) {
    if (ambient_dim - static_cast<Int>(degrees.size()) != 3)
        throw std::invalid_argument("complete intersection is not a 3-fold: ambient " +
                                    std::to_string(ambient_dim) + " minus " +
                                    std::to_string(degrees.size()) + " hypersurfaces");
    return ChernData{ci_series(ambient_dim, degrees, 3), product_of(degrees)};
}

ThreefoldInvariants euler_and_betti(const TruncatedSeries& series, Int degree, Int b2) {
    ThreefoldInvariants inv;
    inv.b2 = b2;
    inv.chi = series[3] * degree;
    inv.b3 = 2 + 2 * b2 - inv.chi;
    const Int c1 = series[1];
    inv.minus_K_cubed = c1 * c1 * c1 * degree;
    if (inv.minus_K_cubed % 2 != 0)
        throw validation_error("odd anticanonical degree: genus is not an integer");
    inv.genus = inv.minus_K_cubed / 2 + 1;
    return inv;
}

CurveEuler curve_euler(Int ambient_dim, const std::vector<Int>& degrees) {
    if (ambient_dim - static_cast<Int>(degrees.size()) != 1)
        throw std::invalid_argument("complete intersection is not a curve: ambient " +
                                    std::to_string(ambient_dim) + " minus " +
                                    std::to_string(degrees.size()) + " hypersurfaces");
    auto s = ci_series(ambient_dim, degrees, 1);
    const Int deg = product_of(degrees);
    return CurveEuler{s, deg, s[1] * deg};
}

Int surface_euler(Int ambient_dim, const std::vector<Int>& degrees) {
    if (ambient_dim - static_cast<Int>(degrees.size()) != 2)
        throw std::invalid_argument("complete intersection is not a surface");
    return ci_series(ambient_dim, degrees, 2)[2] * product_of(degrees);
}

BlowupInvariants blowup_invariants(Int b2, Int b3, Int genus) {
    if (genus < 2)
        throw std::invalid_argument("blow-up formula needs genus >= 2, got " +
                                    std::to_string(genus));
    return BlowupInvariants{b2 + 1, b3 + 2 * genus};
}

DoubleCoverInvariants double_cover_invariants(Int chi_base, Int chi_branch, Int b2) {
    DoubleCoverInvariants inv;
    inv.chi = 2 * chi_base - chi_branch;
    inv.b2 = b2;
    inv.b3 = 2 + 2 * b2 - inv.chi;
    return inv;
}

}  // namespace tcs
