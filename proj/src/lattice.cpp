#include "tcs/lattice.hpp"

#include "tcs/normal_form.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace tcs {

namespace {

IMat hyperbolic_gram() { return IMat{{0, 1}, {1, 0}}; }

// Simple-root Gram matrix of E8. Nodes 0..6 form a chain, node 7 attaches
// to node 4, so the arms at the trivalent node have lengths 1, 2 and 4.
IMat e8_gram() {
    IMat g(8, 8);
    for (std::size_t i = 0; i < 8; ++i) g(i, i) = 2;
    auto link = [&](std::size_t i, std::size_t j) { g(i, j) = g(j, i) = -1; };
    for (std::size_t i = 0; i + 1 < 7; ++i) link(i, i + 1);
    link(4, 7);
    return g;
}

IMat block_diag(const std::vector<IMat>& blocks) {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.rows;
    IMat g(n, n);
    std::size_t off = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows; ++i)
            for (std::size_t j = 0; j < b.cols; ++j) g(off + i, off + j) = b(i, j);
        off += b.rows;
    }
    return g;
}

IMat negated(IMat m) {
    for (auto& v : m.a) v = -v;
    return m;
}

Int dot_through_gram(const IMat& gram, const std::vector<Int>& a, const std::vector<Int>& b) {
    __int128 acc = 0;
    for (std::size_t i = 0; i < gram.rows; ++i) {
        if (a[i] == 0) continue;
        __int128 row = 0;
        for (std::size_t j = 0; j < gram.cols; ++j) row += static_cast<__int128>(gram(i, j)) * b[j];
        acc += static_cast<__int128>(a[i]) * row;
    }
    if (acc > INT64_MAX || acc < INT64_MIN) throw std::overflow_error("inner product overflow");
    return static_cast<Int>(acc);
}

void require_same_ambient(const LatticeVector& v, const LatticeVector& w) {
    if (v.ambient == w.ambient) return;
    if (!v.ambient || !w.ambient) throw std::invalid_argument("vector has no ambient lattice");
    if (v.ambient->label != w.ambient->label || v.ambient->gram != w.ambient->gram)
        throw std::invalid_argument("vectors live in different ambient lattices: " +
                                    v.ambient->label + " vs " + w.ambient->label);
}

std::vector<Int> scaled(const std::vector<Int>& v, Int c) {
    std::vector<Int> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = c * v[i];
    return out;
}

void add_scaled(std::vector<Int>& v, const std::vector<Int>& w, Int c) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * w[i];
}

}  // namespace

bool GramLattice::is_even() const {
    for (std::size_t i = 0; i < gram.rows; ++i)
        if (gram(i, i) % 2 != 0) return false;
    return true;
}

bool GramLattice::is_symmetric() const {
    for (std::size_t i = 0; i < gram.rows; ++i)
        for (std::size_t j = i + 1; j < gram.cols; ++j)
            if (gram(i, j) != gram(j, i)) return false;
    return true;
}

bool LatticeVector::is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](Int c) { return c == 0; });
}

IMat Sublattice::basis_matrix() const {
    IMat m(ambient->rank(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < ambient->rank(); ++i) m(i, j) = basis[j][i];
    return m;
}

IMat Sublattice::induced_gram() const {
    const std::size_t k = basis.size();
    IMat g(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j)
            g(i, j) = g(j, i) = dot_through_gram(ambient->gram, basis[i], basis[j]);
    return g;
}

LatticePtr make_lattice(std::string label, IMat gram) {
    if (gram.rows != gram.cols) throw std::invalid_argument("Gram matrix must be square");
    auto l = std::make_shared<GramLattice>(GramLattice{std::move(label), std::move(gram), {}});
    if (!l->is_symmetric()) throw std::invalid_argument("Gram matrix must be symmetric");
    return l;
}

LatticePtr standard_lattice(const std::string& name) {
    static const std::map<std::string, LatticePtr> table = [] {
        std::map<std::string, LatticePtr> t;
        auto put = [&](const std::string& label, IMat gram,
                       std::vector<std::pair<std::size_t, std::size_t>> pairs) {
            auto l = std::make_shared<GramLattice>(
                GramLattice{label, std::move(gram), std::move(pairs)});
            t.emplace(label, std::move(l));
        };
        put("H", hyperbolic_gram(), {{0, 1}});
        put("E8", e8_gram(), {});
        put("minusE8", negated(e8_gram()), {});
        put("K3",
            block_diag({negated(e8_gram()), negated(e8_gram()), hyperbolic_gram(),
                        hyperbolic_gram(), hyperbolic_gram()}),
            {{16, 17}, {18, 19}, {20, 21}});
        put("L0",
            block_diag({negated(e8_gram()), negated(e8_gram()), hyperbolic_gram(),
                        hyperbolic_gram()}),
            {{16, 17}, {18, 19}});
        return t;
    }();
    auto it = table.find(name);
    if (it == table.end())
        throw std::invalid_argument("unknown lattice '" + name +
                                    "'; valid names: H, E8, minusE8, K3, L0");
    return it->second;
}

LatticeVector make_vector(LatticePtr ambient, std::vector<Int> coords) {
    if (!ambient) throw std::invalid_argument("null ambient lattice");
    if (coords.size() != ambient->rank())
        throw std::invalid_argument("coordinate length " + std::to_string(coords.size()) +
                                    " does not match ambient rank " +
                                    std::to_string(ambient->rank()));
    return LatticeVector{std::move(ambient), std::move(coords)};
}

Sublattice make_sublattice(LatticePtr ambient, std::vector<std::vector<Int>> basis) {
    if (!ambient) throw std::invalid_argument("null ambient lattice");
    for (const auto& b : basis)
        if (b.size() != ambient->rank())
            throw std::invalid_argument("basis vector length does not match ambient rank");
    return Sublattice{std::move(ambient), std::move(basis)};
}

Int inner_product(const LatticeVector& v, const LatticeVector& w) {
    require_same_ambient(v, w);
    return dot_through_gram(v.ambient->gram, v.coords, w.coords);
}

Int square(const LatticeVector& v) { return inner_product(v, v); }

Signature signature(const IMat& gram) {
    if (gram.rows != gram.cols) throw std::invalid_argument("signature of non-square matrix");
    const std::size_t n = gram.rows;
    Matrix<BigRat> a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = BigRat(gram(i, j));

    Signature sig;
    for (std::size_t k = 0; k < n; ++k) {
        if (a(k, k) == 0) {
            for (std::size_t j = k + 1; j < n; ++j)
                if (a(j, j) != 0) {
                    a.swap_rows(k, j);
                    a.swap_cols(k, j);
                    break;
                }
        }
        if (a(k, k) == 0) {
            // All remaining diagonal entries vanish; a nonzero off-diagonal
            // partner j gives the basis move v_k <- v_k + v_j.
            for (std::size_t j = k + 1; j < n; ++j)
                if (a(k, j) != 0) {
                    a.add_row(k, j, BigRat(1));
                    a.add_col(k, j, BigRat(1));
                    break;
                }
        }
        if (a(k, k) == 0) {
            ++sig.z;
            continue;
        }
        const BigRat pivot = a(k, k);
        if (pivot > 0)
            ++sig.p;
        else
            ++sig.q;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            BigRat c = -a(i, k) / pivot;
            a.add_row(i, k, c);
            a.add_col(i, k, c);
        }
    }
    return sig;
}

Signature signature(const GramLattice& l) { return signature(l.gram); }

BigInt gram_determinant(const GramLattice& l) { return determinant_exact(l.gram); }

bool is_unimodular(const GramLattice& l) {
    BigInt d = gram_determinant(l);
    return d == 1 || d == -1;
}

bool is_primitive_vector(const LatticeVector& v) {
    if (v.is_zero()) throw std::invalid_argument("primitivity of the zero vector is undefined");
    Int g = 0;
    for (Int c : v.coords) g = std::gcd(g, c);
    return g == 1;
}

bool is_primitive_sublattice(const Sublattice& s) {
    IMat m = s.basis_matrix();
    if (rank_exact(m) != s.rank())
        throw std::invalid_argument("sublattice basis is linearly dependent");
    for (const auto& f : invariant_factors_exact(m))
        if (f != 1) return false;
    return true;
}

Sublattice orthogonal_complement(const Sublattice& s) {
    const auto& l = *s.ambient;
    if (determinant_exact(l.gram) == 0)
        throw std::invalid_argument("orthogonal complement requires a non-degenerate ambient form");
    // Pairing matrix: row per sublattice generator, column per ambient basis
    // vector. Its integer kernel is the complement, saturated by construction.
    IMat pair(s.rank(), l.rank());
    for (std::size_t i = 0; i < s.rank(); ++i) {
        std::vector<Int> gv(l.rank());
        for (std::size_t j = 0; j < l.rank(); ++j) {
            __int128 acc = 0;
            for (std::size_t t = 0; t < l.rank(); ++t)
                acc += static_cast<__int128>(s.basis[i][t]) * l.gram(t, j);
            if (acc > INT64_MAX || acc < INT64_MIN)
                throw std::overflow_error("pairing overflow");
            gv[j] = static_cast<Int>(acc);
        }
        for (std::size_t j = 0; j < l.rank(); ++j) pair(i, j) = gv[j];
    }
    IMat ker = kernel_rows_exact(pair);
    std::vector<std::vector<Int>> basis;
    basis.reserve(ker.rows);
    for (std::size_t i = 0; i < ker.rows; ++i) {
        std::vector<Int> b(ker.cols);
        for (std::size_t j = 0; j < ker.cols; ++j) b[j] = ker(i, j);
        basis.push_back(std::move(b));
    }
    return Sublattice{s.ambient, std::move(basis)};
}

Sublattice saturation(const Sublattice& s) {
    IMat sat = saturation_rows_exact(s.basis_matrix());
    std::vector<std::vector<Int>> basis;
    basis.reserve(sat.rows);
    for (std::size_t i = 0; i < sat.rows; ++i) {
        std::vector<Int> b(sat.cols);
        for (std::size_t j = 0; j < sat.cols; ++j) b[j] = sat(i, j);
        basis.push_back(std::move(b));
    }
    return Sublattice{s.ambient, std::move(basis)};
}

LatticeVector eichler_transform(const LatticeVector& f, const LatticeVector& x,
                                const LatticeVector& v) {
    require_same_ambient(f, x);
    require_same_ambient(f, v);
    if (!v.ambient->is_even())
        throw std::invalid_argument("elementary transformation requires an even ambient lattice");
    if (square(x) != 0)
        throw std::invalid_argument("elementary transformation requires (x,x) = 0");
    if (inner_product(f, x) != 0)
        throw std::invalid_argument("elementary transformation requires (f,x) = 0");
    if (!is_primitive_vector(x))
        throw std::invalid_argument("elementary transformation requires a primitive x");

    const Int vf = inner_product(v, f);
    const Int vx = inner_product(v, x);
    const Int half_ff = square(f) / 2;
    std::vector<Int> out = v.coords;
    add_scaled(out, x.coords, vf - half_ff * vx);
    add_scaled(out, f.coords, -vx);
    return LatticeVector{v.ambient, std::move(out)};
}

bool EichlerSpec::fixes(const LatticeVector& v) const {
    return inner_product(v, f) == 0 && inner_product(v, x) == 0;
}

IMat EichlerSpec::to_matrix() const {
    const std::size_t n = f.ambient->rank();
    IMat m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Int> e(n, 0);
        e[j] = 1;
        auto img = apply(LatticeVector{f.ambient, std::move(e)});
        for (std::size_t i = 0; i < n; ++i) m(i, j) = img.coords[i];
    }
    return m;
}

MoveIntoRank2Result move_into_rank2(const LatticeVector& e, const Sublattice& s2,
                                    const LatticeVector& f) {
    if (s2.rank() != 2) throw std::invalid_argument("move_into_rank2 needs a rank-2 sublattice");
    LatticeVector x{s2.ambient, s2.basis[0]};
    LatticeVector xp{s2.ambient, s2.basis[1]};
    require_same_ambient(e, x);
    require_same_ambient(e, f);
    if (f.is_zero()) throw std::invalid_argument("f must be nonzero");
    if (square(x) != 0) throw std::invalid_argument("x must be isotropic");
    if (!is_primitive_vector(x)) throw std::invalid_argument("x must be primitive");
    if (inner_product(f, x) != 0 || inner_product(f, xp) != 0)
        throw std::invalid_argument("f must be orthogonal to {x, x'}");

    const Int c = inner_product(x, xp);
    if (c == 0) throw std::invalid_argument("degenerate pairing: (x,x') = 0");

    const Int ex = inner_product(e, x);
    if (ex % c != 0)
        throw std::invalid_argument("decomposition does not hold: (e,x) not divisible by (x,x')");
    const Int b = ex / c;
    const Int num_a = inner_product(e, xp) - b * square(xp);
    if (num_a % c != 0)
        throw std::invalid_argument("decomposition does not hold: no integral x-coefficient");
    const Int a = num_a / c;

    std::vector<Int> residual = e.coords;
    add_scaled(residual, x.coords, -a);
    add_scaled(residual, xp.coords, -b);
    if (residual != scaled(f.coords, c * b))
        throw std::invalid_argument(
            "decomposition does not hold: e != a x + b x' + (x,x') b f for the supplied f");

    EichlerSpec spec{f, x};
    return MoveIntoRank2Result{spec.apply(e), std::move(spec)};
}

json lattice_to_json(const GramLattice& l) {
    json j;
    j["label"] = l.label;
    json rows = json::array();
    for (std::size_t i = 0; i < l.gram.rows; ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < l.gram.cols; ++k) row.push_back(l.gram(i, k));
        rows.push_back(std::move(row));
    }
    j["gram"] = std::move(rows);
    return j;
}

GramLattice lattice_from_json(const json& j) {
    const auto label = j.at("label").get<std::string>();
    const auto& rows = j.at("gram");
    IMat gram(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < gram.rows; ++i) {
        if (rows[i].size() != gram.cols) throw validation_error("ragged gram matrix");
        for (std::size_t k = 0; k < gram.cols; ++k) gram(i, k) = rows[i][k].get<Int>();
    }
    GramLattice l{label, std::move(gram), {}};
    if (!l.is_symmetric()) throw validation_error("gram matrix not symmetric");
    try {
        auto std_l = standard_lattice(label);
        if (std_l->gram == l.gram) l.hyperbolic_pairs = std_l->hyperbolic_pairs;
    } catch (const std::invalid_argument&) {
    }
    return l;
}

json vector_to_json(const LatticeVector& v) {
    json j;
    j["ambient"] = v.ambient ? v.ambient->label : "";
    j["coords"] = v.coords;
    return j;
}

LatticeVector vector_from_json(const json& j, LatticePtr ambient) {
    const auto label = j.at("ambient").get<std::string>();
    if (ambient->label != label)
        throw validation_error("vector ambient '" + label + "' does not match '" +
                               ambient->label + "'");
    return make_vector(std::move(ambient), j.at("coords").get<std::vector<Int>>());
}

}  // namespace tcs
