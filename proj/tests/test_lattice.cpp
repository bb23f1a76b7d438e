#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tcs/lattice.hpp"
#include "tcs/normal_form.hpp"

#include <random>

using namespace tcs;

namespace {

LatticePtr lat_2h() {
    IMat g(4, 4);
    g(0, 1) = g(1, 0) = 1;
    g(2, 3) = g(3, 2) = 1;
    return make_lattice("2H", std::move(g));
}

std::vector<Int> k3_coords(std::initializer_list<std::pair<std::size_t, Int>> entries) {
    std::vector<Int> v(22, 0);
    for (auto [i, c] : entries) v[i] = c;
    return v;
}

// K3 hyperbolic coordinates: e1=16, e1'=17, e2=18, e2'=19, e3=20, e3'=21.
constexpr std::size_t E1 = 16, E1P = 17, E2 = 18, E2P = 19, E3 = 20, E3P = 21;

LatticeVector kv(std::initializer_list<std::pair<std::size_t, Int>> entries) {
    return make_vector(standard_lattice("K3"), k3_coords(entries));
}

// Test-side row reduction over the integers, independent of the library's
// normal forms: repeated extended-gcd elimination, column by column.
std::vector<std::vector<Int>> oracle_echelon(std::vector<std::vector<Int>> rows) {
    if (rows.empty()) return rows;
    const std::size_t n = rows[0].size();
    std::size_t top = 0;
    for (std::size_t col = 0; col < n && top < rows.size(); ++col) {
        for (std::size_t i = top + 1; i < rows.size(); ++i) {
            while (rows[i][col] != 0) {
                if (rows[top][col] == 0 ||
                    std::abs(rows[i][col]) < std::abs(rows[top][col])) {
                    std::swap(rows[top], rows[i]);
                    continue;
                }
                const Int q = rows[i][col] / rows[top][col];
                for (std::size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[top][j];
            }
        }
        if (rows[top][col] == 0) continue;
        if (rows[top][col] < 0)
            for (std::size_t j = 0; j < n; ++j) rows[top][j] = -rows[top][j];
        for (std::size_t i = 0; i < top; ++i) {
            Int q = rows[i][col] / rows[top][col];
            if (rows[i][col] % rows[top][col] < 0) q -= 1;
            for (std::size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[top][j];
        }
        ++top;
    }
    rows.resize(top);
    return rows;
}

}  // namespace

TEST_CASE("standard lattices") {
    auto h = standard_lattice("H");
    CHECK(h->gram == IMat{{0, 1}, {1, 0}});
    CHECK(signature(*h) == Signature{1, 1, 0});

    auto k3 = standard_lattice("K3");
    CHECK(k3->rank() == 22);
    CHECK(signature(*k3) == Signature{3, 19, 0});
    CHECK(k3->is_even());
    CHECK(is_unimodular(*k3));

    auto e8 = standard_lattice("E8");
    CHECK(e8->rank() == 8);
    CHECK(signature(*e8) == Signature{8, 0, 0});
    CHECK(e8->is_even());
    CHECK(gram_determinant(*e8) == 1);

    CHECK(signature(*standard_lattice("minusE8")) == Signature{0, 8, 0});
    CHECK(signature(*standard_lattice("L0")) == Signature{2, 18, 0});

    CHECK_THROWS_WITH_AS(standard_lattice("foo"),
                         "unknown lattice 'foo'; valid names: H, E8, minusE8, K3, L0",
                         std::invalid_argument);
}

TEST_CASE("inner products") {
    auto h = standard_lattice("H");
    auto e = make_vector(h, {1, 0});
    auto ep = make_vector(h, {0, 1});
    CHECK(inner_product(e, e) == 0);
    CHECK(inner_product(e, ep) == 1);
    CHECK(inner_product(ep, e) == 1);

    // the rank-2 polarization pairing realized inside K3
    auto f1 = kv({{E1, 1}, {E1P, 4}});
    auto f2 = kv({{E1, 1}, {E1P, -1}, {E2, 1}, {E2P, -1}, {E3, 1}, {E3P, 2}});
    CHECK(inner_product(f1, f2) == 3);
    CHECK(square(f1) == 8);
    CHECK(square(f2) == 0);

    auto other = make_vector(lat_2h(), {1, 0, 0, 0});
    CHECK_THROWS_AS(inner_product(e, other), std::invalid_argument);
}

TEST_CASE("signature examples and invariance") {
    CHECK(signature(IMat{{0, 3}, {3, 2}}) == Signature{1, 1, 0});
    CHECK(signature(IMat{{0, 0}, {0, 0}}) == Signature{0, 0, 2});
    CHECK(signature(IMat{{2, 0, 0}, {0, 0, 0}, {0, 0, -2}}) == Signature{1, 1, 1});

    std::mt19937 rng(23);
    auto base = standard_lattice("L0")->gram;
    for (int trial = 0; trial < 20; ++trial) {
        IMat u = IMat::identity(base.rows);
        std::uniform_int_distribution<Int> coeff(-2, 2);
        for (int op = 0; op < 30; ++op) {
            const std::size_t i = rng() % base.rows, j = rng() % base.rows;
            if (i != j) u.add_row(i, j, coeff(rng));
        }
        IMat conj = u * base * u.transposed();
        CHECK(signature(conj) == Signature{2, 18, 0});
    }
}

TEST_CASE("primitive vectors") {
    auto h = standard_lattice("H");
    CHECK_FALSE(is_primitive_vector(make_vector(h, {2, 4})));
    CHECK(is_primitive_vector(kv({{E1, 1}, {E1P, 4}})));
    CHECK(is_primitive_vector(make_vector(h, {1, 0})));
    CHECK_THROWS_AS(is_primitive_vector(make_vector(h, {0, 0})), std::invalid_argument);
}

TEST_CASE("primitive sublattices") {
    auto k3 = standard_lattice("K3");
    auto s1 = make_sublattice(k3, {k3_coords({{E1, 1}, {E1P, 2}}), k3_coords({{E2, 1}, {E2P, 2}})});
    CHECK(is_primitive_sublattice(s1));

    auto h = standard_lattice("H");
    CHECK_FALSE(is_primitive_sublattice(make_sublattice(h, {{2, 0}})));

    // the shared-vector rank-3 configuration
    auto span3 = make_sublattice(
        k3, {k3_coords({{E1, 1}, {E1P, 4}}), k3_coords({{E2, 1}, {E2P, 4}}),
             k3_coords({{E1, 1}, {E1P, -1}, {E2, 1}, {E2P, -1}, {E3, 1}, {E3P, 2}})});
    CHECK(span3.rank() == 3);
    CHECK(is_primitive_sublattice(span3));

    CHECK_THROWS_AS(is_primitive_sublattice(make_sublattice(h, {{1, 0}, {2, 0}})),
                    std::invalid_argument);
}

TEST_CASE("orthogonal complement") {
    auto h = standard_lattice("H");
    auto comp_e1 = orthogonal_complement(make_sublattice(h, {{1, 0}}));
    REQUIRE(comp_e1.rank() == 1);
    CHECK(comp_e1.basis[0] == std::vector<Int>{1, 0});

    auto two_h = lat_2h();
    auto comp = orthogonal_complement(make_sublattice(two_h, {{1, 2, 0, 0}}));
    REQUIRE(comp.rank() == 3);
    // contains e1 - 2e1', e2 and e2'
    auto contains = [&](const std::vector<Int>& v) {
        auto rows = comp.basis;
        rows.push_back(v);
        IMat m(rows.size(), 4);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < 4; ++j) m(i, j) = rows[i][j];
        return rank_exact(m) == 3;
    };
    CHECK(contains({1, -2, 0, 0}));
    CHECK(contains({0, 0, 1, 0}));
    CHECK(contains({0, 0, 0, 1}));

    auto k3 = standard_lattice("K3");
    auto big = orthogonal_complement(make_sublattice(
        k3, {k3_coords({{E1, 1}, {E1P, 2}}), k3_coords({{E2, 1}, {E2P, 2}})}));
    CHECK(big.rank() == 20);
    CHECK(signature(big.induced_gram()) == Signature{1, 19, 0});

    // pairs to zero against the inputs; saturated
    for (const auto& b : big.basis) {
        auto vb = make_vector(k3, b);
        CHECK(inner_product(vb, kv({{E1, 1}, {E1P, 2}})) == 0);
        CHECK(inner_product(vb, kv({{E2, 1}, {E2P, 2}})) == 0);
    }
    CHECK(is_primitive_sublattice(big));
}

TEST_CASE("saturation") {
    auto h = standard_lattice("H");
    auto sat = saturation(make_sublattice(h, {{2, 0}}));
    REQUIRE(sat.rank() == 1);
    CHECK(sat.basis[0] == std::vector<Int>{1, 0});

    auto sat2 = saturation(sat);
    CHECK(sat2.basis == sat.basis);
    CHECK(is_primitive_sublattice(sat));

    auto wide = saturation(make_sublattice(h, {{2, 2}, {2, -2}}));
    REQUIRE(wide.rank() == 2);
    // contains e + e'
    IMat m(3, 2);
    m(0, 0) = wide.basis[0][0];
    m(0, 1) = wide.basis[0][1];
    m(1, 0) = wide.basis[1][0];
    m(1, 1) = wide.basis[1][1];
    m(2, 0) = 1;
    m(2, 1) = 1;
    CHECK(rank_exact(m) == 2);
}

TEST_CASE("saturation agrees with independent row-reduction oracle") {
    std::mt19937 rng(29);
    std::uniform_int_distribution<Int> coord(-3, 3);
    auto l0 = standard_lattice("L0");
    IMat g6(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) g6(i, j) = l0->gram(i, j);
    auto amb = make_lattice("L0head", std::move(g6));
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t rank = 1 + rng() % 3;
        std::vector<std::vector<Int>> basis(rank, std::vector<Int>(6));
        for (auto& b : basis)
            for (auto& c : b) c = coord(rng);
        auto sub = make_sublattice(amb, basis);
        IMat bm = sub.basis_matrix();
        if (rank_exact(bm) != rank) continue;  // dependent draw
        const bool lib = is_primitive_sublattice(sub);
        const auto sat = saturation(sub);
        const bool oracle = oracle_echelon(sat.basis) == oracle_echelon(basis);
        CHECK(lib == oracle);
    }
}

TEST_CASE("eichler transform") {
    auto two_h = lat_2h();
    auto x = make_vector(two_h, {1, 0, 0, 0});       // e1
    auto f = make_vector(two_h, {0, 0, 1, 1});       // e2 + e2'
    auto v = make_vector(two_h, {0, 1, 0, 0});       // e1'

    CHECK(eichler_transform(f, x, x).coords == x.coords);

    auto fixed = make_vector(two_h, {0, 0, 1, -1});  // orthogonal to f and x
    CHECK(eichler_transform(f, x, fixed).coords == fixed.coords);

    auto img = eichler_transform(f, x, v);
    CHECK(img.coords == std::vector<Int>{-1, 1, -1, -1});
    CHECK(square(img) == 0);
    CHECK(square(img) == square(v));

    // named precondition failures
    auto bad_x = make_vector(two_h, {1, 1, 0, 0});  // square 2
    CHECK_THROWS_WITH_AS(eichler_transform(f, bad_x, v),
                         "elementary transformation requires (x,x) = 0", std::invalid_argument);
    auto bad_f = make_vector(two_h, {0, 1, 0, 0});  // pairs with x
    CHECK_THROWS_WITH_AS(eichler_transform(bad_f, x, v),
                         "elementary transformation requires (f,x) = 0", std::invalid_argument);
    auto imprim = make_vector(two_h, {2, 0, 0, 0});
    CHECK_THROWS_WITH_AS(eichler_transform(f, imprim, v),
                         "elementary transformation requires a primitive x",
                         std::invalid_argument);
    auto odd = make_lattice("odd", IMat{{1, 0}, {0, -1}});
    CHECK_THROWS_AS(eichler_transform(make_vector(odd, {0, 1}), make_vector(odd, {1, 1}),
                                      make_vector(odd, {1, 0})),
                    std::invalid_argument);
}

TEST_CASE("eichler transform is an isometry with the expected fixed set") {
    auto k3 = standard_lattice("K3");
    auto f = kv({{E2, 1}, {E2P, 1}});
    auto x = kv({{E1, 1}});
    EichlerSpec spec{f, x};
    std::mt19937 rng(31);
    std::uniform_int_distribution<Int> coord(-5, 5);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Int> a(22), b(22);
        for (auto& c : a) c = coord(rng);
        for (auto& c : b) c = coord(rng);
        auto va = make_vector(k3, a), vb = make_vector(k3, b);
        CHECK(inner_product(spec.apply(va), spec.apply(vb)) == inner_product(va, vb));
        if (spec.fixes(va)) CHECK(spec.apply(va).coords == va.coords);
    }
}

TEST_CASE("move into rank-2 span") {
    auto two_h = lat_2h();
    auto x = make_vector(two_h, {0, 0, 1, 0});   // e2
    auto xp = make_vector(two_h, {0, 0, 0, 1});  // e2'
    auto s2 = make_sublattice(two_h, {x.coords, xp.coords});
    auto f = make_vector(two_h, {1, -1, 0, 0});  // e1 - e1'

    // e = e2 + e2' + (x,x') * 1 * f
    auto e = make_vector(two_h, {1, -1, 1, 1});
    auto res = move_into_rank2(e, s2, f);
    CHECK(res.image.coords == std::vector<Int>{0, 0, 0, 1});  // lands in span{x, x'}
    CHECK(square(res.image) == square(e));
    CHECK(res.spec.f.coords == f.coords);
    CHECK(res.spec.x.coords == x.coords);

    // degenerate input a*x is fixed
    auto ax = make_vector(two_h, {0, 0, 3, 0});
    CHECK(move_into_rank2(ax, s2, f).image.coords == ax.coords);

    // replayed transform preserves pairings of arbitrary vectors
    std::mt19937 rng(37);
    std::uniform_int_distribution<Int> coord(-4, 4);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Int> a(4), b(4);
        for (auto& c : a) c = coord(rng);
        for (auto& c : b) c = coord(rng);
        auto va = make_vector(two_h, a), vb = make_vector(two_h, b);
        CHECK(inner_product(res.spec.apply(va), res.spec.apply(vb)) == inner_product(va, vb));
    }

    // decomposition failure is reported
    auto stray = make_vector(two_h, {1, 1, 1, 0});
    CHECK_THROWS_AS(move_into_rank2(stray, s2, f), std::invalid_argument);
}

TEST_CASE("json round trips") {
    auto k3 = standard_lattice("K3");
    auto j = lattice_to_json(*k3);
    auto back = lattice_from_json(j);
    CHECK(back.gram == k3->gram);
    CHECK(back.label == "K3");
    CHECK(back.hyperbolic_pairs == k3->hyperbolic_pairs);

    auto v = kv({{E1, 1}, {E1P, 4}});
    auto vj = vector_to_json(v);
    auto vb = vector_from_json(vj, k3);
    CHECK(vb.coords == v.coords);
    CHECK_THROWS_AS(vector_from_json(vj, standard_lattice("H")), validation_error);
}
