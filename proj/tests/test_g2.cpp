#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tcs/g2.hpp"

using namespace tcs;

namespace {

const PolarizedFanoClass& rec(const char* name) {
    return find_fano_class(builtin_fano_classes(), name);
}

constexpr std::size_t E1 = 16, E1P = 17, E2 = 18, E2P = 19, E3 = 20, E3P = 21;

std::vector<Int> k3c(std::initializer_list<std::pair<std::size_t, Int>> entries) {
    std::vector<Int> v(22, 0);
    for (auto [i, c] : entries) v[i] = c;
    return v;
}

GeographyConfig hinted_config() {
    GeographyConfig gc;
    EmbeddingHint h1{{k3c({{E1, 1}, {E1P, -1}, {E2, 1}, {E2P, -1}, {E3, 1}, {E3P, 2}}),
                      k3c({{E1P, 5}, {E2, -1}, {E2P, 1}, {E3, -1}, {E3P, -2}})}};
    EmbeddingHint h2{{k3c({{E1, 1}, {E1P, -1}, {E2, 1}, {E2P, -1}, {E3, 1}, {E3P, 2}}),
                      k3c({{E1, -1}, {E1P, 1}, {E2P, 5}, {E3, -1}, {E3P, -2}})}};
    gc.hints[{"P2xP1", "P2xP1", 3}] = {h1, h2};
    return gc;
}

}  // namespace

TEST_CASE("pi1 of the divisor complement") {
    CHECK(pi1_complement(1) == 1);
    CHECK(pi1_complement(3) == 3);
    CHECK_THROWS_AS(pi1_complement(0), std::invalid_argument);
    CHECK_THROWS_AS(pi1_complement(-2), std::invalid_argument);
}

TEST_CASE("golden invariants of the worked examples") {
    auto check_pair = [&](const char* a, const char* b, const MatchConfig& mc, Int b2, Int b3) {
        auto cert = build_matching(rec(a), rec(b), mc);
        auto inv = invariants_of_M(cert, rec(a), rec(b));
        CAPTURE(a);
        CAPTURE(b);
        CHECK(inv.b2 == b2);
        CHECK(inv.b3 == b3);
        CHECK(inv.b1 == 0);
        CHECK(inv.pi1_trivial);
        CHECK(inv.holonomy_exactly_g2);
    };
    check_pair("P3", "P3", {}, 0, 155);
    check_pair("P3", "P2xP1", {}, 0, 145);
    check_pair("X2", "P2xP1", {}, 0, 117);

    MatchConfig rank4;
    rank4.target_span_rank = 4;
    check_pair("P2xP1", "P2xP1", rank4, 0, 135);

    auto gc = hinted_config();
    MatchConfig rank3;
    rank3.target_span_rank = 3;
    auto [h1, h2] = gc.hints.at({"P2xP1", "P2xP1", 3});
    rank3.hint1 = h1;
    rank3.hint2 = h2;
    check_pair("P2xP1", "P2xP1", rank3, 1, 134);
}

TEST_CASE("torsion flag follows the sufficient condition") {
    auto cert = build_matching(rec("P3"), rec("P3"));
    CHECK(invariants_of_M(cert, rec("P3"), rec("P3")).torsion_free_H2_known);

    auto cert2 = build_matching(rec("X2"), rec("P2xP1"));
    CHECK_FALSE(invariants_of_M(cert2, rec("X2"), rec("P2xP1")).torsion_free_H2_known);
}

TEST_CASE("closed-form b3 for pairs with a b2 = 1 side") {
    CHECK(theorem_b3_check(rec("P3"), rec("P2xP1")) == 145);
    CHECK(theorem_b3_check(rec("P3"), rec("P3")) == 155);
    CHECK(theorem_b3_check(rec("X22"), rec("X22")) == 71);
    CHECK_THROWS_AS(theorem_b3_check(rec("P2xP1"), rec("P3")), std::invalid_argument);

    // agreement with the certificate route on every applicable pair
    const auto& db = builtin_fano_classes();
    for (std::size_t i = 0; i < db.size(); ++i)
        for (std::size_t j = i; j < db.size(); ++j) {
            if (db[i].b2 != 1 && db[j].b2 != 1) continue;
            auto cert = build_matching(db[i], db[j]);
            auto inv = invariants_of_M(cert, db[i], db[j]);
            const Int predicted = db[i].b2 == 1 ? theorem_b3_check(db[i], db[j])
                                                : theorem_b3_check(db[j], db[i]);
            CAPTURE(db[i].name);
            CAPTURE(db[j].name);
            CHECK(inv.b2 == 0);
            CHECK(inv.b3 == predicted);
        }
}

TEST_CASE("betti sum identity and range bound hold on every geography row") {
    const auto& db = builtin_fano_classes();
    auto rows = geography(db, hinted_config());
    CHECK(rows.size() == 37);  // 36 pairs plus the extra rank for the b2=2 pair
    for (const auto& row : rows) {
        REQUIRE_MESSAGE(row.invariants.has_value(), row.status);
        const auto& inv = *row.invariants;
        const auto& r1 = find_fano_class(db, row.fano1);
        const auto& r2 = find_fano_class(db, row.fano2);
        const Int blown1 = r1.b3 + 2 * r1.genus;
        const Int blown2 = r2.b3 + 2 * r2.genus;
        CHECK(inv.b3 + inv.b2 == blown1 + blown2 + 23);
        CHECK(inv.b2 <= std::min(r1.b2, r2.b2) - 1);
        CHECK(inv.b2 >= 0);
        CHECK(inv.b2 <= 9);
    }
}

TEST_CASE("b2 trades against b3 as the span rank grows") {
    auto gc = hinted_config();
    auto [h1, h2] = gc.hints.at({"P2xP1", "P2xP1", 3});
    MatchConfig rank3;
    rank3.hint1 = h1;
    rank3.hint2 = h2;
    auto cert3 = build_matching(rec("P2xP1"), rec("P2xP1"), rank3);
    auto cert4 = build_matching(rec("P2xP1"), rec("P2xP1"));
    auto inv3 = invariants_of_M(cert3, rec("P2xP1"), rec("P2xP1"));
    auto inv4 = invariants_of_M(cert4, rec("P2xP1"), rec("P2xP1"));
    CHECK(cert4.span_rank == cert3.span_rank + 1);
    CHECK(inv4.b2 == inv3.b2 - 1);
    CHECK(inv4.b3 == inv3.b3 + 1);
}

TEST_CASE("geography sweeps") {
    const auto& db = builtin_fano_classes();

    auto single = geography({db[0]});
    REQUIRE(single.size() == 1);
    REQUIRE(single[0].invariants.has_value());
    CHECK(single[0].invariants->b2 == 0);
    CHECK(single[0].invariants->b3 == 155);

    CHECK(geography({}).empty());

    // without hints the rank-3 row stays in the table as a failure
    auto rows = geography(db);
    bool found_failed = false;
    for (const auto& row : rows)
        if (row.fano1 == "P2xP1" && row.fano2 == "P2xP1" && row.span_rank == 3) {
            found_failed = true;
            CHECK_FALSE(row.invariants.has_value());
            CHECK(row.status.find("no certificate within radius") == 0);
        }
    CHECK(found_failed);

    // full catalogue range with hints
    Int lo = 1000, hi = -1000;
    for (const auto& row : geography(db, hinted_config()))
        if (row.invariants) {
            lo = std::min(lo, row.invariants->b3);
            hi = std::max(hi, row.invariants->b3);
        }
    CHECK(lo == 71);
    CHECK(hi == 155);
}

TEST_CASE("csv output shape") {
    const auto& db = builtin_fano_classes();
    auto csv = geography_csv(geography({db[0], db[7]}));
    CHECK(csv.find("fano1,fano2,span_rank,b2,b3,pi1_trivial,torsion_flag,certificate_path\n") ==
          0);
    CHECK(csv.find("P3,P3,2,0,155,true,torsion_free,") != std::string::npos);
    CHECK(csv.find("X22,X22,2,0,71,true,torsion_free,") != std::string::npos);
    CHECK(csv.find("P3,X22,2,0,113,true,torsion_free,") != std::string::npos);
}

TEST_CASE("inconsistent certificates are rejected") {
    auto cert = build_matching(rec("P3"), rec("P3"));
    CHECK_THROWS_AS(invariants_of_M(cert, rec("P3"), rec("Q")), validation_error);

    auto tampered = cert;
    tampered.span_rank = 1;  // would push b2 above the allowed range
    CHECK_THROWS_AS(invariants_of_M(tampered, rec("P3"), rec("P3")), validation_error);
}
