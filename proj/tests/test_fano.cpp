#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tcs/fano.hpp"

using namespace tcs;

TEST_CASE("builtin records validate and carry the expected fields") {
    const auto& db = builtin_fano_classes();
    REQUIRE(db.size() == 8);
    for (const auto& rec : db) {
        auto rep = validate_fano_class(rec);
        INFO(rep.to_string());
        CHECK(rep.ok());
    }

    const auto& p3 = find_fano_class(db, "P3");
    CHECK(p3.b2 == 1);
    CHECK(p3.b3 == 0);
    CHECK(p3.minus_K_cubed == 64);
    CHECK(p3.genus == 33);
    CHECK(p3.polarization == IMat{{4}});
    CHECK(p3.kahler_square == 4);
    CHECK(p3.torsion_free_H3);

    const auto& pp = find_fano_class(db, "P2xP1");
    CHECK(pp.polarization == IMat{{0, 3}, {3, 2}});
    CHECK(pp.kahler_vector == std::vector<Int>{1, 1});
    CHECK(pp.kahler_square == 8);
    CHECK(pp.b2 == 2);
    CHECK(pp.b3 == 0);
    CHECK(pp.minus_K_cubed == 54);

    const auto& x22 = find_fano_class(db, "X22");
    CHECK(x22.b3 == 0);
    CHECK(x22.minus_K_cubed == 22);
    CHECK(x22.genus == 12);

    const auto& x2 = find_fano_class(db, "X2");
    CHECK(x2.b3 == 20);
    CHECK(x2.minus_K_cubed == 16);
    CHECK_FALSE(x2.torsion_free_H3);

    CHECK_THROWS_AS(find_fano_class(db, "nope"), validation_error);
}

TEST_CASE("anticanonical identity for the very-ample prime classes") {
    const auto& db = builtin_fano_classes();
    for (const char* name : {"X6", "X8", "X22"}) {
        const auto& rec = find_fano_class(db, name);
        CHECK(rec.kahler_square == rec.minus_K_cubed);
        CHECK(rec.kahler_square == 2 * rec.genus - 2);
    }
    // quartic divisors on P3 sit in moduli of degree 4 = 2*3 - 2
    CHECK(find_fano_class(db, "P3").kahler_square == 4);
}

TEST_CASE("json round trip") {
    const auto& db = builtin_fano_classes();
    for (const auto& rec : db) {
        auto back = fano_class_from_json(fano_class_to_json(rec));
        CHECK(back.name == rec.name);
        CHECK(back.b2 == rec.b2);
        CHECK(back.b3 == rec.b3);
        CHECK(back.minus_K_cubed == rec.minus_K_cubed);
        CHECK(back.genus == rec.genus);
        CHECK(back.polarization == rec.polarization);
        CHECK(back.kahler_vector == rec.kahler_vector);
        CHECK(back.kahler_square == rec.kahler_square);
        CHECK(back.torsion_free_H3 == rec.torsion_free_H3);
    }
}

TEST_CASE("loading a well-formed single-record database") {
    json doc;
    doc["classes"] = json::array({fano_class_to_json(builtin_fano_classes()[0])});
    auto loaded = load_fano_classes(doc);
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].name == "P3");
    CHECK(loaded[0].minus_K_cubed == 64);

    // bare arrays are accepted too
    auto loaded2 = load_fano_classes(doc["classes"]);
    CHECK(loaded2.size() == 1);
}

TEST_CASE("rejections with diagnostics") {
    auto good = fano_class_to_json(builtin_fano_classes()[0]);

    auto odd = good;
    odd["minus_K_cubed"] = 63;
    CHECK_THROWS_WITH_AS(load_fano_classes(json::array({odd})),
                         "record 'P3': minus_K_cubed is odd, genus not an integer",
                         validation_error);

    auto bad_sig = good;
    bad_sig["polarization_gram"] = json::array({json::array({4, 0}), json::array({0, 4})});
    bad_sig["kahler_vector"] = json::array({1, 0});
    bad_sig["b2"] = 2;
    CHECK_THROWS_AS(load_fano_classes(json::array({bad_sig})), validation_error);

    json dup = json::array({good, good});
    CHECK_THROWS_WITH_AS(load_fano_classes(dup), "duplicate class name 'P3'", validation_error);
}

TEST_CASE("tampered invariants are flagged") {
    auto rec = builtin_fano_classes()[5];  // X8, complete intersection provenance
    REQUIRE(rec.name == "X8");
    rec.b3 = 29;
    auto rep = validate_fano_class(rec);
    CHECK_FALSE(rep.ok());
    bool found = false;
    for (const auto& item : rep.items)
        if (item.check == "chern_b3" && !item.pass) found = true;
    CHECK(found);
}

TEST_CASE("validation recomputes chern data from provenance") {
    const auto& db = builtin_fano_classes();
    // X8 via (6, [2,2,2]), Q via (4, [2]): recomputation must agree
    for (const char* name : {"X8", "Q", "X3", "X6"}) {
        const auto& rec = find_fano_class(db, name);
        auto rep = validate_fano_class(rec);
        bool b3_checked = false, curve_checked = false;
        for (const auto& item : rep.items) {
            if (item.check == "chern_b3") b3_checked = item.pass;
            if (item.check == "curve_euler_cross_check") curve_checked = item.pass;
        }
        CHECK(b3_checked);
        CHECK(curve_checked);
    }
    // the double cover validates through its branch divisor
    auto rep = validate_fano_class(find_fano_class(db, "X2"));
    bool dc = false, dk = false;
    for (const auto& item : rep.items) {
        if (item.check == "double_cover_b3") dc = item.pass;
        if (item.check == "double_cover_minus_K_cubed") dk = item.pass;
    }
    CHECK(dc);
    CHECK(dk);
}
