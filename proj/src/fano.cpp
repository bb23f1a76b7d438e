#include "tcs/fano.hpp"

#include "tcs/chern.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace tcs {

namespace {

Int pairing(const IMat& gram, const std::vector<Int>& v, const std::vector<Int>& w) {
    Int acc = 0;
    for (std::size_t i = 0; i < gram.rows; ++i)
        for (std::size_t j = 0; j < gram.cols; ++j) acc += v[i] * gram(i, j) * w[j];
    return acc;
}

PolarizedFanoClass make_class(std::string name, Int b2, Int b3, Int mkc, IMat polarization,
                              std::vector<Int> kahler, FanoProvenance prov) {
    PolarizedFanoClass rec;
    rec.name = std::move(name);
    rec.b2 = b2;
    rec.b3 = b3;
    rec.minus_K_cubed = mkc;
    rec.genus = mkc / 2 + 1;
    rec.polarization = std::move(polarization);
    rec.kahler_vector = std::move(kahler);
    rec.kahler_square = pairing(rec.polarization, rec.kahler_vector, rec.kahler_vector);
    rec.torsion_free_H3 = (b3 == 0);
    rec.provenance = std::move(prov);
    return rec;
}

FanoProvenance ci(Int n, std::vector<Int> degrees, std::string notes) {
    return FanoProvenance{FanoProvenance::Kind::complete_intersection, n, std::move(degrees),
                          std::move(notes)};
}

std::string kind_name(FanoProvenance::Kind k) {
    switch (k) {
        case FanoProvenance::Kind::complete_intersection: return "complete_intersection";
        case FanoProvenance::Kind::double_cover: return "double_cover";
        case FanoProvenance::Kind::other: return "other";
    }
    return "other";
}

FanoProvenance::Kind kind_from_name(const std::string& s) {
    if (s == "complete_intersection") return FanoProvenance::Kind::complete_intersection;
    if (s == "double_cover") return FanoProvenance::Kind::double_cover;
    if (s == "other") return FanoProvenance::Kind::other;
    throw validation_error("unknown provenance kind '" + s + "'");
}

}  // namespace

bool ValidationReport::ok() const {
    return std::all_of(items.begin(), items.end(), [](const auto& i) { return i.pass; });
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    os << name << ": " << (ok() ? "valid" : "INVALID") << "\n";
    for (const auto& i : items) {
        os << "  [" << (i.pass ? "ok" : "FAIL") << "] " << i.check;
        if (!i.detail.empty()) os << " (" << i.detail << ")";
        os << "\n";
    }
    return os.str();
}

const std::vector<PolarizedFanoClass>& builtin_fano_classes() {
    static const std::vector<PolarizedFanoClass> db = [] {
        std::vector<PolarizedFanoClass> v;
        v.push_back(make_class("P3", 1, 0, 64, IMat{{4}}, {1},
                               ci(3, {}, "projective 3-space; quartic anticanonical divisors")));
        v.push_back(make_class(
            "P2xP1", 2, 0, 54, IMat{{0, 3}, {3, 2}}, {1, 1},
            FanoProvenance{FanoProvenance::Kind::other, {}, {},
                           "bidegree (3,2) anticanonical divisors in P2 x P1; polarization "
                           "basis (CP2 x pt, line x CP1) restricted to the divisor"}));
        v.push_back(make_class("Q", 1, 0, 54, IMat{{6}}, {1},
                               ci(4, {2}, "quadric 3-fold; sextic anticanonical divisors")));
        v.push_back(make_class("X3", 1, 10, 24, IMat{{6}}, {1},
                               ci(4, {3}, "cubic 3-fold; sextic anticanonical divisors")));
        v.push_back(make_class("X6", 1, 40, 6, IMat{{6}}, {1},
                               ci(5, {2, 3}, "prime Fano of genus 4, quadric-cubic "
                                             "intersection in P5")));
        v.push_back(make_class("X8", 1, 28, 8, IMat{{8}}, {1},
                               ci(6, {2, 2, 2}, "prime Fano of genus 5, three quadrics in P6")));
        v.push_back(make_class(
            "X2", 1, 20, 16, IMat{{4}}, {1},
            FanoProvenance{FanoProvenance::Kind::double_cover, 3, {4},
                           "double cover of P3 branched over a quartic; anticanonical degree "
                           "doubles the quartic: -K^3 = 8 * 2"}));
        v.push_back(make_class(
            "X22", 1, 0, 22, IMat{{22}}, {1},
            FanoProvenance{FanoProvenance::Kind::other, {}, {},
                           "prime Fano of genus 12 with the homology of P3"}));
        return v;
    }();
    return db;
}

ValidationReport validate_fano_class(const PolarizedFanoClass& rec) {
    ValidationReport rep;
    rep.name = rec.name;
    auto check = [&](const std::string& name, bool pass, std::string detail = "") {
        rep.items.push_back(ValidationIssue{name, pass, std::move(detail)});
    };

    check("name_nonempty", !rec.name.empty());
    check("b2_range", rec.b2 >= 1 && rec.b2 <= 10, "b2 = " + std::to_string(rec.b2));
    check("polarization_rank", static_cast<Int>(rec.polarization.rows) == rec.b2 &&
                                   rec.polarization.rows == rec.polarization.cols);

    bool symmetric = true;
    for (std::size_t i = 0; i < rec.polarization.rows && symmetric; ++i)
        for (std::size_t j = i + 1; j < rec.polarization.cols && symmetric; ++j)
            symmetric = rec.polarization(i, j) == rec.polarization(j, i);
    check("polarization_symmetric", symmetric);

    if (symmetric && rec.polarization.rows == rec.polarization.cols &&
        static_cast<Int>(rec.polarization.rows) == rec.b2) {
        auto sig = signature(rec.polarization);
        check("polarization_signature",
              sig.p == 1 && sig.q == rec.b2 - 1 && sig.z == 0,
              "(" + std::to_string(sig.p) + "," + std::to_string(sig.q) + "," +
                  std::to_string(sig.z) + "), expected (1," + std::to_string(rec.b2 - 1) + ",0)");
    }

    const bool kahler_len_ok = static_cast<Int>(rec.kahler_vector.size()) == rec.b2;
    check("kahler_vector_length", kahler_len_ok);
    if (kahler_len_ok && static_cast<Int>(rec.polarization.rows) == rec.b2) {
        const Int sq = pairing(rec.polarization, rec.kahler_vector, rec.kahler_vector);
        check("kahler_square_matches", sq == rec.kahler_square,
              "stored " + std::to_string(rec.kahler_square) + ", recomputed " +
                  std::to_string(sq));
        check("kahler_square_positive_even", sq > 0 && sq % 2 == 0, std::to_string(sq));
        Int g = 0;
        for (Int c : rec.kahler_vector) g = std::gcd(g, c);
        check("kahler_vector_primitive", g == 1);
    }

    check("minus_K_cubed_positive_even", rec.minus_K_cubed > 0 && rec.minus_K_cubed % 2 == 0,
          rec.minus_K_cubed % 2 != 0 ? "genus not an integer" : std::to_string(rec.minus_K_cubed));
    if (rec.minus_K_cubed % 2 == 0)
        check("genus_formula", rec.genus == rec.minus_K_cubed / 2 + 1,
              "stored " + std::to_string(rec.genus) + ", expected " +
                  std::to_string(rec.minus_K_cubed / 2 + 1));

    const auto& prov = rec.provenance;
    if (prov.kind == FanoProvenance::Kind::complete_intersection && prov.ambient_dim) {
        try {
            auto chern = chern_complete_intersection(*prov.ambient_dim, prov.degrees);
            auto inv = euler_and_betti(chern.series, chern.degree, rec.b2);
            check("chern_b3", inv.b3 == rec.b3,
                  "stored " + std::to_string(rec.b3) + ", recomputed " + std::to_string(inv.b3));
            check("chern_minus_K_cubed", inv.minus_K_cubed == rec.minus_K_cubed,
                  "stored " + std::to_string(rec.minus_K_cubed) + ", recomputed " +
                      std::to_string(inv.minus_K_cubed));
            // The self-intersection curve of an anticanonical divisor is cut
            // out by two more hypersurfaces of the anticanonical degree.
            const Int m = *prov.ambient_dim + 1 -
                          std::accumulate(prov.degrees.begin(), prov.degrees.end(), Int(0));
            if (m >= 1) {
                auto degs = prov.degrees;
                degs.push_back(m);
                degs.push_back(m);
                auto curve = curve_euler(*prov.ambient_dim, degs);
                check("curve_euler_cross_check", curve.chi == -rec.minus_K_cubed,
                      "chi(C) = " + std::to_string(curve.chi));
            }
        } catch (const std::exception& e) {
            check("chern_recomputation", false, e.what());
        }
    } else if (prov.kind == FanoProvenance::Kind::double_cover && prov.ambient_dim &&
               prov.degrees.size() == 1) {
        try {
            const Int n = *prov.ambient_dim;
            const Int d = prov.degrees[0];
            const Int chi_branch = surface_euler(n, {d});
            auto inv = double_cover_invariants(n + 1, chi_branch, rec.b2);
            check("double_cover_b3", inv.b3 == rec.b3,
                  "stored " + std::to_string(rec.b3) + ", recomputed " + std::to_string(inv.b3));
            if (d % 2 == 0) {
                const Int half = n + 1 - d / 2;
                check("double_cover_minus_K_cubed",
                      2 * half * half * half == rec.minus_K_cubed,
                      "recomputed " + std::to_string(2 * half * half * half));
            }
        } catch (const std::exception& e) {
            check("double_cover_recomputation", false, e.what());
        }
    }

    return rep;
}

json fano_class_to_json(const PolarizedFanoClass& rec) {
    json j;
    j["name"] = rec.name;
    j["b2"] = rec.b2;
    j["b3"] = rec.b3;
    j["minus_K_cubed"] = rec.minus_K_cubed;
    json gram = json::array();
    for (std::size_t i = 0; i < rec.polarization.rows; ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < rec.polarization.cols; ++k)
            row.push_back(rec.polarization(i, k));
        gram.push_back(std::move(row));
    }
    j["polarization_gram"] = std::move(gram);
    j["kahler_vector"] = rec.kahler_vector;
    json prov;
    prov["kind"] = kind_name(rec.provenance.kind);
    if (rec.provenance.ambient_dim) prov["ambient_dim"] = *rec.provenance.ambient_dim;
    if (!rec.provenance.degrees.empty()) prov["degrees"] = rec.provenance.degrees;
    prov["notes"] = rec.provenance.notes;
    j["provenance"] = std::move(prov);
    return j;
}

PolarizedFanoClass fano_class_from_json(const json& j) {
    PolarizedFanoClass rec;
    rec.name = j.at("name").get<std::string>();
    rec.b2 = j.at("b2").get<Int>();
    rec.b3 = j.at("b3").get<Int>();
    rec.minus_K_cubed = j.at("minus_K_cubed").get<Int>();
    if (rec.minus_K_cubed % 2 != 0)
        throw validation_error("record '" + rec.name +
                               "': minus_K_cubed is odd, genus not an integer");
    rec.genus = rec.minus_K_cubed / 2 + 1;

    const auto& gram = j.at("polarization_gram");
    rec.polarization = IMat(gram.size(), gram.empty() ? 0 : gram.front().size());
    for (std::size_t i = 0; i < rec.polarization.rows; ++i) {
        if (gram[i].size() != rec.polarization.cols)
            throw validation_error("record '" + rec.name + "': ragged polarization_gram");
        for (std::size_t k = 0; k < rec.polarization.cols; ++k)
            rec.polarization(i, k) = gram[i][k].get<Int>();
    }
    rec.kahler_vector = j.at("kahler_vector").get<std::vector<Int>>();
    if (rec.kahler_vector.size() != rec.polarization.rows)
        throw validation_error("record '" + rec.name + "': kahler_vector length mismatch");
    rec.kahler_square = pairing(rec.polarization, rec.kahler_vector, rec.kahler_vector);
    rec.torsion_free_H3 = (rec.b3 == 0);

    if (j.contains("provenance")) {
        const auto& p = j.at("provenance");
        rec.provenance.kind = kind_from_name(p.value("kind", "other"));
        if (p.contains("ambient_dim")) rec.provenance.ambient_dim = p.at("ambient_dim").get<Int>();
        if (p.contains("degrees")) rec.provenance.degrees = p.at("degrees").get<std::vector<Int>>();
        rec.provenance.notes = p.value("notes", "");
    }
    return rec;
}

std::vector<PolarizedFanoClass> load_fano_classes(const json& doc) {
    const json& arr = doc.is_array() ? doc : doc.at("classes");
    if (!arr.is_array()) throw validation_error("database must be an array of class records");
    std::vector<PolarizedFanoClass> out;
    std::set<std::string> seen;
    for (const auto& item : arr) {
        auto rec = fano_class_from_json(item);
        if (!seen.insert(rec.name).second)
            throw validation_error("duplicate class name '" + rec.name + "'");
        auto rep = validate_fano_class(rec);
        if (!rep.ok())
            throw validation_error("record '" + rec.name + "' failed validation:\n" +
                                   rep.to_string());
        out.push_back(std::move(rec));
    }
    return out;
}

const PolarizedFanoClass& find_fano_class(const std::vector<PolarizedFanoClass>& db,
                                          const std::string& name) {
    for (const auto& rec : db)
        if (rec.name == name) return rec;
    std::string names;
    for (const auto& rec : db) names += (names.empty() ? "" : ", ") + rec.name;
    throw validation_error("unknown Fano class '" + name + "'; available: " + names);
}

}  // namespace tcs
