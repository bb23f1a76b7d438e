#include "tcs/g2.hpp"

#include "tcs/chern.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tcs {

Int pi1_complement(Int m) {
    if (m <= 0)
        throw std::invalid_argument("intersection number must be positive, got " +
                                    std::to_string(m));
    return m;
}

G2Invariants invariants_of_M(const MatchingCertificate& cert, const PolarizedFanoClass& rec1,
                             const PolarizedFanoClass& rec2) {
    if (cert.fano1 != rec1.name || cert.fano2 != rec2.name)
        throw validation_error("certificate names (" + cert.fano1 + ", " + cert.fano2 +
                               ") do not match the records (" + rec1.name + ", " + rec2.name +
                               ")");
    const Int r = cert.span_rank;
    G2Invariants inv;
    inv.span_rank_used = r;
    inv.b1 = 0;
    inv.pi1_trivial = pi1_complement(1) == 1;  // exceptional lines meet the divisor once
    inv.holonomy_exactly_g2 = inv.pi1_trivial;
    inv.b2 = rec1.b2 + rec2.b2 - r;
    inv.b2_rule = "b2(V1) + b2(V2) - span_rank (derived rule, validated on the worked examples)";

    if (inv.b2 < 0 || inv.b2 > 9)
        throw validation_error("inconsistent certificate: b2 = " + std::to_string(inv.b2) +
                               " outside [0, 9]");
    if (inv.b2 > std::min(rec1.b2, rec2.b2) - 1)
        throw validation_error("inconsistent certificate: b2 = " + std::to_string(inv.b2) +
                               " exceeds min(b2) - 1 = " +
                               std::to_string(std::min(rec1.b2, rec2.b2) - 1));

    const auto blown1 = blowup_invariants(rec1.b2, rec1.b3, rec1.genus);
    const auto blown2 = blowup_invariants(rec2.b2, rec2.b3, rec2.genus);
    inv.b3 = blown1.b3 + blown2.b3 + 23 - inv.b2;
    inv.torsion_free_H2_known = rec1.torsion_free_H3 && rec2.torsion_free_H3;
    return inv;
}

Int theorem_b3_check(const PolarizedFanoClass& rec1, const PolarizedFanoClass& rec2) {
    if (rec1.b2 != 1)
        throw std::invalid_argument("theorem hypothesis not met: b2(" + rec1.name +
                                    ") = " + std::to_string(rec1.b2) + ", need 1");
    return rec1.b3 + rec1.minus_K_cubed + rec2.b3 + rec2.minus_K_cubed + 27;
}

std::vector<GeographyRow> geography(const std::vector<PolarizedFanoClass>& db,
                                    const GeographyConfig& config) {
    std::vector<GeographyRow> rows;
    for (std::size_t i = 0; i < db.size(); ++i) {
        for (std::size_t j = i; j < db.size(); ++j) {
            const auto& rec1 = db[i];
            const auto& rec2 = db[j];
            const Int r_min = std::max(rec1.b2, rec2.b2) + 1;
            const Int r_max = rec1.b2 + rec2.b2;
            for (Int r = r_min; r <= r_max; ++r) {
                GeographyRow row;
                row.fano1 = rec1.name;
                row.fano2 = rec2.name;
                row.span_rank = r;
                MatchConfig mc;
                mc.radius = config.radius;
                mc.target_span_rank = r;
                auto hit = config.hints.find({rec1.name, rec2.name, r});
                if (hit != config.hints.end()) {
                    mc.hint1 = hit->second.first;
                    mc.hint2 = hit->second.second;
                }
                try {
                    auto cert = build_matching(rec1, rec2, mc);
                    auto inv = invariants_of_M(cert, rec1, rec2);
                    // Cross-check against the closed form whenever one side
                    // is a b2 = 1 class.
                    if (rec1.b2 == 1 || rec2.b2 == 1) {
                        const Int predicted = rec1.b2 == 1 ? theorem_b3_check(rec1, rec2)
                                                           : theorem_b3_check(rec2, rec1);
                        if (inv.b3 != predicted)
                            throw validation_error("closed-form b3 " + std::to_string(predicted) +
                                                   " disagrees with " + std::to_string(inv.b3));
                    }
                    row.invariants = inv;
                    row.status = "ok";
                    if (config.certificate_dir) {
                        const std::string path = *config.certificate_dir + "/cert_" + rec1.name +
                                                 "_" + rec2.name + "_r" + std::to_string(r) +
                                                 ".json";
                        std::ofstream out(path);
                        if (!out) throw validation_error("cannot write " + path);
                        out << certificate_to_json(cert).dump(2) << "\n";
                        row.certificate_path = path;
                    }
                } catch (const search_exhausted& e) {
                    row.status = std::string("no certificate within radius: ") + e.what();
                } catch (const match_error& e) {
                    row.status = std::string("no certificate within radius: ") + e.what();
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::string geography_csv(const std::vector<GeographyRow>& rows) {
    std::ostringstream os;
    os << "fano1,fano2,span_rank,b2,b3,pi1_trivial,torsion_flag,certificate_path\n";
    for (const auto& row : rows) {
        os << row.fano1 << "," << row.fano2 << "," << row.span_rank << ",";
        if (row.invariants) {
            const auto& inv = *row.invariants;
            os << inv.b2 << "," << inv.b3 << "," << (inv.pi1_trivial ? "true" : "false") << ","
               << (inv.torsion_free_H2_known ? "torsion_free" : "unknown") << ","
               << row.certificate_path;
        } else {
            os << ",,,," << row.status;
        }
        os << "\n";
    }
    return os.str();
}

json invariants_to_json(const G2Invariants& inv) {
    json j;
    j["b1"] = inv.b1;
    j["b2"] = inv.b2;
    j["b3"] = inv.b3;
    j["pi1_trivial"] = inv.pi1_trivial;
    j["torsion_free_H2"] = inv.torsion_free_H2_known ? "true" : "unknown";
    j["span_rank_used"] = inv.span_rank_used;
    j["holonomy_exactly_g2"] = inv.holonomy_exactly_g2;
    j["b2_rule"] = inv.b2_rule;
    return j;
}

}  // namespace tcs
