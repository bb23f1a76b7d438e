#pragma once

#include "tcs/fano.hpp"
#include "tcs/matching.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tcs {

/// Topological invariants of the compact 7-manifold glued from a matching
/// configuration over a pair of Fano classes.
struct G2Invariants {
    Int b1 = 0;
    Int b2 = 0;
    Int b3 = 0;
    bool pi1_trivial = true;
    /// Sufficient condition (H^3 of both 3-folds vanishes) for torsion-free
    /// H_2; when false the torsion status is unknown, not negative.
    bool torsion_free_H2_known = false;
    Int span_rank_used = 0;
    /// Finite fundamental group forces the holonomy of a torsion-free
    /// structure to be the full group.
    bool holonomy_exactly_g2 = true;
    /// How b2 was obtained; the linear rule in the span rank is a derived
    /// formula validated against the worked examples, not a theorem.
    std::string b2_rule;
};

/// Order of the (always cyclic) fundamental group of the divisor complement;
/// m is the intersection number of the divisor with a transverse curve.
Int pi1_complement(Int m);

G2Invariants invariants_of_M(const MatchingCertificate& cert, const PolarizedFanoClass& rec1,
                             const PolarizedFanoClass& rec2);

/// Closed-form b3 for pairs whose first class has b2 = 1 (where b2(M) = 0):
/// b3(V1) - K^3(V1) + b3(V2) - K^3(V2) + 27.
Int theorem_b3_check(const PolarizedFanoClass& rec1, const PolarizedFanoClass& rec2);

struct GeographyRow {
    std::string fano1;
    std::string fano2;
    Int span_rank = 0;
    std::optional<G2Invariants> invariants;
    std::string status;  // "ok" or the failure reason
    std::string certificate_path;
};

struct GeographyConfig {
    Int radius = 8;
    /// Hints keyed by (fano1, fano2, span_rank).
    std::map<std::tuple<std::string, std::string, Int>, std::pair<EmbeddingHint, EmbeddingHint>>
        hints;
    /// When set, certificates are written as JSON files into this directory.
    std::optional<std::string> certificate_dir;
};

/// For every unordered pair of classes and every feasible span rank, attempt
/// a matching and tabulate the resulting invariants. Failed searches stay in
/// the table with their status. Rows are canonically ordered; output is
/// byte-deterministic.
std::vector<GeographyRow> geography(const std::vector<PolarizedFanoClass>& db,
                                    const GeographyConfig& config = {});

/// CSV with header fano1,fano2,span_rank,b2,b3,pi1_trivial,torsion_flag,certificate_path.
std::string geography_csv(const std::vector<GeographyRow>& rows);

json invariants_to_json(const G2Invariants& inv);

}  // namespace tcs
