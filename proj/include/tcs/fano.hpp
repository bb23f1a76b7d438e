#pragma once

#include "tcs/lattice.hpp"
#include "tcs/matrix.hpp"
#include "tcs/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tcs {

struct FanoProvenance {
    enum class Kind { complete_intersection, double_cover, other };
    Kind kind = Kind::other;
    std::optional<Int> ambient_dim;  // projective space P^n of the presentation
    std::vector<Int> degrees;        // hypersurface degrees / branch degree
    std::string notes;
};

/// Invariants of a Fano 3-fold deformation class together with the
/// polarization lattice its anticanonical K3 divisors inherit.
struct PolarizedFanoClass {
    std::string name;
    Int b2 = 0;
    Int b3 = 0;
    Int minus_K_cubed = 0;
    Int genus = 0;
    IMat polarization;               // rank b2, signature (1, b2-1)
    std::vector<Int> kahler_vector;  // in the polarization basis
    Int kahler_square = 0;
    bool torsion_free_H3 = false;    // H^3(V) = 0, the sufficient condition
                                     // for torsion-free H_2 downstream
    FanoProvenance provenance;
};

struct ValidationIssue {
    std::string check;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::string name;
    std::vector<ValidationIssue> items;

    bool ok() const;
    std::string to_string() const;
};

/// The eight curated deformation classes, in a fixed order:
/// P3, P2xP1, Q, X3, X6, X8, X2, X22.
const std::vector<PolarizedFanoClass>& builtin_fano_classes();

ValidationReport validate_fano_class(const PolarizedFanoClass& rec);

/// Parses and validates a database document. Accepts {"classes": [...]} or a
/// bare array of records. Throws validation_error with field-level
/// diagnostics on the first bad record; duplicate names are rejected.
std::vector<PolarizedFanoClass> load_fano_classes(const json& doc);

json fano_class_to_json(const PolarizedFanoClass& rec);
PolarizedFanoClass fano_class_from_json(const json& j);

const PolarizedFanoClass& find_fano_class(const std::vector<PolarizedFanoClass>& db,
                                          const std::string& name);

}  // namespace tcs
