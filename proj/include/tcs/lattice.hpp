#pragma once

#include "tcs/matrix.hpp"
#include "tcs/numeric.hpp"

#include "json.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace tcs {

using json = nlohmann::ordered_json;

struct Signature {
    Int p = 0;  // positive directions
    Int q = 0;  // negative directions
    Int z = 0;  // radical
    bool operator==(const Signature&) const = default;
};

/// A finite-rank integer lattice presented by a symmetric Gram matrix.
///
/// Standard lattices carry an explicit basis order:
///   H        basis (e, e'), Gram [[0,1],[1,0]]
///   E8       the eight simple roots; nodes 0..6 form a chain and node 7
///            attaches to node 4 (Gram = Cartan matrix, diagonal 2)
///   minusE8  E8 negated
///   K3       (-E8) + (-E8) + H + H + H: 16 root coordinates, then the
///            hyperbolic pairs (e1,e1'),(e2,e2'),(e3,e3')
///   L0       (-E8) + (-E8) + H + H, same ordering convention
struct GramLattice {
    std::string label;
    IMat gram;
    /// Coordinate index pairs of whole hyperbolic summands, when known.
    std::vector<std::pair<std::size_t, std::size_t>> hyperbolic_pairs;

    std::size_t rank() const { return gram.rows; }
    bool is_even() const;
    bool is_symmetric() const;
};

using LatticePtr = std::shared_ptr<const GramLattice>;

/// Integer coordinate tuple relative to its ambient lattice's basis.
struct LatticeVector {
    LatticePtr ambient;
    std::vector<Int> coords;

    bool is_zero() const;
    bool operator==(const LatticeVector& o) const { return coords == o.coords; }
};

/// A sublattice given by a list of basis vectors in ambient coordinates.
struct Sublattice {
    LatticePtr ambient;
    std::vector<std::vector<Int>> basis;

    std::size_t rank() const { return basis.size(); }
    IMat basis_matrix() const;  // ambient-rank x rank, columns = basis vectors
    IMat induced_gram() const;
};

LatticePtr standard_lattice(const std::string& name);
LatticePtr make_lattice(std::string label, IMat gram);

LatticeVector make_vector(LatticePtr ambient, std::vector<Int> coords);
Sublattice make_sublattice(LatticePtr ambient, std::vector<std::vector<Int>> basis);

Int inner_product(const LatticeVector& v, const LatticeVector& w);
Int square(const LatticeVector& v);

/// Exact signature by rational congruence diagonalization; no floating point.
Signature signature(const GramLattice& l);
Signature signature(const IMat& gram);

BigInt gram_determinant(const GramLattice& l);
bool is_unimodular(const GramLattice& l);

bool is_primitive_vector(const LatticeVector& v);
bool is_primitive_sublattice(const Sublattice& s);

Sublattice orthogonal_complement(const Sublattice& s);
Sublattice saturation(const Sublattice& s);

/// The elementary isometry determined by an isotropic primitive x and an
/// orthogonal f:  v -> v + (v,f)x - (f,f)/2 (v,x)x - (v,x)f.
LatticeVector eichler_transform(const LatticeVector& f, const LatticeVector& x,
                                const LatticeVector& v);

/// Replayable record of an elementary transformation.
struct EichlerSpec {
    LatticeVector f;
    LatticeVector x;

    LatticeVector apply(const LatticeVector& v) const { return eichler_transform(f, x, v); }
    bool fixes(const LatticeVector& v) const;
    IMat to_matrix() const;  // ambient-rank x ambient-rank isometry matrix
};

struct MoveIntoRank2Result {
    LatticeVector image;
    EichlerSpec spec;
};

/// Moves e into the span of the rank-2 sublattice {x, x'} via the elementary
/// transformation for (f, x), provided e decomposes as
/// e = a x + b x' + (x,x') b f with integers a, b.
MoveIntoRank2Result move_into_rank2(const LatticeVector& e, const Sublattice& s2,
                                    const LatticeVector& f);

json lattice_to_json(const GramLattice& l);
GramLattice lattice_from_json(const json& j);
json vector_to_json(const LatticeVector& v);
LatticeVector vector_from_json(const json& j, LatticePtr ambient);

}  // namespace tcs
