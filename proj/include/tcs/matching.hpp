#pragma once

#include "tcs/fano.hpp"
#include "tcs/lattice.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tcs {

/// Thrown by build_matching with the name of the failing construction step.
struct match_error : std::runtime_error {
    std::string step;
    match_error(std::string step_, const std::string& what)
        : std::runtime_error("[" + step_ + "] " + what), step(std::move(step_)) {}
};

/// A Gram-preserving map from a polarization lattice into the K3 lattice
/// whose image is a primitive sublattice. Column j of matrix is the image of
/// the j-th source basis vector.
struct Embedding {
    IMat source_gram;
    LatticePtr target;
    IMat matrix;  // target-rank x source-rank

    std::size_t source_rank() const { return matrix.cols; }
    LatticeVector apply(const std::vector<Int>& source_coords) const;
    std::vector<LatticeVector> image_vectors() const;
    Sublattice image() const;
    bool gram_preserving() const;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    bool required = true;
    std::string detail;
};

/// Lattice data certifying one matching configuration: two embedded
/// polarizations, the orthogonal positive vectors kappa1/kappa2, a positive
/// kappaK orthogonal to both images, and the span rank driving b2 of the
/// glued 7-manifold.
struct MatchingCertificate {
    std::string fano1;
    std::string fano2;
    Embedding emb1;
    Embedding emb2;
    LatticeVector kappa1;
    LatticeVector kappa2;
    LatticeVector kappaK;
    Int span_rank = 0;
    Int kappa1_square = 0;
    Int kappa2_square = 0;
    Int kappaK_square = 0;
    BigRat lambda1_sq;  // lambda_i^2 * kappa_i^2 = kappaK^2, exact rationals
    BigRat lambda2_sq;
    /// Full cross-orthogonality (each kappa orthogonal to the whole opposite
    /// image). The engine's constructive path produces it; hinted
    /// configurations that overlap the two images may not.
    bool strict_orthogonality = false;
    std::vector<CheckResult> checks;
    std::string caveat;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool ok = false;
    std::string to_string() const;
};

struct EmbeddingHint {
    /// Row i = image in K3 coordinates of the i-th polarization basis vector.
    std::vector<std::vector<Int>> images;
};

struct MatchConfig {
    Int radius = 8;
    std::optional<Int> target_span_rank;
    std::optional<EmbeddingHint> hint1;
    std::optional<EmbeddingHint> hint2;
};

/// Canonical primitive vector of the given positive even square inside one
/// hyperbolic summand: e_j + (square/2) e_j'.
LatticeVector embed_rank1(Int square, std::size_t summand_index = 0,
                          LatticePtr ambient = nullptr);

struct EmbedOptions {
    std::set<std::size_t> reserved_summands;
    std::optional<EmbeddingHint> hint;
    Int radius = 8;
    /// Pin the image of the record's Kahler vector to this vector.
    std::optional<LatticeVector> pinned_kahler;
    /// Extra vectors the whole image must be orthogonal to.
    std::vector<LatticeVector> orthogonal_to;
};

/// Embeds a polarization lattice into K3. The constructive path covers
/// ranks 1 and 2; higher rank needs an explicit hint.
Embedding embed_polarization(const PolarizedFanoClass& rec, const EmbedOptions& opts = {});

/// Primitive vector of the given positive even square orthogonal to the
/// constraints, by bounded support enumeration over the orthogonal
/// complement (deterministic; smallest support first).
LatticeVector find_orthogonal_positive(const Sublattice& constraints, Int square, Int radius);

MatchingCertificate build_matching(const PolarizedFanoClass& rec1, const PolarizedFanoClass& rec2,
                                   const MatchConfig& config = {});

/// Recomputes every certificate condition from raw data.
VerifyReport verify_certificate(const MatchingCertificate& cert, const PolarizedFanoClass& rec1,
                                const PolarizedFanoClass& rec2);

json certificate_to_json(const MatchingCertificate& cert);
MatchingCertificate certificate_from_json(const json& j, const PolarizedFanoClass& rec1,
                                          const PolarizedFanoClass& rec2);

/// Applies a replayed isometry to every vector and embedding of a
/// certificate; isometries preserve all certificate checks.
MatchingCertificate transform_certificate(const MatchingCertificate& cert, const EichlerSpec& spec);

}  // namespace tcs
