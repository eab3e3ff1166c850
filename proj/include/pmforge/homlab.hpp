// homlab.hpp
//
// Hom spaces between finite modules, endomorphism dimensions, idempotent
// search and randomized isomorphism testing.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmforge/pmodule.hpp"

namespace pmforge {

/**
 * @brief A basis of Hom(M, N).
 *
 * A hom is fixed by the images of a minimal generating set of M, so each element
 * also carries its coordinates: the concatenated images x_k in N at the generator
 * grades.
 */
struct HomBasis {
    std::vector<HomElement> elements;
    std::vector<Generator> generators;
    /// dim N at each generator grade; x_k occupies that many coordinates.
    std::vector<std::size_t> target_dims;
    std::vector<Vector> coords;

    std::size_t dim() const { return elements.size(); }
};

/**
 * @brief Solves for Hom(M, N) through a presentation of M.
 *
 * Unknowns are the images of the minimal generators of M. Grades are swept in
 * lexicographic order; at each grade the relations among generators that are not
 * already implied from a predecessor grade contribute equations through the
 * structure maps of N.
 */
HomBasis hom_basis(const PersistenceModule& m, const PersistenceModule& n);

/// dim Hom(M, N) without materialising the basis.
std::size_t hom_dim(const PersistenceModule& m, const PersistenceModule& n);

/// Reference solver: one unknown per entry of every block, one equation per commuting condition.
HomBasis hom_basis_naive(const PersistenceModule& m, const PersistenceModule& n);

std::size_t end_dim(const PersistenceModule& m);

/// f o g: apply g : A -> B first, then f : B -> C.
HomElement compose(const HomElement& f, const HomElement& g, const PersistenceModule& a, const PersistenceModule& b,
                   const PersistenceModule& c);

HomElement linear_combination(const Field& field, const std::vector<HomElement>& basis, const Vector& coeffs);

/// Coordinates of f in the basis, or nullopt if f is not in its span.
std::optional<Vector> coordinates_in(const HomBasis& basis, const HomElement& f, const PersistenceModule& m);

enum class Verdict { indecomposable_dim1, indecomposable_no_idempotent, decomposable, unknown };

std::string verdict_name(Verdict v);

struct IndecomposabilityVerdict {
    Verdict verdict = Verdict::unknown;
    std::size_t end_dim = 0;
    /// Nontrivial idempotent endomorphism when found.
    std::optional<HomElement> idempotent;
    /// Two nonempty unions of support components when the support splits.
    std::optional<std::pair<std::vector<LatticePoint>, std::vector<LatticePoint>>> support_split;
    std::string note;
};

constexpr std::uint64_t default_search_budget = std::uint64_t(1) << 20;

IndecomposabilityVerdict indecomposable(const PersistenceModule& m, std::uint64_t budget = default_search_budget);

/// Checks e o e = e, e != 0 and e != id.
bool is_nontrivial_idempotent(const HomElement& e, const PersistenceModule& m);

enum class IsoAnswer { yes, no, unknown };

struct IsoResult {
    IsoAnswer answer = IsoAnswer::unknown;
    std::optional<HomElement> forward;
    std::optional<HomElement> backward;
    std::string reason;
};

/**
 * @brief Randomized isomorphism test.
 *
 * Random elements of Hom(M, N) are tried for pointwise invertibility. Over a prime
 * field, when the Hom space has at most `budget` elements, a failed random search
 * is followed by a full scan, so the answer is then never unknown.
 */
IsoResult are_isomorphic(const PersistenceModule& m, const PersistenceModule& n, std::size_t trials,
                         std::uint64_t seed, std::uint64_t budget = default_search_budget);

/// The two-layer module built from K[1,4]^d + K[2,3]^d (layer 0) and K[0,3]^d + K[1,2]^d (layer 1).
PersistenceModule build_be2_family(std::size_t d, Scalar lambda, const Field& field);

}  // namespace pmforge
