// forge.hpp
//
// Layered constructions of indecomposable (n+1)-dimensional modules that
// contain a given n-dimensional module as a hyperplane restriction.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pmforge/intervals.hpp"
#include "pmforge/pmodule.hpp"
#include "pmforge/zigzag.hpp"

namespace pmforge {

enum class RectMode { main, dual };

/**
 * @brief Free parameters of a rectangular construction.
 *
 * Main mode fills beta_primes (chosen) and alpha_primes = mu - beta_primes;
 * dual mode fills alpha_primes (chosen) and beta_primes = mu - alpha_primes.
 */
struct ConstructionParams {
    RectMode mode = RectMode::main;
    std::vector<LatticePoint> beta_primes;
    std::vector<LatticePoint> alpha_primes;
    LatticePoint mu;
    /// summand_order[k] = input index of the k-th summand as used by the construction.
    std::vector<std::size_t> summand_order;

    friend bool operator==(const ConstructionParams&, const ConstructionParams&) = default;
};

/// Deterministic chooser. Coordinates may be negative in dual mode; the caller shifts.
ConstructionParams choose_rect_params(const std::vector<Rectangle>& rects, RectMode mode);

/// nullopt if params satisfy every constraint for rects, else the first violated one.
std::optional<std::string> check_rect_params(const std::vector<Rectangle>& rects, const ConstructionParams& params);

/// Layer r, summand i, optional sub-index j (all 1-based for i and j).
struct SummandLabel {
    int layer = 0;
    std::size_t i = 1;
    std::optional<std::size_t> j;

    std::string to_string() const;
    friend bool operator==(const SummandLabel&, const SummandLabel&) = default;
};

struct LayerInfo {
    int index = 0;
    std::vector<SummandLabel> labels;
    /// Empty when the layer is not presented as a sum of intervals (the input of main_general).
    std::vector<IntervalSupport> summands;
};

struct LayeredConstruction {
    std::string method;
    PersistenceModule result{Field::prime(2), 1};
    int m_layer = 0;
    /// Translation applied to the input inside result (length n).
    std::vector<int> shift;
    std::vector<LayerInfo> layers;
    std::optional<ConstructionParams> params;
    std::optional<ConstructionParams> dual_params;
};

/// restrict_hyperplane(c.result, c.m_layer) equals input translated by c.shift.
bool layer_equal(const LayeredConstruction& c, const PersistenceModule& input);

PersistenceModule rectangle_sum(const std::vector<Rectangle>& rects, const Field& field);

LayeredConstruction main_rectangular(const std::vector<Rectangle>& rects, const Field& field,
                                     const std::optional<ConstructionParams>& params = std::nullopt);
LayeredConstruction dual_rectangular(const std::vector<Rectangle>& rects, const Field& field,
                                     const std::optional<ConstructionParams>& params = std::nullopt);
LayeredConstruction glued_rectangular(const std::vector<Rectangle>& rects, const Field& field);

LayeredConstruction main_interval(const std::vector<IntervalSupport>& summands, const Field& field);
LayeredConstruction dual_interval(const std::vector<IntervalSupport>& summands, const Field& field);
LayeredConstruction glued_interval(const std::vector<IntervalSupport>& summands, const Field& field);

/// compute_generators plus generating and (up to max_check generators) minimality assertions.
std::vector<Generator> minimal_generators(const PersistenceModule& m, std::size_t max_check = 64);

struct GeneratorSpan {
    IntervalSupport support;
    /// Block at b is the column composite_map(m, grade, b) * g.
    HomElement inclusion;
};

GeneratorSpan generator_span(const PersistenceModule& m, const Generator& g);

/// Input treated as a single summand.
LayeredConstruction main_general(const PersistenceModule& m);

struct ZigzagEmbedding {
    PersistenceModule module{Field::prime(2), 2};
    std::vector<IntervalSupport> summands;
    PathSpec path;
};

ZigzagEmbedding embed_zigzag(const ZigzagModule& z);

struct ZigzagLift {
    LayeredConstruction construction;
    ZigzagEmbedding embedding;
    /// Path inside the m_layer hyperplane of the lifted module.
    PathSpec path;
};

ZigzagLift lift_zigzag(const ZigzagModule& z);

/// main-rect, dual-rect, glued-rect, main-int, dual-int, glued-int, main-general, lift-zigzag.
const std::vector<std::string>& method_names();

}  // namespace pmforge
