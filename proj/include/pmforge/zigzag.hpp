// zigzag.hpp
//
// One-parameter modules with arrows in either direction, and restriction of
// grid modules to lattice paths.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmforge/pmodule.hpp"

namespace pmforge {

enum class Orientation { forward, backward };

/// Interval [a, b] of positions, inclusive.
using Bar = std::pair<int, int>;

/**
 * @brief A zigzag module of the given length.
 *
 * maps[k] joins positions k and k+1: shape dims[k+1] x dims[k] when forward,
 * dims[k] x dims[k+1] when backward.
 */
struct ZigzagModule {
    Field field = Field::prime(2);
    std::vector<std::size_t> dims;
    std::vector<Orientation> orientations;
    std::vector<Matrix> maps;
    std::optional<std::vector<Bar>> interval_form;

    std::size_t length() const { return dims.size(); }
};

/// "ffb..." <-> orientation list.
std::vector<Orientation> parse_orientations(const std::string& text);
std::string format_orientations(const std::vector<Orientation>& o);

/// Builds the direct sum of interval modules K[a,b]; the basis at each position follows the bar order.
ZigzagModule zigzag_from_bars(const Field& field, const std::vector<Orientation>& orientations,
                              const std::vector<Bar>& bars);

/// Empty string if shapes and interval_form are consistent, otherwise a description.
std::string check_zigzag(const ZigzagModule& z);

/// Sorted barcode, computed from generalized ranks (limit to colimit over each interval).
std::vector<Bar> zigzag_barcode(const ZigzagModule& z);

/// One step of a path: axis and +1/-1.
struct PathStep {
    std::size_t axis;
    int direction;

    friend bool operator==(const PathStep&, const PathStep&) = default;
};

struct PathSpec {
    std::vector<LatticePoint> points;
    std::vector<PathStep> steps;
};

/// Derives steps; throws ShapeError unless consecutive points are lattice neighbours.
PathSpec make_path(std::vector<LatticePoint> points);

ZigzagModule restrict_path(const PersistenceModule& m, const PathSpec& path);

/// Same dims, orientations and barcode.
bool zigzag_equivalent(const ZigzagModule& a, const ZigzagModule& b);

}  // namespace pmforge
