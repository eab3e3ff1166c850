// io.hpp
//
// JSON interchange for modules, summand lists, homomorphisms, zigzags,
// constructions and run reports.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pmforge/forge.hpp"
#include "pmforge/pmodule.hpp"
#include "pmforge/suite.hpp"
#include "pmforge/zigzag.hpp"

namespace pmforge {

using Json = nlohmann::ordered_json;

/// Reads and parses a JSON file; ParseError on failure.
Json read_json_file(const std::string& path);

/// "2", "GF(5)", "gf5", "Q", "rational".
Field parse_field_name(const std::string& text);

Json field_to_json(const Field& f);
Field field_from_json(const Json& j);

Json point_to_json(const LatticePoint& p);
LatticePoint point_from_json(const Json& j);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const Field& f, std::size_t rows, std::size_t cols);

Json module_to_json(const PersistenceModule& m);
/// The "field" key wins over default_field; ParseError on malformed input.
PersistenceModule module_from_json(const Json& j, const Field& default_field);

Json support_to_json(const IntervalSupport& s);
IntervalSupport support_from_json(const Json& j);

struct LabeledSummand {
    std::string label;
    IntervalSupport support;
};

/// A module, optionally presented as a labeled sum of intervals.
struct ModuleDocument {
    PersistenceModule module{Field::prime(2), 1};
    std::vector<LabeledSummand> summands;

    std::vector<IntervalSupport> supports() const;
    /// Summands that are all rectangles, or nullopt.
    std::optional<std::vector<Rectangle>> rectangles() const;
};

Json summand_to_json(const std::string& label, const IntervalSupport& s);

/**
 * @brief Module plus optional "summands".
 *
 * Without "dims" the module is the sum of the summands; with both, they must agree.
 */
ModuleDocument document_from_json(const Json& j, const Field& default_field);
Json document_to_json(const ModuleDocument& d);

Json hom_to_json(const HomElement& f);
HomElement hom_from_json(const Json& j, const PersistenceModule& source, const PersistenceModule& target);

Json zigzag_to_json(const ZigzagModule& z);
/// Accepts "bars" (interval form) or explicit "dims"/"maps".
ZigzagModule zigzag_from_json(const Json& j, const Field& default_field);

Json path_to_json(const PathSpec& p);
PathSpec path_from_json(const Json& j);

Json params_to_json(const ConstructionParams& p);
ConstructionParams params_from_json(const Json& j);

Json construction_to_json(const LayeredConstruction& c);

Json report_to_json(const RunReport& r);
RunReport report_from_json(const Json& j);

/**
 * @brief Dims per lattice point as a text grid.
 *
 * 1D modules print one row; 2D modules print axis 1 upward. Zero points show '.'.
 * Throws ShapeError for n > 2.
 */
std::string format_grid(const PersistenceModule& m);

/// FNV-1a over the canonical JSON text, as 16 hex digits.
std::string module_digest(const PersistenceModule& m);

}  // namespace pmforge
