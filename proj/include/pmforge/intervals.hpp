// intervals.hpp
//
// Interval supports: order-convexity, intersection components and their
// viability, Hom dimensions between interval modules, envelopes.

#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pmforge/pmodule.hpp"

namespace pmforge {

struct Rectangle {
    LatticePoint lo;
    LatticePoint hi;

    bool contains(const LatticePoint& p) const { return lo.leq(p) && p.leq(hi); }
    friend bool operator==(const Rectangle&, const Rectangle&) = default;
    friend auto operator<=>(const Rectangle&, const Rectangle&) = default;
};

struct IntervalCheck;

/// Finite, edge-connected, order-convex set of lattice points. Only produced by check_interval and friends.
class IntervalSupport {
public:
    static IntervalSupport rectangle(const Rectangle& r);

    const std::set<LatticePoint>& points() const { return points_; }
    bool contains(const LatticePoint& p) const { return points_.count(p) > 0; }
    std::size_t size() const { return points_.size(); }
    std::size_t n() const { return points_.begin()->dim(); }
    Box box() const;

    friend bool operator==(const IntervalSupport&, const IntervalSupport&) = default;

private:
    explicit IntervalSupport(std::set<LatticePoint> pts) : points_(std::move(pts)) {}
    std::set<LatticePoint> points_;

    friend IntervalCheck check_interval(const std::set<LatticePoint>& s);
};

struct IntervalCheck {
    std::optional<IntervalSupport> support;
    /// Human-readable reason when support is empty.
    std::string reason;
    /// For order-convexity failures: a <= g <= b with a, b inside and g outside.
    std::optional<std::vector<LatticePoint>> witness;

    explicit operator bool() const { return support.has_value(); }
};

IntervalCheck check_interval(const std::set<LatticePoint>& s);

/// check_interval, throwing ConstructionError on failure.
IntervalSupport require_interval(const std::set<LatticePoint>& s, const std::string& what);

enum class WitnessSide { m_side, n_side };

struct ViabilityWitness {
    LatticePoint beta;
    LatticePoint alpha;
    WitnessSide side;

    friend bool operator==(const ViabilityWitness&, const ViabilityWitness&) = default;
};

struct Component {
    std::set<LatticePoint> points;
    bool viable = true;
    std::optional<ViabilityWitness> witness;
};

struct ComponentReport {
    /// Ordered by each component's lexicographically smallest point.
    std::vector<Component> components;

    std::size_t viable_count() const;
};

/**
 * @brief Components of Supp(a) n Supp(b) with viability flags.
 *
 * A component C is non-viable if some beta in a\b lies strictly below some alpha in C
 * (a-side), or some beta in b\a lies strictly above some alpha in C (b-side). For
 * interval supports a witness can always be taken with beta a lattice neighbour of
 * alpha, so only neighbours are scanned; the reported witness is the first hit
 * visiting C in lexicographic order, axes in order, a-side before b-side.
 */
ComponentReport intersect_components(const IntervalSupport& a, const IntervalSupport& b);

/// Quadratic scan over all (beta, alpha) pairs; kept as a reference.
ComponentReport intersect_components_bruteforce(const IntervalSupport& a, const IntervalSupport& b);

/// Number of viable components of the intersection.
std::size_t hom_dim_intervals(const IntervalSupport& a, const IntervalSupport& b);

/// Hom(K[r1], K[r2]) != 0 iff r2.lo <= r1.lo <= r2.hi <= r1.hi.
bool rectangle_hom_exists(const Rectangle& from, const Rectangle& to);

/// The hom equal to 1 on one viable component and 0 elsewhere; throws ConstructionError otherwise.
HomElement canonical_hom(const IntervalSupport& a, const IntervalSupport& b, std::size_t component_index,
                         const Field& field);

/// Canonical hom between rectangles; zero if no hom exists.
HomElement canonical_rect_hom(const Rectangle& from, const Rectangle& to, const Field& field);

std::vector<LatticePoint> minimal_elements(const IntervalSupport& s);
std::vector<LatticePoint> maximal_elements(const IntervalSupport& s);

struct Envelope {
    IntervalSupport support;
    LatticePoint corner;
};

/// {g : a <= g <= beta for some a in s}, beta the coordinatewise maximum of s.
Envelope upper_envelope(const IntervalSupport& s);
/// {g : alpha <= g <= b for some b in s}, alpha the coordinatewise minimum of s.
Envelope lower_envelope(const IntervalSupport& s);

PersistenceModule interval_module(const IntervalSupport& s, const Field& field);
PersistenceModule rectangle_module(const Rectangle& r, const Field& field);

/**
 * @brief Direct sum of interval modules.
 *
 * At each point the basis lists the summands containing that point, in summand order.
 */
PersistenceModule interval_sum(const std::vector<IntervalSupport>& summands, const Field& field, std::size_t n);

/**
 * @brief Map between two interval sums given by a scalar per summand pair.
 *
 * coeffs[r][c] scales the canonical hom from summand c of the source to summand r
 * of the target (1 on every viable component of their intersection). Pairs with no
 * viable component contribute nothing.
 */
HomElement interval_sum_map(const std::vector<IntervalSupport>& from, const std::vector<IntervalSupport>& to,
                            const std::vector<std::vector<Scalar>>& coeffs, const Field& field);

/// Support of m if m is literally an interval module: dims 1, every internal edge [1], interval support.
std::optional<IntervalSupport> interval_support_of(const PersistenceModule& m);

}  // namespace pmforge
