// pmodule.hpp
//
// Finite n-dimensional persistence modules over a grid of lattice points.

#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pmforge/exactfield.hpp"

namespace pmforge {

/**
 * @brief A point of Z^n with the product partial order.
 *
 * Modules only ever hold nonnegative points; negative coordinates are allowed in
 * intermediate computations (e.g. before a construction is shifted into N^n).
 * The total order (operator<=>) is lexicographic and is only used for containers.
 */
class LatticePoint {
public:
    LatticePoint() = default;
    explicit LatticePoint(std::vector<int> coords) : coords_(std::move(coords)) {}
    LatticePoint(std::initializer_list<int> coords) : coords_(coords) {}

    static LatticePoint zero(std::size_t n) { return LatticePoint(std::vector<int>(n, 0)); }
    /// The standard basis vector e_j.
    static LatticePoint axis(std::size_t n, std::size_t j);
    static LatticePoint constant(std::size_t n, int v) { return LatticePoint(std::vector<int>(n, v)); }

    std::size_t dim() const { return coords_.size(); }
    int operator[](std::size_t j) const { return coords_[j]; }
    int& operator[](std::size_t j) { return coords_[j]; }
    const std::vector<int>& coords() const { return coords_; }

    /// Product order: coordinatewise <=.
    bool leq(const LatticePoint& other) const;
    /// leq and not equal.
    bool less(const LatticePoint& other) const { return leq(other) && *this != other; }
    bool comparable(const LatticePoint& other) const { return leq(other) || other.leq(*this); }

    LatticePoint operator+(const LatticePoint& o) const;
    LatticePoint operator-(const LatticePoint& o) const;
    LatticePoint stepped(std::size_t j, int delta) const;
    /// Appends one trailing coordinate.
    LatticePoint extended(int last) const;
    /// Drops the trailing coordinate.
    LatticePoint truncated() const;

    bool nonnegative() const;

    static LatticePoint meet(const LatticePoint& a, const LatticePoint& b);
    static LatticePoint join(const LatticePoint& a, const LatticePoint& b);

    friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;

    std::string to_string() const;

private:
    std::vector<int> coords_;
};

std::ostream& operator<<(std::ostream& out, const LatticePoint& p);

/// Inclusive axis-aligned box [lo, hi].
struct Box {
    LatticePoint lo;
    LatticePoint hi;

    bool contains(const LatticePoint& p) const { return lo.leq(p) && p.leq(hi); }
    bool empty() const { return !lo.leq(hi); }
    std::size_t volume() const;
    /// All points of the box in lexicographic order.
    std::vector<LatticePoint> points() const;
};

/// Graded family of matrices; absent grades are zero blocks.
using GradedMatrices = std::map<LatticePoint, Matrix>;

class PersistenceModule {
public:
    PersistenceModule(Field field, std::size_t n) : field_(field), n_(n) {}

    const Field& field() const { return field_; }
    std::size_t n() const { return n_; }

    std::size_t dim(const LatticePoint& p) const;
    /// Changing a dimension drops the edges touching the point; 0 removes the point.
    void set_dim(const LatticePoint& p, std::size_t d);

    /// Structure map along axis j out of p, shape dim(p+e_j) x dim(p). Absent edges are zero.
    Matrix edge(const LatticePoint& p, std::size_t j) const;
    bool has_edge(const LatticePoint& p, std::size_t j) const { return edges_.count({p, j}) > 0; }
    /// Throws ShapeError if the matrix shape disagrees with the dimensions at either end.
    /// Zero matrices are not stored.
    void set_edge(const LatticePoint& p, std::size_t j, Matrix m);

    const std::map<LatticePoint, std::size_t>& dims() const { return dims_; }
    const std::map<std::pair<LatticePoint, std::size_t>, Matrix>& edges() const { return edges_; }

    std::vector<LatticePoint> support() const;
    std::set<LatticePoint> support_set() const;
    bool is_zero() const { return dims_.empty(); }
    std::size_t total_dim() const;
    /// Bounding box of the support; nullopt for the zero module.
    std::optional<Box> box() const;

    friend bool operator==(const PersistenceModule& a, const PersistenceModule& b);

private:
    Field field_;
    std::size_t n_;
    std::map<LatticePoint, std::size_t> dims_;
    std::map<std::pair<LatticePoint, std::size_t>, Matrix> edges_;
};

/// One failed shape or commutativity check.
struct Violation {
    enum class Kind { shape, commutativity, negative_point, bad_entry };
    Kind kind;
    LatticePoint point;
    std::size_t axis_j = 0;
    std::size_t axis_k = 0;
    std::string message;
};

std::vector<Violation> validate(const PersistenceModule& m);

/// Map M_a -> M_b along a monotone staircase; throws OrderError unless a <= b.
Matrix composite_map(const PersistenceModule& m, const LatticePoint& a, const LatticePoint& b);

PersistenceModule direct_sum(const PersistenceModule& a, const PersistenceModule& b);

/// Restriction to the hyperplane where the last coordinate equals value.
PersistenceModule restrict_hyperplane(const PersistenceModule& m, int value);

/// Translate by offset; throws OrderError if a support point would leave N^n.
PersistenceModule shift(const PersistenceModule& m, const std::vector<int>& offset);

/// Equality after translating both modules so that their bounding boxes start at 0.
bool equal_up_to_translation(const PersistenceModule& a, const PersistenceModule& b);

/**
 * @brief A graded family f_a : M_a -> N_a.
 *
 * Blocks are stored only where both M_a and N_a are nonzero; an absent block is zero.
 */
struct HomElement {
    GradedMatrices blocks;

    /// Block at p, materialising zero blocks with the given shape.
    Matrix block(const Field& field, const LatticePoint& p, std::size_t rows, std::size_t cols) const;
    bool is_zero() const;

    friend bool operator==(const HomElement& a, const HomElement& b) = default;
};

/// Describes the first failing condition, or nullopt if f is a homomorphism M -> N.
std::optional<std::string> check_homomorphism(const HomElement& f, const PersistenceModule& m,
                                              const PersistenceModule& n);

HomElement identity_hom(const PersistenceModule& m);

/// Pointwise composite f o g (apply g first).
HomElement compose_blocks(const HomElement& f, const HomElement& g, const PersistenceModule& source,
                          const PersistenceModule& middle, const PersistenceModule& target);

/**
 * @brief Stacks n-dimensional layers into an (n+1)-dimensional module.
 *
 * layer_maps[i] is the homomorphism from layers[i] to layers[i+1]; it becomes the
 * edges along the new last axis. Throws HomomorphismError naming the first edge
 * at which a layer map fails to commute.
 */
PersistenceModule stack_layers(const std::vector<PersistenceModule>& layers, const std::vector<HomElement>& layer_maps);

/// A homogeneous generator: a vector in M at a grade.
struct Generator {
    LatticePoint grade;
    Vector vector;
};

/**
 * @brief Minimal homogeneous generating set.
 *
 * Grades are visited in lexicographic order (a linear extension of the product
 * order); at each grade a basis of M_a modulo the images of incoming edges is
 * lifted to generators.
 */
std::vector<Generator> compute_generators(const PersistenceModule& m);

/// True if the generators' images span every graded piece of m.
bool generates(const PersistenceModule& m, const std::vector<Generator>& gens);

/// Every point of the box [lo, hi] containing all supports, in lexicographic order.
std::vector<LatticePoint> grid_points(const LatticePoint& lo, const LatticePoint& hi);

}  // namespace pmforge
