// exactfield.hpp
//
// Exact scalars and dense matrices over GF(p) or the rationals.

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "pmforge/errors.hpp"

namespace pmforge {

/**
 * @brief A field element.
 *
 * Prime-field elements are stored as canonical representatives in [0, p) with den == 1;
 * rationals are stored reduced with a positive denominator. Equality is therefore
 * member-wise.
 */
struct Scalar {
    std::int64_t num = 0;
    std::int64_t den = 1;

    friend bool operator==(const Scalar&, const Scalar&) = default;
};

using Vector = std::vector<Scalar>;

class Field {
public:
    enum class Kind { prime, rational };

    /// Throws std::invalid_argument unless p is a prime below 2^31.
    static Field prime(std::int64_t p);
    static Field rational();

    Kind kind() const { return kind_; }
    bool is_prime() const { return kind_ == Kind::prime; }
    /// p for GF(p), 0 for the rationals.
    std::int64_t characteristic() const { return p_; }

    Scalar zero() const { return {0, 1}; }
    Scalar one() const { return {1, 1}; }
    Scalar from_int(std::int64_t v) const;
    Scalar from_fraction(std::int64_t num, std::int64_t den) const;

    Scalar add(Scalar a, Scalar b) const;
    Scalar sub(Scalar a, Scalar b) const;
    Scalar mul(Scalar a, Scalar b) const;
    Scalar neg(Scalar a) const;
    /// Throws std::domain_error on zero.
    Scalar inv(Scalar a) const;
    Scalar div(Scalar a, Scalar b) const { return mul(a, inv(b)); }

    static bool is_zero(Scalar a) { return a.num == 0; }
    bool is_valid(Scalar a) const;

    /// Integers for GF(p), "num/den" (or "num") for rationals.
    std::string format(Scalar a) const;
    /// Accepts an integer, or "num/den" text; integers are reduced mod p.
    Scalar parse(const std::string& text) const;

    std::string name() const;

    friend bool operator==(const Field&, const Field&) = default;

private:
    Field(Kind kind, std::int64_t p) : kind_(kind), p_(p) {}

    Kind kind_;
    std::int64_t p_;
};

bool is_prime_number(std::int64_t p);

/// Dense row-major matrix over a runtime-chosen field.
class Matrix {
public:
    Matrix(Field field, std::size_t rows, std::size_t cols);

    static Matrix zero(Field field, std::size_t rows, std::size_t cols) { return Matrix(field, rows, cols); }
    static Matrix identity(Field field, std::size_t n);
    /// Entries are mapped through Field::from_int.
    static Matrix from_ints(Field field, std::initializer_list<std::initializer_list<std::int64_t>> rows);
    static Matrix from_rows(Field field, const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols);
    static Matrix column(Field field, const Vector& v);

    const Field& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Scalar at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, Scalar v) { data_[r * cols_ + c] = v; }
    void set_int(std::size_t r, std::size_t c, std::int64_t v) { set(r, c, field_.from_int(v)); }

    Vector row(std::size_t r) const;
    Vector col(std::size_t c) const;

    Matrix operator*(const Matrix& other) const;
    Vector apply(const Vector& v) const;
    Matrix operator+(const Matrix& other) const;
    Matrix scaled(Scalar s) const;
    Matrix transpose() const;

    /// Rows/cols picked by index, in the given order.
    Matrix select(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;

    bool is_zero() const;
    bool is_identity() const;
    std::size_t nonzeros() const;

    friend bool operator==(const Matrix& a, const Matrix& b);

    std::string to_string() const;

private:
    Field field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Scalar> data_;
};

/// Naive product kept separate from the sparse-aware operator* for cross-checking.
Matrix naive_multiply(const Matrix& a, const Matrix& b);

std::size_t rank(const Matrix& a);

/// Basis of {x : a x = 0}; cols - rank(a) vectors.
std::vector<Vector> nullspace_basis(const Matrix& a);

/// Some x with a x = b, or nullopt when the system is inconsistent.
std::optional<Vector> solve(const Matrix& a, const Vector& b);

/// Inverse of a square matrix, or nullopt when singular.
std::optional<Matrix> inverse(const Matrix& a);

/// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> row_reduce(Matrix& a);

/**
 * @brief Incrementally built reduced echelon basis of a row space.
 *
 * Rows are kept fully reduced against each other, so membership tests and
 * nullspace extraction need no further elimination.
 */
class RowEchelon {
public:
    RowEchelon(Field field, std::size_t width) : field_(field), width_(width) {}

    /// Reduces v against the basis; returns true if it was independent (and is now included).
    bool insert(Vector v);
    /// True if v lies in the row space.
    bool contains(Vector v) const;
    /// Reduces v in place against the basis; v becomes zero iff it was in the span.
    void reduce(Vector& v) const;

    std::size_t rank() const { return rows_.size(); }
    std::size_t width() const { return width_; }
    const std::vector<Vector>& rows() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    /// Basis of the common kernel of all inserted rows.
    std::vector<Vector> kernel() const;

private:
    Field field_;
    std::size_t width_;
    std::vector<Vector> rows_;
    std::vector<std::size_t> pivots_;
};

}  // namespace pmforge
