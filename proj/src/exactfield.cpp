#include "pmforge/exactfield.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pmforge {

namespace {

using i128 = __int128;

std::int64_t checked(i128 v) {
    if (v > INT64_MAX || v < -INT64_MAX) {
        throw ArithmeticOverflow("rational entry exceeds 64-bit range");
    }
    return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Scalar make_rational(i128 num, i128 den) {
    if (den == 0) throw std::domain_error("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (num == 0) return {0, 1};
    i128 g = gcd128(num, den);
    return {checked(num / g), checked(den / g)};
}

std::int64_t mod(std::int64_t v, std::int64_t p) {
    std::int64_t r = v % p;
    return r < 0 ? r + p : r;
}

std::int64_t pow_mod(std::int64_t base, std::int64_t e, std::int64_t p) {
    std::int64_t result = 1;
    base = mod(base, p);
    while (e > 0) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return result;
}

}  // namespace

bool is_prime_number(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return true;
}

Field Field::prime(std::int64_t p) {
    if (p >= (std::int64_t{1} << 31) || !is_prime_number(p)) {
        throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not a prime below 2^31");
    }
    return Field(Kind::prime, p);
}

Field Field::rational() { return Field(Kind::rational, 0); }

Scalar Field::from_int(std::int64_t v) const {
    if (is_prime()) return {mod(v, p_), 1};
    return {v, 1};
}

Scalar Field::from_fraction(std::int64_t num, std::int64_t den) const {
    if (den == 0) throw std::domain_error("zero denominator");
    if (is_prime()) return div(from_int(num), from_int(den));
    return make_rational(num, den);
}

Scalar Field::add(Scalar a, Scalar b) const {
    if (is_prime()) {
        std::int64_t s = a.num + b.num;
        return {s >= p_ ? s - p_ : s, 1};
    }
    if (a.den == 1 && b.den == 1) return {checked(i128(a.num) + b.num), 1};
    return make_rational(i128(a.num) * b.den + i128(b.num) * a.den, i128(a.den) * b.den);
}

Scalar Field::sub(Scalar a, Scalar b) const { return add(a, neg(b)); }

Scalar Field::mul(Scalar a, Scalar b) const {
    if (is_prime()) return {a.num * b.num % p_, 1};
    if (a.num == 0 || b.num == 0) return {0, 1};
    if (a.den == 1 && b.den == 1) return {checked(i128(a.num) * b.num), 1};
    return make_rational(i128(a.num) * b.num, i128(a.den) * b.den);
}

Scalar Field::neg(Scalar a) const {
    if (is_prime()) return {a.num == 0 ? 0 : p_ - a.num, 1};
    return {-a.num, a.den};
}

Scalar Field::inv(Scalar a) const {
    if (a.num == 0) throw std::domain_error("inverse of zero");
    if (is_prime()) return {pow_mod(a.num, p_ - 2, p_), 1};
    return make_rational(a.den, a.num);
}

bool Field::is_valid(Scalar a) const {
    if (is_prime()) return a.den == 1 && a.num >= 0 && a.num < p_;
    if (a.den <= 0) return false;
    if (a.num == 0) return a.den == 1;
    return std::gcd(a.num < 0 ? -a.num : a.num, a.den) == 1;
}

std::string Field::format(Scalar a) const {
    if (is_prime() || a.den == 1) return std::to_string(a.num);
    return std::to_string(a.num) + "/" + std::to_string(a.den);
}

Scalar Field::parse(const std::string& text) const {
    try {
        auto slash = text.find('/');
        if (slash == std::string::npos) {
            std::size_t used = 0;
            std::int64_t v = std::stoll(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return from_int(v);
        }
        std::size_t used_n = 0, used_d = 0;
        std::string ns = text.substr(0, slash), ds = text.substr(slash + 1);
        std::int64_t n = std::stoll(ns, &used_n);
        std::int64_t d = std::stoll(ds, &used_d);
        if (used_n != ns.size() || used_d != ds.size()) throw std::invalid_argument(text);
        return from_fraction(n, d);
    } catch (const std::logic_error&) {
        throw ParseError("cannot parse field element '" + text + "'");
    }
}

std::string Field::name() const {
    if (is_prime()) return "GF(" + std::to_string(p_) + ")";
    return "Q";
}

// ---------------------------------------------------------------------------

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, Scalar{}) {}

Matrix Matrix::identity(Field field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, field.one());
    return m;
}

Matrix Matrix::from_ints(Field field, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(field, r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw ShapeError("ragged matrix literal");
        std::size_t j = 0;
        for (auto v : row) m.set_int(i, j++, v);
        ++i;
    }
    return m;
}

Matrix Matrix::from_rows(Field field, const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols) {
    Matrix m(field, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw ShapeError("ragged matrix rows");
        for (std::size_t j = 0; j < cols; ++j) m.set_int(i, j, rows[i][j]);
    }
    return m;
}

Matrix Matrix::column(Field field, const Vector& v) {
    Matrix m(field, v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m.set(i, 0, v[i]);
    return m;
}

Vector Matrix::row(std::size_t r) const {
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vector Matrix::col(std::size_t c) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, c);
    return v;
}

Matrix Matrix::operator*(const Matrix& other) const {
    if (cols_ != other.rows_) {
        throw ShapeError("matrix product " + std::to_string(rows_) + "x" + std::to_string(cols_) + " * " +
                         std::to_string(other.rows_) + "x" + std::to_string(other.cols_));
    }
    if (!(field_ == other.field_)) throw MismatchError("matrix product over different fields");
    Matrix out(field_, rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t l = 0; l < cols_; ++l) {
            Scalar a = at(i, l);
            if (a.num == 0) continue;
            for (std::size_t j = 0; j < other.cols_; ++j) {
                Scalar b = other.at(l, j);
                if (b.num == 0) continue;
                Scalar& c = out.data_[i * out.cols_ + j];
                c = field_.add(c, field_.mul(a, b));
            }
        }
    }
    return out;
}

Vector Matrix::apply(const Vector& v) const {
    if (v.size() != cols_) throw ShapeError("matrix-vector shape mismatch");
    Vector out(rows_, field_.zero());
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            Scalar a = at(i, j);
            if (a.num == 0 || v[j].num == 0) continue;
            out[i] = field_.add(out[i], field_.mul(a, v[j]));
        }
    }
    return out;
}

Matrix Matrix::operator+(const Matrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeError("matrix sum shape mismatch");
    Matrix out(field_, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = field_.add(data_[k], other.data_[k]);
    return out;
}

Matrix Matrix::scaled(Scalar s) const {
    Matrix out(field_, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = field_.mul(data_[k], s);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.set(j, i, at(i, j));
    return out;
}

Matrix Matrix::select(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
    Matrix out(field_, rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out.set(i, j, at(rows[i], cols[j]));
    return out;
}

bool Matrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Scalar s) { return s.num == 0; });
}

bool Matrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (at(i, j) != (i == j ? field_.one() : field_.zero())) return false;
    return true;
}

std::size_t Matrix::nonzeros() const {
    return static_cast<std::size_t>(std::count_if(data_.begin(), data_.end(), [](Scalar s) { return s.num != 0; }));
}

bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string Matrix::to_string() const {
    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        out << (i ? ", [" : "[");
        for (std::size_t j = 0; j < cols_; ++j) out << (j ? ", " : "") << field_.format(at(i, j));
        out << "]";
    }
    out << "]";
    return out.str();
}

Matrix naive_multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("naive product shape mismatch");
    const Field& f = a.field();
    Matrix out(f, a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            Scalar acc = f.zero();
            for (std::size_t l = 0; l < a.cols(); ++l) acc = f.add(acc, f.mul(a.at(i, l), b.at(l, j)));
            out.set(i, j, acc);
        }
    }
    return out;
}

std::vector<std::size_t> row_reduce(Matrix& a) {
    const Field& f = a.field();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && f.is_zero(a.at(p, c))) ++p;
        if (p == a.rows()) continue;
        if (p != r) {
            for (std::size_t j = 0; j < a.cols(); ++j) {
                Scalar t = a.at(r, j);
                a.set(r, j, a.at(p, j));
                a.set(p, j, t);
            }
        }
        Scalar piv_inv = f.inv(a.at(r, c));
        for (std::size_t j = c; j < a.cols(); ++j) a.set(r, j, f.mul(a.at(r, j), piv_inv));
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r) continue;
            Scalar factor = a.at(i, c);
            if (f.is_zero(factor)) continue;
            for (std::size_t j = c; j < a.cols(); ++j) {
                Scalar rv = a.at(r, j);
                if (rv.num == 0) continue;
                a.set(i, j, f.sub(a.at(i, j), f.mul(factor, rv)));
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::size_t rank(const Matrix& a) {
    Matrix copy = a;
    return row_reduce(copy).size();
}

std::vector<Vector> nullspace_basis(const Matrix& a) {
    Matrix reduced = a;
    auto pivots = row_reduce(reduced);
    const Field& f = a.field();
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<Vector> basis;
    for (std::size_t free = 0; free < a.cols(); ++free) {
        if (is_pivot[free]) continue;
        Vector v(a.cols(), f.zero());
        v[free] = f.one();
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = f.neg(reduced.at(r, free));
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Vector> solve(const Matrix& a, const Vector& b) {
    if (b.size() != a.rows()) throw ShapeError("solve: right-hand side length mismatch");
    const Field& f = a.field();
    Matrix aug(f, a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug.set(i, j, a.at(i, j));
        aug.set(i, a.cols(), b[i]);
    }
    auto pivots = row_reduce(aug);
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
    Vector x(a.cols(), f.zero());
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, a.cols());
    return x;
}

std::optional<Matrix> inverse(const Matrix& a) {
    if (a.rows() != a.cols()) throw ShapeError("inverse of a non-square matrix");
    const std::size_t n = a.rows();
    const Field& f = a.field();
    Matrix aug(f, n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.set(i, j, a.at(i, j));
        aug.set(i, n + i, f.one());
    }
    auto pivots = row_reduce(aug);
    if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1)) return std::nullopt;
    Matrix out(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.set(i, j, aug.at(i, n + j));
    return out;
}

// ---------------------------------------------------------------------------

void RowEchelon::reduce(Vector& v) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        Scalar factor = v[pivots_[k]];
        if (factor.num == 0) continue;
        const Vector& row = rows_[k];
        for (std::size_t j = 0; j < width_; ++j) {
            if (row[j].num == 0) continue;
            v[j] = field_.sub(v[j], field_.mul(factor, row[j]));
        }
    }
}

bool RowEchelon::contains(Vector v) const {
    reduce(v);
    return std::all_of(v.begin(), v.end(), [](Scalar s) { return s.num == 0; });
}

bool RowEchelon::insert(Vector v) {
    if (v.size() != width_) throw ShapeError("RowEchelon: row width mismatch");
    reduce(v);
    std::size_t p = 0;
    while (p < width_ && v[p].num == 0) ++p;
    if (p == width_) return false;
    Scalar inv = field_.inv(v[p]);
    for (auto& s : v) s = field_.mul(s, inv);
    // keep existing rows reduced with respect to the new pivot
    for (auto& row : rows_) {
        Scalar factor = row[p];
        if (factor.num == 0) continue;
        for (std::size_t j = 0; j < width_; ++j) {
            if (v[j].num == 0) continue;
            row[j] = field_.sub(row[j], field_.mul(factor, v[j]));
        }
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p);
    auto idx = pos - pivots_.begin();
    pivots_.insert(pos, p);
    rows_.insert(rows_.begin() + idx, std::move(v));
    return true;
}

std::vector<Vector> RowEchelon::kernel() const {
    std::vector<bool> is_pivot(width_, false);
    for (auto p : pivots_) is_pivot[p] = true;
    std::vector<Vector> basis;
    for (std::size_t free = 0; free < width_; ++free) {
        if (is_pivot[free]) continue;
        Vector v(width_, field_.zero());
        v[free] = field_.one();
        for (std::size_t k = 0; k < rows_.size(); ++k) v[pivots_[k]] = field_.neg(rows_[k][free]);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace pmforge
