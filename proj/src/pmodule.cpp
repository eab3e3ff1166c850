#include "pmforge/pmodule.hpp"

#include <algorithm>
#include <sstream>

namespace pmforge {

LatticePoint LatticePoint::axis(std::size_t n, std::size_t j) {
    LatticePoint p = zero(n);
    p.coords_[j] = 1;
    return p;
}

bool LatticePoint::leq(const LatticePoint& other) const {
    for (std::size_t j = 0; j < coords_.size(); ++j)
        if (coords_[j] > other.coords_[j]) return false;
    return true;
}

LatticePoint LatticePoint::operator+(const LatticePoint& o) const {
    LatticePoint r = *this;
    for (std::size_t j = 0; j < coords_.size(); ++j) r.coords_[j] += o.coords_[j];
    return r;
}

LatticePoint LatticePoint::operator-(const LatticePoint& o) const {
    LatticePoint r = *this;
    for (std::size_t j = 0; j < coords_.size(); ++j) r.coords_[j] -= o.coords_[j];
    return r;
}

LatticePoint LatticePoint::stepped(std::size_t j, int delta) const {
    LatticePoint r = *this;
    r.coords_[j] += delta;
    return r;
}

LatticePoint LatticePoint::extended(int last) const {
    LatticePoint r = *this;
    r.coords_.push_back(last);
    return r;
}

LatticePoint LatticePoint::truncated() const {
    LatticePoint r = *this;
    r.coords_.pop_back();
    return r;
}

bool LatticePoint::nonnegative() const {
    return std::all_of(coords_.begin(), coords_.end(), [](int c) { return c >= 0; });
}

LatticePoint LatticePoint::meet(const LatticePoint& a, const LatticePoint& b) {
    LatticePoint r = a;
    for (std::size_t j = 0; j < r.dim(); ++j) r.coords_[j] = std::min(a[j], b[j]);
    return r;
}

LatticePoint LatticePoint::join(const LatticePoint& a, const LatticePoint& b) {
    LatticePoint r = a;
    for (std::size_t j = 0; j < r.dim(); ++j) r.coords_[j] = std::max(a[j], b[j]);
    return r;
}

std::string LatticePoint::to_string() const {
    std::ostringstream out;
    out << '(';
    for (std::size_t j = 0; j < coords_.size(); ++j) {
        if (j) out << ',';
        out << coords_[j];
    }
    out << ')';
    return out.str();
}

std::ostream& operator<<(std::ostream& out, const LatticePoint& p) { return out << p.to_string(); }

std::size_t Box::volume() const {
    if (empty()) return 0;
    std::size_t v = 1;
    for (std::size_t j = 0; j < lo.dim(); ++j) v *= static_cast<std::size_t>(hi[j] - lo[j] + 1);
    return v;
}

std::vector<LatticePoint> Box::points() const { return grid_points(lo, hi); }

std::vector<LatticePoint> grid_points(const LatticePoint& lo, const LatticePoint& hi) {
    std::vector<LatticePoint> out;
    if (!lo.leq(hi)) return out;
    std::size_t n = lo.dim();
    LatticePoint p = lo;
    if (n == 0) {
        out.push_back(p);
        return out;
    }
    // odometer with the last coordinate fastest gives lexicographic order
    while (true) {
        out.push_back(p);
        std::size_t j = n;
        while (j > 0) {
            --j;
            if (p[j] < hi[j]) {
                ++p[j];
                break;
            }
            p[j] = lo[j];
            if (j == 0) return out;
        }
    }
}

// ---------------------------------------------------------------------------

std::size_t PersistenceModule::dim(const LatticePoint& p) const {
    auto it = dims_.find(p);
    return it == dims_.end() ? 0 : it->second;
}

void PersistenceModule::set_dim(const LatticePoint& p, std::size_t d) {
    if (p.dim() != n_) throw ShapeError("point " + p.to_string() + " has wrong arity");
    if (dim(p) == d) return;
    // incident edges no longer have the right shape
    for (std::size_t j = 0; j < n_; ++j) {
        edges_.erase({p, j});
        edges_.erase({p.stepped(j, -1), j});
    }
    if (d == 0)
        dims_.erase(p);
    else
        dims_[p] = d;
}

Matrix PersistenceModule::edge(const LatticePoint& p, std::size_t j) const {
    auto it = edges_.find({p, j});
    if (it != edges_.end()) return it->second;
    return Matrix(field_, dim(p.stepped(j, 1)), dim(p));
}

void PersistenceModule::set_edge(const LatticePoint& p, std::size_t j, Matrix m) {
    if (j >= n_ || p.dim() != n_) throw ShapeError("edge " + p.to_string() + " axis " + std::to_string(j) + " out of range");
    if (m.field() != field_) throw MismatchError("edge matrix over a different field");
    if (m.rows() != dim(p.stepped(j, 1)) || m.cols() != dim(p))
        throw ShapeError("edge at " + p.to_string() + " axis " + std::to_string(j) + " has shape " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    if (m.is_zero())
        edges_.erase({p, j});
    else
        edges_.insert_or_assign({p, j}, std::move(m));
}

std::vector<LatticePoint> PersistenceModule::support() const {
    std::vector<LatticePoint> out;
    out.reserve(dims_.size());
    for (const auto& [p, d] : dims_) out.push_back(p);
    return out;
}

std::set<LatticePoint> PersistenceModule::support_set() const {
    std::set<LatticePoint> out;
    for (const auto& [p, d] : dims_) out.insert(out.end(), p);
    return out;
}

std::size_t PersistenceModule::total_dim() const {
    std::size_t t = 0;
    for (const auto& [p, d] : dims_) t += d;
    return t;
}

std::optional<Box> PersistenceModule::box() const {
    if (dims_.empty()) return std::nullopt;
    Box b{dims_.begin()->first, dims_.begin()->first};
    for (const auto& [p, d] : dims_) {
        b.lo = LatticePoint::meet(b.lo, p);
        b.hi = LatticePoint::join(b.hi, p);
    }
    return b;
}

bool operator==(const PersistenceModule& a, const PersistenceModule& b) {
    return a.field_ == b.field_ && a.n_ == b.n_ && a.dims_ == b.dims_ && a.edges_ == b.edges_;
}

// ---------------------------------------------------------------------------

std::vector<Violation> validate(const PersistenceModule& m) {
    std::vector<Violation> out;
    const std::size_t n = m.n();
    for (const auto& [p, d] : m.dims()) {
        if (!p.nonnegative())
            out.push_back({Violation::Kind::negative_point, p, 0, 0, "support point " + p.to_string() + " is negative"});
    }
    for (const auto& [key, mat] : m.edges()) {
        const auto& [p, j] = key;
        std::size_t r = m.dim(p.stepped(j, 1)), c = m.dim(p);
        if (mat.rows() != r || mat.cols() != c) {
            std::ostringstream msg;
            msg << "edge at " << p << " axis " << j << " has shape " << mat.rows() << "x" << mat.cols() << ", expected "
                << r << "x" << c;
            out.push_back({Violation::Kind::shape, p, j, j, msg.str()});
            continue;
        }
        for (std::size_t a = 0; a < mat.rows(); ++a)
            for (std::size_t b = 0; b < mat.cols(); ++b)
                if (!m.field().is_valid(mat.at(a, b))) {
                    out.push_back({Violation::Kind::bad_entry, p, j, j,
                                   "edge at " + p.to_string() + " axis " + std::to_string(j) + " has an invalid entry"});
                    a = mat.rows();
                    break;
                }
    }
    auto shape_ok = [&](const LatticePoint& p, std::size_t j) {
        if (!m.has_edge(p, j)) return true;
        const Matrix& e = m.edges().at({p, j});
        return e.rows() == m.dim(p.stepped(j, 1)) && e.cols() == m.dim(p);
    };
    for (const auto& [p, d] : m.dims()) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                LatticePoint pj = p.stepped(j, 1), pk = p.stepped(k, 1), pjk = pj.stepped(k, 1);
                if (m.dim(pjk) == 0) continue;
                if (!shape_ok(p, j) || !shape_ok(p, k) || !shape_ok(pj, k) || !shape_ok(pk, j)) continue;
                Matrix lhs = m.edge(pj, k) * m.edge(p, j);
                Matrix rhs = m.edge(pk, j) * m.edge(p, k);
                if (!(lhs == rhs)) {
                    std::ostringstream msg;
                    msg << "square at " << p << " on axes (" << j << "," << k << ") does not commute";
                    out.push_back({Violation::Kind::commutativity, p, j, k, msg.str()});
                }
            }
        }
    }
    return out;
}

Matrix composite_map(const PersistenceModule& m, const LatticePoint& a, const LatticePoint& b) {
    if (!a.leq(b)) throw OrderError("composite_map: " + a.to_string() + " is not <= " + b.to_string());
    const Field& f = m.field();
    if (m.dim(a) == 0 || m.dim(b) == 0) return Matrix(f, m.dim(b), m.dim(a));
    Matrix acc = Matrix::identity(f, m.dim(a));
    LatticePoint p = a;
    for (std::size_t j = 0; j < m.n(); ++j) {
        while (p[j] < b[j]) {
            if (m.dim(p.stepped(j, 1)) == 0) return Matrix(f, m.dim(b), m.dim(a));
            acc = m.edge(p, j) * acc;
            ++p[j];
        }
    }
    return acc;
}

namespace {

void check_compatible(const PersistenceModule& a, const PersistenceModule& b) {
    if (a.field() != b.field()) throw MismatchError("modules are over different fields");
    if (a.n() != b.n()) throw MismatchError("modules have different ambient dimensions");
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
    Matrix out(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out.set(r, c, a.at(r, c));
    for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) out.set(a.rows() + r, a.cols() + c, b.at(r, c));
    return out;
}

}  // namespace

PersistenceModule direct_sum(const PersistenceModule& a, const PersistenceModule& b) {
    check_compatible(a, b);
    PersistenceModule out(a.field(), a.n());
    std::set<LatticePoint> pts = a.support_set();
    for (const auto& [p, d] : b.dims()) pts.insert(p);
    for (const auto& p : pts) out.set_dim(p, a.dim(p) + b.dim(p));
    for (const auto& p : pts)
        for (std::size_t j = 0; j < a.n(); ++j) {
            LatticePoint q = p.stepped(j, 1);
            if (out.dim(q) == 0) continue;
            out.set_edge(p, j, block_diag(a.edge(p, j), b.edge(p, j)));
        }
    return out;
}

PersistenceModule restrict_hyperplane(const PersistenceModule& m, int value) {
    if (m.n() < 1) throw ShapeError("cannot restrict a 0-dimensional module");
    const std::size_t last = m.n() - 1;
    PersistenceModule out(m.field(), last);
    for (const auto& [p, d] : m.dims())
        if (p[last] == value) out.set_dim(p.truncated(), d);
    for (const auto& [key, mat] : m.edges()) {
        const auto& [p, j] = key;
        if (j == last || p[last] != value) continue;
        out.set_edge(p.truncated(), j, mat);
    }
    return out;
}

PersistenceModule shift(const PersistenceModule& m, const std::vector<int>& offset) {
    if (offset.size() != m.n()) throw ShapeError("shift offset has wrong arity");
    LatticePoint off(offset);
    PersistenceModule out(m.field(), m.n());
    for (const auto& [p, d] : m.dims()) {
        LatticePoint q = p + off;
        if (!q.nonnegative()) throw OrderError("shift moves " + p.to_string() + " to negative " + q.to_string());
        out.set_dim(q, d);
    }
    for (const auto& [key, mat] : m.edges()) out.set_edge(key.first + off, key.second, mat);
    return out;
}

namespace {

PersistenceModule translate_unchecked(const PersistenceModule& m, const LatticePoint& off) {
    PersistenceModule out(m.field(), m.n());
    for (const auto& [p, d] : m.dims()) out.set_dim(p + off, d);
    for (const auto& [key, mat] : m.edges()) out.set_edge(key.first + off, key.second, mat);
    return out;
}

}  // namespace

bool equal_up_to_translation(const PersistenceModule& a, const PersistenceModule& b) {
    if (a.field() != b.field() || a.n() != b.n()) return false;
    auto ba = a.box(), bb = b.box();
    if (!ba || !bb) return !ba && !bb;
    LatticePoint z = LatticePoint::zero(a.n());
    return translate_unchecked(a, z - ba->lo) == translate_unchecked(b, z - bb->lo);
}

// ---------------------------------------------------------------------------

Matrix HomElement::block(const Field& field, const LatticePoint& p, std::size_t rows, std::size_t cols) const {
    auto it = blocks.find(p);
    if (it != blocks.end()) return it->second;
    return Matrix(field, rows, cols);
}

bool HomElement::is_zero() const {
    return std::all_of(blocks.begin(), blocks.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

std::optional<std::string> check_homomorphism(const HomElement& f, const PersistenceModule& m,
                                              const PersistenceModule& n) {
    if (m.field() != n.field() || m.n() != n.n()) return "source and target are incompatible";
    const Field& fld = m.field();
    for (const auto& [p, blk] : f.blocks) {
        if (blk.rows() != n.dim(p) || blk.cols() != m.dim(p)) {
            std::ostringstream msg;
            msg << "block at " << p << " has shape " << blk.rows() << "x" << blk.cols() << ", expected " << n.dim(p)
                << "x" << m.dim(p);
            return msg.str();
        }
    }
    for (const auto& [p, d] : m.dims()) {
        Matrix fp = f.block(fld, p, n.dim(p), d);
        for (std::size_t j = 0; j < m.n(); ++j) {
            LatticePoint q = p.stepped(j, 1);
            if (n.dim(q) == 0) continue;
            Matrix lhs = n.edge(p, j) * fp;
            Matrix rhs = f.block(fld, q, n.dim(q), m.dim(q)) * m.edge(p, j);
            if (!(lhs == rhs)) {
                std::ostringstream msg;
                msg << "fails to commute with the edge at " << p << " along axis " << j;
                return msg.str();
            }
        }
    }
    return std::nullopt;
}

HomElement identity_hom(const PersistenceModule& m) {
    HomElement out;
    for (const auto& [p, d] : m.dims()) out.blocks.emplace(p, Matrix::identity(m.field(), d));
    return out;
}

HomElement compose_blocks(const HomElement& f, const HomElement& g, const PersistenceModule& source,
                          const PersistenceModule& middle, const PersistenceModule& target) {
    check_compatible(source, middle);
    check_compatible(middle, target);
    HomElement out;
    const Field& fld = source.field();
    for (const auto& [p, gp] : g.blocks) {
        auto it = f.blocks.find(p);
        if (it == f.blocks.end()) continue;
        if (it->second.cols() != gp.rows() || gp.rows() != middle.dim(p))
            throw MismatchError("composition: blocks at " + p.to_string() + " do not chain");
        Matrix prod = it->second * gp;
        if (prod.rows() != target.dim(p) || prod.cols() != source.dim(p))
            throw MismatchError("composition: result at " + p.to_string() + " has the wrong shape");
        if (!prod.is_zero()) out.blocks.emplace(p, std::move(prod));
    }
    (void)fld;
    return out;
}

PersistenceModule stack_layers(const std::vector<PersistenceModule>& layers, const std::vector<HomElement>& layer_maps) {
    if (layers.empty()) throw ShapeError("stack_layers: no layers");
    if (layer_maps.size() + 1 != layers.size())
        throw ShapeError("stack_layers: expected " + std::to_string(layers.size() - 1) + " layer maps");
    const Field& fld = layers[0].field();
    const std::size_t n = layers[0].n();
    for (const auto& l : layers) check_compatible(layers[0], l);
    for (std::size_t i = 0; i < layer_maps.size(); ++i) {
        if (auto err = check_homomorphism(layer_maps[i], layers[i], layers[i + 1]))
            throw HomomorphismError("layer map " + std::to_string(i) + " -> " + std::to_string(i + 1) + ": " + *err);
    }
    PersistenceModule out(fld, n + 1);
    for (std::size_t i = 0; i < layers.size(); ++i)
        for (const auto& [p, d] : layers[i].dims()) out.set_dim(p.extended(static_cast<int>(i)), d);
    for (std::size_t i = 0; i < layers.size(); ++i)
        for (const auto& [key, mat] : layers[i].edges())
            out.set_edge(key.first.extended(static_cast<int>(i)), key.second, mat);
    for (std::size_t i = 0; i < layer_maps.size(); ++i)
        for (const auto& [p, blk] : layer_maps[i].blocks) {
            if (blk.rows() == 0 || blk.cols() == 0) continue;
            out.set_edge(p.extended(static_cast<int>(i)), n, blk);
        }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<Generator> compute_generators(const PersistenceModule& m) {
    std::vector<Generator> out;
    const Field& f = m.field();
    for (const auto& [p, d] : m.dims()) {
        RowEchelon image(f, d);
        for (std::size_t j = 0; j < m.n() && image.rank() < d; ++j) {
            LatticePoint q = p.stepped(j, -1);
            if (m.dim(q) == 0) continue;
            Matrix e = m.edge(q, j);
            for (std::size_t c = 0; c < e.cols() && image.rank() < d; ++c) image.insert(e.col(c));
        }
        for (std::size_t i = 0; i < d && image.rank() < d; ++i) {
            Vector v(d, f.zero());
            v[i] = f.one();
            if (image.insert(v)) out.push_back({p, std::move(v)});
        }
    }
    return out;
}

bool generates(const PersistenceModule& m, const std::vector<Generator>& gens) {
    const Field& f = m.field();
    std::map<LatticePoint, std::vector<Vector>> span;
    for (const auto& [p, d] : m.dims()) {
        RowEchelon basis(f, d);
        for (std::size_t j = 0; j < m.n(); ++j) {
            LatticePoint q = p.stepped(j, -1);
            auto it = span.find(q);
            if (it == span.end()) continue;
            Matrix e = m.edge(q, j);
            for (const auto& v : it->second) basis.insert(e.apply(v));
        }
        for (const auto& g : gens)
            if (g.grade == p) {
                if (g.vector.size() != d) return false;
                basis.insert(g.vector);
            }
        if (basis.rank() != d) return false;
        span.emplace(p, basis.rows());
    }
    return true;
}

}  // namespace pmforge
