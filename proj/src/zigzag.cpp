#include "pmforge/zigzag.hpp"

#include <algorithm>
#include <map>

namespace pmforge {

std::vector<Orientation> parse_orientations(const std::string& text) {
    std::vector<Orientation> out;
    for (char c : text) {
        if (c == 'f' || c == 'F')
            out.push_back(Orientation::forward);
        else if (c == 'b' || c == 'B')
            out.push_back(Orientation::backward);
        else
            throw ParseError(std::string("orientation character '") + c + "' is not f or b");
    }
    return out;
}

std::string format_orientations(const std::vector<Orientation>& o) {
    std::string s;
    for (auto x : o) s += x == Orientation::forward ? 'f' : 'b';
    return s;
}

ZigzagModule zigzag_from_bars(const Field& field, const std::vector<Orientation>& orientations,
                              const std::vector<Bar>& bars) {
    const int len = static_cast<int>(orientations.size()) + 1;
    ZigzagModule z;
    z.field = field;
    z.orientations = orientations;
    z.interval_form = bars;
    // index of each bar inside the basis at each position
    std::vector<std::map<std::size_t, std::size_t>> slot(len);
    z.dims.assign(len, 0);
    for (std::size_t i = 0; i < bars.size(); ++i) {
        auto [a, b] = bars[i];
        if (a < 0 || b >= len || a > b)
            throw ShapeError("bar [" + std::to_string(a) + "," + std::to_string(b) + "] outside the zigzag");
        for (int k = a; k <= b; ++k) slot[k][i] = z.dims[k]++;
    }
    for (int k = 0; k + 1 < len; ++k) {
        bool fwd = orientations[k] == Orientation::forward;
        std::size_t src = fwd ? k : k + 1, dst = fwd ? k + 1 : k;
        Matrix m(field, z.dims[dst], z.dims[src]);
        for (auto [bar, idx] : slot[src]) {
            auto it = slot[dst].find(bar);
            if (it != slot[dst].end()) m.set(it->second, idx, field.one());
        }
        z.maps.push_back(std::move(m));
    }
    return z;
}

std::string check_zigzag(const ZigzagModule& z) {
    if (z.dims.empty()) return "zigzag has length 0";
    if (z.orientations.size() + 1 != z.dims.size()) return "orientation count must be length - 1";
    if (z.maps.size() != z.orientations.size()) return "map count must be length - 1";
    for (std::size_t k = 0; k < z.maps.size(); ++k) {
        bool fwd = z.orientations[k] == Orientation::forward;
        std::size_t r = fwd ? z.dims[k + 1] : z.dims[k], c = fwd ? z.dims[k] : z.dims[k + 1];
        if (z.maps[k].rows() != r || z.maps[k].cols() != c)
            return "map " + std::to_string(k) + " has the wrong shape";
    }
    if (z.interval_form) {
        std::vector<std::size_t> count(z.dims.size(), 0);
        for (auto [a, b] : *z.interval_form) {
            if (a < 0 || a > b || b >= static_cast<int>(z.dims.size())) return "interval outside the zigzag";
            for (int k = a; k <= b; ++k) ++count[k];
        }
        if (count != z.dims) return "interval form disagrees with dims";
    }
    return {};
}

namespace {

// rank of the map from the limit to the colimit of z restricted to [a, b]
std::size_t generalized_rank(const ZigzagModule& z, int a, int b) {
    const Field& f = z.field;
    std::vector<std::size_t> off(b - a + 2, 0);
    for (int k = a; k <= b; ++k) off[k - a + 1] = off[k - a] + z.dims[k];
    const std::size_t total = off.back();
    if (total == 0) return 0;

    std::vector<Vector> constraints;
    std::vector<Vector> relations;
    for (int k = a; k < b; ++k) {
        const Matrix& m = z.maps[k];
        bool fwd = z.orientations[k] == Orientation::forward;
        std::size_t src = fwd ? k - a : k + 1 - a, dst = fwd ? k + 1 - a : k - a;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            Vector row(total, f.zero());
            for (std::size_t c = 0; c < m.cols(); ++c) row[off[src] + c] = m.at(r, c);
            row[off[dst] + r] = f.sub(row[off[dst] + r], f.one());
            constraints.push_back(std::move(row));
        }
        for (std::size_t c = 0; c < m.cols(); ++c) {
            Vector rel(total, f.zero());
            rel[off[src] + c] = f.one();
            for (std::size_t r = 0; r < m.rows(); ++r) rel[off[dst] + r] = f.sub(rel[off[dst] + r], m.at(r, c));
            relations.push_back(std::move(rel));
        }
    }
    RowEchelon lim(f, total);
    for (auto& c : constraints) lim.insert(c);
    std::vector<Vector> limit = lim.kernel();

    RowEchelon colim(f, total);
    for (auto& r : relations) colim.insert(r);
    std::size_t base = colim.rank();
    for (const auto& x : limit) {
        Vector v(total, f.zero());
        for (std::size_t i = 0; i < z.dims[a]; ++i) v[i] = x[i];
        colim.insert(v);
    }
    return colim.rank() - base;
}

}  // namespace

std::vector<Bar> zigzag_barcode(const ZigzagModule& z) {
    if (auto err = check_zigzag(z); !err.empty()) throw ShapeError(err);
    const int len = static_cast<int>(z.length());
    std::vector<std::vector<long>> rk(len, std::vector<long>(len, 0));
    for (int a = 0; a < len; ++a)
        for (int b = a; b < len; ++b) rk[a][b] = static_cast<long>(generalized_rank(z, a, b));
    auto at = [&](int a, int b) -> long { return (a < 0 || b >= len) ? 0 : rk[a][b]; };
    std::vector<Bar> out;
    for (int a = 0; a < len; ++a)
        for (int b = a; b < len; ++b) {
            long mult = at(a, b) - at(a - 1, b) - at(a, b + 1) + at(a - 1, b + 1);
            for (long i = 0; i < mult; ++i) out.emplace_back(a, b);
        }
    return out;
}

PathSpec make_path(std::vector<LatticePoint> points) {
    PathSpec p;
    for (std::size_t k = 0; k + 1 < points.size(); ++k) {
        LatticePoint d = points[k + 1] - points[k];
        std::size_t nonzero = 0, axis = 0;
        int dir = 0;
        for (std::size_t j = 0; j < d.dim(); ++j)
            if (d[j] != 0) {
                ++nonzero;
                axis = j;
                dir = d[j];
            }
        if (points[k].dim() != points[k + 1].dim() || nonzero != 1 || (dir != 1 && dir != -1))
            throw ShapeError("path points " + points[k].to_string() + " and " + points[k + 1].to_string() +
                             " are not lattice neighbours");
        p.steps.push_back({axis, dir});
    }
    p.points = std::move(points);
    return p;
}

ZigzagModule restrict_path(const PersistenceModule& m, const PathSpec& path) {
    if (path.points.empty()) throw ShapeError("empty path");
    PathSpec checked = make_path(path.points);
    if (!path.steps.empty() && path.steps != checked.steps) throw ShapeError("path steps disagree with its points");
    ZigzagModule z;
    z.field = m.field();
    for (const auto& p : path.points) {
        if (p.dim() != m.n()) throw ShapeError("path point " + p.to_string() + " has the wrong arity");
        z.dims.push_back(m.dim(p));
    }
    for (std::size_t k = 0; k < checked.steps.size(); ++k) {
        const auto& s = checked.steps[k];
        if (s.direction > 0) {
            z.orientations.push_back(Orientation::forward);
            z.maps.push_back(m.edge(path.points[k], s.axis));
        } else {
            z.orientations.push_back(Orientation::backward);
            z.maps.push_back(m.edge(path.points[k + 1], s.axis));
        }
    }
    return z;
}

bool zigzag_equivalent(const ZigzagModule& a, const ZigzagModule& b) {
    if (a.field != b.field || a.dims != b.dims || a.orientations != b.orientations) return false;
    return zigzag_barcode(a) == zigzag_barcode(b);
}

}  // namespace pmforge
