#include "pmforge/intervals.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace pmforge {

namespace {

// Dense indexing of an inclusive box, lexicographic (last coordinate fastest).
class BoxIndex {
public:
    BoxIndex(LatticePoint lo, LatticePoint hi) : lo_(std::move(lo)), hi_(std::move(hi)), stride_(lo_.dim(), 1) {
        std::size_t n = lo_.dim();
        size_ = 1;
        for (std::size_t j = n; j-- > 0;) {
            stride_[j] = size_;
            size_ *= static_cast<std::size_t>(hi_[j] - lo_[j] + 1);
        }
    }
    std::size_t size() const { return size_; }
    bool inside(const LatticePoint& p) const { return lo_.leq(p) && p.leq(hi_); }
    std::size_t index(const LatticePoint& p) const {
        std::size_t k = 0;
        for (std::size_t j = 0; j < lo_.dim(); ++j) k += static_cast<std::size_t>(p[j] - lo_[j]) * stride_[j];
        return k;
    }
    std::vector<LatticePoint> points() const { return grid_points(lo_, hi_); }

private:
    LatticePoint lo_, hi_;
    std::vector<std::size_t> stride_;
    std::size_t size_;
};

Box bounding_box(const std::set<LatticePoint>& s) {
    Box b{*s.begin(), *s.begin()};
    for (const auto& p : s) {
        b.lo = LatticePoint::meet(b.lo, p);
        b.hi = LatticePoint::join(b.hi, p);
    }
    return b;
}

// up[g]: some point of s lies below g; computed over the box in lexicographic order.
std::vector<char> up_closure(const BoxIndex& idx, const std::vector<LatticePoint>& pts, const std::set<LatticePoint>& s) {
    std::vector<char> up(idx.size(), 0);
    for (const auto& p : pts) {
        std::size_t k = idx.index(p);
        if (s.count(p)) {
            up[k] = 1;
            continue;
        }
        for (std::size_t j = 0; j < p.dim() && !up[k]; ++j) {
            LatticePoint q = p.stepped(j, -1);
            if (idx.inside(q) && up[idx.index(q)]) up[k] = 1;
        }
    }
    return up;
}

std::vector<char> down_closure(const BoxIndex& idx, const std::vector<LatticePoint>& pts,
                               const std::set<LatticePoint>& s) {
    std::vector<char> down(idx.size(), 0);
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        const auto& p = *it;
        std::size_t k = idx.index(p);
        if (s.count(p)) {
            down[k] = 1;
            continue;
        }
        for (std::size_t j = 0; j < p.dim() && !down[k]; ++j) {
            LatticePoint q = p.stepped(j, 1);
            if (idx.inside(q) && down[idx.index(q)]) down[k] = 1;
        }
    }
    return down;
}

std::vector<std::set<LatticePoint>> edge_components(const std::set<LatticePoint>& s) {
    std::vector<std::set<LatticePoint>> out;
    std::set<LatticePoint> seen;
    for (const auto& start : s) {
        if (seen.count(start)) continue;
        std::set<LatticePoint> comp;
        std::deque<LatticePoint> queue{start};
        seen.insert(start);
        while (!queue.empty()) {
            LatticePoint p = queue.front();
            queue.pop_front();
            comp.insert(p);
            for (std::size_t j = 0; j < p.dim(); ++j)
                for (int d : {-1, 1}) {
                    LatticePoint q = p.stepped(j, d);
                    if (s.count(q) && !seen.count(q)) {
                        seen.insert(q);
                        queue.push_back(q);
                    }
                }
        }
        out.push_back(std::move(comp));
    }
    // iteration from the smallest unseen point already orders components by their minimum
    return out;
}

}  // namespace

IntervalSupport IntervalSupport::rectangle(const Rectangle& r) {
    if (!r.lo.leq(r.hi)) throw ShapeError("rectangle with lo " + r.lo.to_string() + " not <= hi " + r.hi.to_string());
    auto pts = grid_points(r.lo, r.hi);
    return IntervalSupport(std::set<LatticePoint>(pts.begin(), pts.end()));
}

Box IntervalSupport::box() const { return bounding_box(points_); }

IntervalCheck check_interval(const std::set<LatticePoint>& s) {
    IntervalCheck out;
    if (s.empty()) {
        out.reason = "empty support";
        return out;
    }
    std::size_t n = s.begin()->dim();
    for (const auto& p : s)
        if (p.dim() != n) {
            out.reason = "points of mixed arity";
            return out;
        }
    auto comps = edge_components(s);
    if (comps.size() > 1) {
        out.reason = "support is disconnected: " + comps[0].begin()->to_string() + " and " +
                     comps[1].begin()->to_string() + " lie in different components";
    }
    Box b = bounding_box(s);
    BoxIndex idx(b.lo, b.hi);
    auto pts = idx.points();
    auto up = up_closure(idx, pts, s);
    auto down = down_closure(idx, pts, s);
    for (const auto& g : pts) {
        std::size_t k = idx.index(g);
        if (up[k] && down[k] && !s.count(g)) {
            LatticePoint lo_w, hi_w;
            for (const auto& p : s) {
                if (p.leq(g)) lo_w = p;
                if (g.leq(p) && hi_w.dim() == 0) hi_w = p;
            }
            out.witness = std::vector<LatticePoint>{lo_w, g, hi_w};
            std::string why = "not order-convex: " + lo_w.to_string() + " <= " + g.to_string() + " <= " +
                              hi_w.to_string() + " with " + g.to_string() + " missing";
            out.reason = out.reason.empty() ? why : out.reason + "; " + why;
            return out;
        }
    }
    if (!out.reason.empty()) return out;
    out.support = IntervalSupport(s);
    return out;
}

IntervalSupport require_interval(const std::set<LatticePoint>& s, const std::string& what) {
    auto chk = check_interval(s);
    if (!chk) throw ConstructionError(what + " is not an interval support: " + chk.reason);
    return *chk.support;
}

std::size_t ComponentReport::viable_count() const {
    return static_cast<std::size_t>(
        std::count_if(components.begin(), components.end(), [](const Component& c) { return c.viable; }));
}

namespace {

std::vector<std::set<LatticePoint>> intersection_components(const IntervalSupport& a, const IntervalSupport& b) {
    if (a.n() != b.n()) throw MismatchError("supports have different ambient dimensions");
    std::set<LatticePoint> inter;
    std::set_intersection(a.points().begin(), a.points().end(), b.points().begin(), b.points().end(),
                          std::inserter(inter, inter.end()));
    return edge_components(inter);
}

}  // namespace

ComponentReport intersect_components(const IntervalSupport& a, const IntervalSupport& b) {
    ComponentReport report;
    for (auto& comp : intersection_components(a, b)) {
        Component c;
        for (const auto& alpha : comp) {
            for (std::size_t j = 0; j < alpha.dim() && c.viable; ++j) {
                LatticePoint below = alpha.stepped(j, -1);
                if (a.contains(below) && !b.contains(below)) {
                    c.viable = false;
                    c.witness = ViabilityWitness{below, alpha, WitnessSide::m_side};
                    break;
                }
                LatticePoint above = alpha.stepped(j, 1);
                if (b.contains(above) && !a.contains(above)) {
                    c.viable = false;
                    c.witness = ViabilityWitness{above, alpha, WitnessSide::n_side};
                    break;
                }
            }
            if (!c.viable) break;
        }
        c.points = std::move(comp);
        report.components.push_back(std::move(c));
    }
    return report;
}

ComponentReport intersect_components_bruteforce(const IntervalSupport& a, const IntervalSupport& b) {
    ComponentReport report;
    std::vector<LatticePoint> a_only, b_only;
    for (const auto& p : a.points())
        if (!b.contains(p)) a_only.push_back(p);
    for (const auto& p : b.points())
        if (!a.contains(p)) b_only.push_back(p);
    for (auto& comp : intersection_components(a, b)) {
        Component c;
        for (const auto& alpha : comp) {
            for (const auto& beta : a_only)
                if (beta.less(alpha)) {
                    c.viable = false;
                    c.witness = ViabilityWitness{beta, alpha, WitnessSide::m_side};
                    break;
                }
            if (!c.viable) break;
            for (const auto& beta : b_only)
                if (alpha.less(beta)) {
                    c.viable = false;
                    c.witness = ViabilityWitness{beta, alpha, WitnessSide::n_side};
                    break;
                }
            if (!c.viable) break;
        }
        c.points = std::move(comp);
        report.components.push_back(std::move(c));
    }
    return report;
}

std::size_t hom_dim_intervals(const IntervalSupport& a, const IntervalSupport& b) {
    return intersect_components(a, b).viable_count();
}

bool rectangle_hom_exists(const Rectangle& from, const Rectangle& to) {
    return to.lo.leq(from.lo) && from.lo.leq(to.hi) && to.hi.leq(from.hi);
}

HomElement canonical_hom(const IntervalSupport& a, const IntervalSupport& b, std::size_t component_index,
                         const Field& field) {
    ComponentReport r = intersect_components(a, b);
    if (component_index >= r.components.size())
        throw ConstructionError("component index " + std::to_string(component_index) + " out of range (" +
                                std::to_string(r.components.size()) + " components)");
    const Component& c = r.components[component_index];
    if (!c.viable)
        throw ConstructionError("component " + std::to_string(component_index) + " is not viable: witness " +
                                c.witness->beta.to_string() + " / " + c.witness->alpha.to_string());
    HomElement f;
    for (const auto& p : c.points) f.blocks.emplace(p, Matrix::identity(field, 1));
    return f;
}

HomElement canonical_rect_hom(const Rectangle& from, const Rectangle& to, const Field& field) {
    HomElement f;
    if (!rectangle_hom_exists(from, to)) return f;
    for (const auto& p : grid_points(from.lo, to.hi)) f.blocks.emplace(p, Matrix::identity(field, 1));
    return f;
}

std::vector<LatticePoint> minimal_elements(const IntervalSupport& s) {
    // by order-convexity, anything strictly below g forces a neighbour g - e_j into s
    std::vector<LatticePoint> out;
    for (const auto& g : s.points()) {
        bool minimal = true;
        for (std::size_t j = 0; j < g.dim() && minimal; ++j) minimal = !s.contains(g.stepped(j, -1));
        if (minimal) out.push_back(g);
    }
    return out;
}

std::vector<LatticePoint> maximal_elements(const IntervalSupport& s) {
    std::vector<LatticePoint> out;
    for (const auto& g : s.points()) {
        bool maximal = true;
        for (std::size_t j = 0; j < g.dim() && maximal; ++j) maximal = !s.contains(g.stepped(j, 1));
        if (maximal) out.push_back(g);
    }
    return out;
}

Envelope upper_envelope(const IntervalSupport& s) {
    Box b = s.box();
    BoxIndex idx(b.lo, b.hi);
    auto pts = idx.points();
    auto up = up_closure(idx, pts, s.points());
    std::set<LatticePoint> out;
    for (const auto& g : pts)
        if (up[idx.index(g)]) out.insert(out.end(), g);
    return {require_interval(out, "upper envelope"), b.hi};
}

Envelope lower_envelope(const IntervalSupport& s) {
    Box b = s.box();
    BoxIndex idx(b.lo, b.hi);
    auto pts = idx.points();
    auto down = down_closure(idx, pts, s.points());
    std::set<LatticePoint> out;
    for (const auto& g : pts)
        if (down[idx.index(g)]) out.insert(out.end(), g);
    return {require_interval(out, "lower envelope"), b.lo};
}

PersistenceModule interval_module(const IntervalSupport& s, const Field& field) {
    PersistenceModule m(field, s.n());
    for (const auto& p : s.points()) m.set_dim(p, 1);
    Matrix one = Matrix::identity(field, 1);
    for (const auto& p : s.points())
        for (std::size_t j = 0; j < p.dim(); ++j)
            if (s.contains(p.stepped(j, 1))) m.set_edge(p, j, one);
    return m;
}

PersistenceModule rectangle_module(const Rectangle& r, const Field& field) {
    return interval_module(IntervalSupport::rectangle(r), field);
}

PersistenceModule interval_sum(const std::vector<IntervalSupport>& summands, const Field& field, std::size_t n) {
    PersistenceModule m(field, n);
    std::map<LatticePoint, std::vector<std::size_t>> at;
    for (std::size_t i = 0; i < summands.size(); ++i) {
        if (summands[i].n() != n) throw MismatchError("summand of the wrong ambient dimension");
        for (const auto& p : summands[i].points()) at[p].push_back(i);
    }
    for (const auto& [p, list] : at) m.set_dim(p, list.size());
    for (const auto& [p, list] : at)
        for (std::size_t j = 0; j < n; ++j) {
            auto it = at.find(p.stepped(j, 1));
            if (it == at.end()) continue;
            const auto& next = it->second;
            Matrix e(field, next.size(), list.size());
            for (std::size_t c = 0; c < list.size(); ++c) {
                auto r = std::lower_bound(next.begin(), next.end(), list[c]);
                if (r != next.end() && *r == list[c]) e.set(static_cast<std::size_t>(r - next.begin()), c, field.one());
            }
            m.set_edge(p, j, std::move(e));
        }
    return m;
}

HomElement interval_sum_map(const std::vector<IntervalSupport>& from, const std::vector<IntervalSupport>& to,
                            const std::vector<std::vector<Scalar>>& coeffs, const Field& field) {
    if (coeffs.size() != to.size()) throw ShapeError("coefficient rows must match the target summands");
    std::map<LatticePoint, std::vector<std::size_t>> at_from, at_to;
    for (std::size_t i = 0; i < from.size(); ++i)
        for (const auto& p : from[i].points()) at_from[p].push_back(i);
    for (std::size_t i = 0; i < to.size(); ++i)
        for (const auto& p : to[i].points()) at_to[p].push_back(i);
    auto position = [](const std::vector<std::size_t>& list, std::size_t i) {
        return static_cast<std::size_t>(std::lower_bound(list.begin(), list.end(), i) - list.begin());
    };
    HomElement f;
    for (std::size_t r = 0; r < to.size(); ++r) {
        if (coeffs[r].size() != from.size()) throw ShapeError("coefficient columns must match the source summands");
        for (std::size_t c = 0; c < from.size(); ++c) {
            Scalar k = coeffs[r][c];
            if (Field::is_zero(k)) continue;
            for (const auto& comp : intersect_components(from[c], to[r]).components) {
                if (!comp.viable) continue;
                for (const auto& p : comp.points) {
                    const auto& rows = at_to[p];
                    const auto& cols = at_from[p];
                    auto it = f.blocks.find(p);
                    if (it == f.blocks.end()) it = f.blocks.emplace(p, Matrix(field, rows.size(), cols.size())).first;
                    std::size_t pr = position(rows, r), pc = position(cols, c);
                    it->second.set(pr, pc, field.add(it->second.at(pr, pc), k));
                }
            }
        }
    }
    for (auto it = f.blocks.begin(); it != f.blocks.end();) {
        if (it->second.is_zero())
            it = f.blocks.erase(it);
        else
            ++it;
    }
    return f;
}

std::optional<IntervalSupport> interval_support_of(const PersistenceModule& m) {
    if (m.is_zero()) return std::nullopt;
    for (const auto& [p, d] : m.dims())
        if (d != 1) return std::nullopt;
    for (const auto& [p, d] : m.dims())
        for (std::size_t j = 0; j < m.n(); ++j) {
            LatticePoint q = p.stepped(j, 1);
            if (m.dim(q) == 0) continue;
            if (!m.edge(p, j).is_identity()) return std::nullopt;
        }
    auto chk = check_interval(m.support_set());
    if (!chk) return std::nullopt;
    return chk.support;
}

}  // namespace pmforge
