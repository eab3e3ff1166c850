#include "pmforge/forge.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "pmforge/errors.hpp"

namespace pmforge {

namespace {

using Ids = std::pair<std::size_t, std::optional<std::size_t>>;

// A layer before the global shift: supports may have negative coordinates.
struct PlanLayer {
    std::vector<std::set<LatticePoint>> supports;
    std::vector<Ids> ids;
    std::optional<PersistenceModule> module;
};

// coeffs[r][c]: target summand r, source summand c.
struct PlanMap {
    std::vector<std::vector<int>> coeffs;
    std::optional<HomElement> explicit_map;
};

struct Plan {
    std::vector<PlanLayer> layers;
    std::vector<PlanMap> maps;

    void push(PlanLayer layer, std::optional<PlanMap> into = std::nullopt) {
        if (!layers.empty()) maps.push_back(std::move(*into));
        layers.push_back(std::move(layer));
    }
    // Appends b on top of *this, b's first layer being *this's last.
    void glue(Plan b) {
        for (std::size_t k = 1; k < b.layers.size(); ++k) {
            layers.push_back(std::move(b.layers[k]));
            maps.push_back(std::move(b.maps[k - 1]));
        }
    }
};

std::set<LatticePoint> rect_points(const Rectangle& r) {
    auto pts = grid_points(r.lo, r.hi);
    return {pts.begin(), pts.end()};
}

std::vector<std::vector<int>> zeros(std::size_t rows, std::size_t cols) {
    return std::vector<std::vector<int>>(rows, std::vector<int>(cols, 0));
}

std::vector<std::vector<int>> identity_coeffs(std::size_t m) {
    auto c = zeros(m, m);
    for (std::size_t i = 0; i < m; ++i) c[i][i] = 1;
    return c;
}

LatticePoint pointwise(const LatticePoint& a, const LatticePoint& b, bool take_max) {
    return take_max ? LatticePoint::join(a, b) : LatticePoint::meet(a, b);
}

LatticePoint twice(const LatticePoint& p) { return p + p; }

std::string rect_string(const Rectangle& r) { return "K[" + r.lo.to_string() + "," + r.hi.to_string() + "]"; }

void require_rects(const std::vector<Rectangle>& rects) {
    if (rects.empty()) throw ConstructionError("empty input");
    std::size_t n = rects[0].lo.dim();
    for (const auto& r : rects) {
        if (r.lo.dim() != n || r.hi.dim() != n) throw MismatchError("rectangles of mixed arity");
        if (!r.lo.leq(r.hi)) throw ConstructionError("empty rectangle " + rect_string(r));
        if (!r.lo.nonnegative()) throw ConstructionError("rectangle " + rect_string(r) + " has negative corner");
    }
}

void require_summands(const std::vector<IntervalSupport>& summands) {
    if (summands.empty()) throw ConstructionError("empty input");
    std::size_t n = summands[0].n();
    for (const auto& s : summands)
        if (s.n() != n) throw MismatchError("summands of mixed arity");
}

std::vector<Rectangle> ordered(const std::vector<Rectangle>& rects, const ConstructionParams& p) {
    std::vector<Rectangle> out;
    for (std::size_t k : p.summand_order) out.push_back(rects[k]);
    return out;
}

ConstructionParams choose_main(const std::vector<Rectangle>& rects, const std::vector<std::size_t>& order) {
    const std::size_t n = rects[0].lo.dim();
    const int m = static_cast<int>(rects.size());
    int maxcoord = 0;
    for (const auto& r : rects)
        for (std::size_t j = 0; j < n; ++j) maxcoord = std::max({maxcoord, r.lo[j], r.hi[j]});
    const int base = maxcoord + m;
    ConstructionParams p;
    p.mode = RectMode::main;
    p.summand_order = order;
    for (int k = 0; k < m; ++k) p.beta_primes.push_back(LatticePoint::constant(n, base + k + 1));
    p.mu = rects[order[0]].lo + p.beta_primes[0];
    for (int k = 0; k < m; ++k) p.mu = LatticePoint::join(p.mu, rects[order[k]].lo + p.beta_primes[k]);
    for (const auto& b : p.beta_primes) p.alpha_primes.push_back(p.mu - b);
    return p;
}

void assert_params(const std::vector<Rectangle>& rects, const ConstructionParams& p) {
    if (auto err = check_rect_params(rects, p)) throw ConstructionError("parameter chooser produced invalid params: " + *err);
    // the chooser commits to coordinatewise-strict spacing
    const auto& chosen = p.mode == RectMode::main ? p.beta_primes : p.alpha_primes;
    for (std::size_t k = 0; k + 1 < chosen.size(); ++k)
        for (std::size_t j = 0; j < chosen[k].dim(); ++j)
            if (chosen[k][j] >= chosen[k + 1][j])
                throw ConstructionError("parameter chooser: " + chosen[k].to_string() + " not coordinatewise below " +
                                        chosen[k + 1].to_string());
}

// Layers 0-2 of a main rectangular construction; the top layer (summands in input
// order) is supplied by the caller and is not part of the returned plan.
Plan main_rect_plan(const std::vector<Rectangle>& rects, const ConstructionParams& p) {
    const std::size_t m = rects.size();
    auto rs = ordered(rects, p);
    LatticePoint amax = p.alpha_primes[0], bmax = p.beta_primes[0];
    for (std::size_t k = 0; k < m; ++k) {
        amax = LatticePoint::join(amax, p.alpha_primes[k]);
        bmax = LatticePoint::join(bmax, p.beta_primes[k]);
    }
    Plan plan;
    PlanLayer l0, l1, l2;
    l0.supports.push_back(rect_points({amax, bmax}));
    l0.ids.push_back({1, std::nullopt});
    for (std::size_t k = 0; k < m; ++k) {
        l1.supports.push_back(rect_points({p.alpha_primes[k], p.beta_primes[k]}));
        l1.ids.push_back({k + 1, std::nullopt});
        l2.supports.push_back(rect_points({rs[k].lo, p.beta_primes[k]}));
        l2.ids.push_back({k + 1, std::nullopt});
    }
    auto column = zeros(m, 1);
    for (auto& row : column) row[0] = 1;
    plan.push(std::move(l0));
    plan.push(std::move(l1), PlanMap{column, std::nullopt});
    plan.push(std::move(l2), PlanMap{identity_coeffs(m), std::nullopt});
    return plan;
}

// Map from layer 2 of main_rect_plan to the input-ordered top layer.
PlanMap main_rect_into_top(const ConstructionParams& p) {
    const std::size_t m = p.summand_order.size();
    auto c = zeros(m, m);
    for (std::size_t k = 0; k < m; ++k) c[p.summand_order[k]][k] = 1;
    return {c, std::nullopt};
}

// Layers above an input-ordered bottom layer: [bottom], 1, 2, 3.
Plan dual_rect_plan(const PlanLayer& bottom, const std::vector<Rectangle>& rects, const ConstructionParams& p) {
    const std::size_t m = rects.size();
    auto rs = ordered(rects, p);
    LatticePoint amin = p.alpha_primes[0], bmin = p.beta_primes[0];
    for (std::size_t k = 0; k < m; ++k) {
        amin = LatticePoint::meet(amin, p.alpha_primes[k]);
        bmin = LatticePoint::meet(bmin, p.beta_primes[k]);
    }
    Plan plan;
    PlanLayer l1, l2, l3;
    for (std::size_t k = 0; k < m; ++k) {
        l1.supports.push_back(rect_points({p.alpha_primes[k], rs[k].hi}));
        l1.ids.push_back({k + 1, std::nullopt});
        l2.supports.push_back(rect_points({p.alpha_primes[k], p.beta_primes[k]}));
        l2.ids.push_back({k + 1, std::nullopt});
    }
    l3.supports.push_back(rect_points({amin, bmin}));
    l3.ids.push_back({1, std::nullopt});
    auto into = zeros(m, m);
    for (std::size_t k = 0; k < m; ++k) into[k][p.summand_order[k]] = 1;
    auto row = zeros(1, m);
    for (auto& x : row[0]) x = 1;
    plan.push(bottom);
    plan.push(std::move(l1), PlanMap{into, std::nullopt});
    plan.push(std::move(l2), PlanMap{identity_coeffs(m), std::nullopt});
    plan.push(std::move(l3), PlanMap{row, std::nullopt});
    return plan;
}

PlanLayer rect_layer(const std::vector<Rectangle>& rects) {
    PlanLayer l;
    for (std::size_t k = 0; k < rects.size(); ++k) {
        l.supports.push_back(rect_points(rects[k]));
        l.ids.push_back({k + 1, std::nullopt});
    }
    return l;
}

PlanLayer interval_layer(const std::vector<IntervalSupport>& summands) {
    PlanLayer l;
    for (std::size_t k = 0; k < summands.size(); ++k) {
        l.supports.push_back(summands[k].points());
        l.ids.push_back({k + 1, std::nullopt});
    }
    return l;
}

// Layers 0-5 of the main interval construction, layer 5 holding the summands.
Plan main_interval_plan(const std::vector<IntervalSupport>& summands, ConstructionParams& params_out) {
    const std::size_t m = summands.size();
    PlanLayer l4, l3;
    std::vector<Rectangle> rects;
    auto into4 = zeros(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        Envelope env = upper_envelope(summands[i]);
        l4.supports.push_back(env.support.points());
        l4.ids.push_back({i + 1, std::nullopt});
        auto mins = minimal_elements(env.support);
        for (std::size_t j = 0; j < mins.size(); ++j) {
            rects.push_back({mins[j], env.corner});
            l3.supports.push_back(rect_points(rects.back()));
            l3.ids.push_back({i + 1, j + 1});
            for (std::size_t r = 0; r < m; ++r) into4[r].push_back(r == i ? 1 : 0);
        }
    }
    params_out = choose_rect_params(rects, RectMode::main);
    Plan plan = main_rect_plan(rects, params_out);
    plan.push(std::move(l3), main_rect_into_top(params_out));
    plan.push(std::move(l4), PlanMap{into4, std::nullopt});
    plan.push(interval_layer(summands), PlanMap{identity_coeffs(m), std::nullopt});
    return plan;
}

// Layers 0-5 of the dual interval construction, layer 0 holding the summands.
Plan dual_interval_plan(const std::vector<IntervalSupport>& summands, ConstructionParams& params_out) {
    const std::size_t m = summands.size();
    PlanLayer l1, l2;
    std::vector<Rectangle> rects;
    std::vector<std::vector<int>> into2;
    for (std::size_t i = 0; i < m; ++i) {
        Envelope env = lower_envelope(summands[i]);
        l1.supports.push_back(env.support.points());
        l1.ids.push_back({i + 1, std::nullopt});
        auto maxs = maximal_elements(env.support);
        for (std::size_t j = 0; j < maxs.size(); ++j) {
            rects.push_back({env.corner, maxs[j]});
            l2.supports.push_back(rect_points(rects.back()));
            l2.ids.push_back({i + 1, j + 1});
            std::vector<int> row(m, 0);
            row[i] = 1;
            into2.push_back(row);
        }
    }
    params_out = choose_rect_params(rects, RectMode::dual);
    Plan plan;
    plan.push(interval_layer(summands));
    plan.push(std::move(l1), PlanMap{identity_coeffs(m), std::nullopt});
    PlanLayer l2_copy = l2;
    plan.push(std::move(l2), PlanMap{into2, std::nullopt});
    plan.glue(dual_rect_plan(l2_copy, rects, params_out));
    return plan;
}

std::set<LatticePoint> shifted(const std::set<LatticePoint>& s, const LatticePoint& by) {
    std::set<LatticePoint> out;
    for (const auto& p : s) out.insert(p + by);
    return out;
}

HomElement shifted(const HomElement& f, const LatticePoint& by) {
    HomElement out;
    for (const auto& [p, blk] : f.blocks) out.blocks.emplace(p + by, blk);
    return out;
}

std::string label_of(int layer, const Ids& id) {
    return SummandLabel{layer, id.first, id.second}.to_string();
}

HomElement checked_map(const std::vector<IntervalSupport>& from, const std::vector<IntervalSupport>& to,
                       const PlanLayer& from_plan, const PlanLayer& to_plan, int layer,
                       const std::vector<std::vector<int>>& coeffs, const Field& field) {
    std::vector<std::vector<Scalar>> sc(to.size(), std::vector<Scalar>(from.size(), field.zero()));
    for (std::size_t r = 0; r < to.size(); ++r)
        for (std::size_t c = 0; c < from.size(); ++c) {
            if (coeffs[r][c] == 0) continue;
            sc[r][c] = field.from_int(coeffs[r][c]);
            ComponentReport rep = intersect_components(from[c], to[r]);
            std::string what = label_of(layer, from_plan.ids[c]) + " -> " + label_of(layer + 1, to_plan.ids[r]);
            if (rep.components.size() != 1)
                throw ConstructionError("no canonical map " + what + ": intersection has " +
                                        std::to_string(rep.components.size()) + " components");
            const Component& comp = rep.components[0];
            if (!comp.viable)
                throw ConstructionError("no canonical map " + what + ": intersection not viable, witness " +
                                        comp.witness->beta.to_string() + " against " + comp.witness->alpha.to_string());
        }
    return interval_sum_map(from, to, sc, field);
}

LayeredConstruction finalize(const Plan& plan, const Field& field, std::size_t n, const std::string& method,
                             int m_layer) {
    LatticePoint lo = LatticePoint::zero(n);
    for (const auto& l : plan.layers) {
        for (const auto& s : l.supports)
            for (const auto& p : s) lo = LatticePoint::meet(lo, p);
        if (l.module)
            if (auto b = l.module->box()) lo = LatticePoint::meet(lo, b->lo);
    }
    LatticePoint by = LatticePoint::zero(n) - lo;

    LayeredConstruction out;
    out.method = method;
    out.m_layer = m_layer;
    out.shift = by.coords();
    std::vector<std::vector<IntervalSupport>> sums;
    std::vector<PersistenceModule> modules;
    for (std::size_t r = 0; r < plan.layers.size(); ++r) {
        const PlanLayer& l = plan.layers[r];
        std::vector<IntervalSupport> s;
        for (std::size_t k = 0; k < l.supports.size(); ++k)
            s.push_back(require_interval(shifted(l.supports[k], by), label_of(static_cast<int>(r), l.ids[k])));
        modules.push_back(l.module ? shift(*l.module, by.coords()) : interval_sum(s, field, n));
        LayerInfo info;
        info.index = static_cast<int>(r);
        for (const auto& id : l.ids) info.labels.push_back({static_cast<int>(r), id.first, id.second});
        info.summands = s;
        out.layers.push_back(std::move(info));
        sums.push_back(std::move(s));
    }
    std::vector<HomElement> maps;
    for (std::size_t r = 0; r < plan.maps.size(); ++r) {
        const PlanMap& pm = plan.maps[r];
        if (pm.explicit_map)
            maps.push_back(shifted(*pm.explicit_map, by));
        else
            maps.push_back(checked_map(sums[r], sums[r + 1], plan.layers[r], plan.layers[r + 1], static_cast<int>(r),
                                       pm.coeffs, field));
    }
    out.result = stack_layers(modules, maps);
    return out;
}

ConstructionParams resolve_params(const std::vector<Rectangle>& rects, RectMode mode,
                                  const std::optional<ConstructionParams>& given) {
    if (!given) return choose_rect_params(rects, mode);
    if (given->mode != mode) throw ConstructionError("invalid params: wrong mode for this construction");
    if (auto err = check_rect_params(rects, *given)) throw ConstructionError("invalid params: " + *err);
    return *given;
}

}  // namespace

std::string SummandLabel::to_string() const {
    std::string s = "I(" + std::to_string(layer) + "," + std::to_string(i);
    if (j) s += "," + std::to_string(*j);
    return s + ")";
}

ConstructionParams choose_rect_params(const std::vector<Rectangle>& rects, RectMode mode) {
    require_rects(rects);
    const std::size_t n = rects[0].lo.dim();
    const std::size_t m = rects.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    if (mode == RectMode::main) {
        ConstructionParams p = choose_main(rects, order);
        assert_params(rects, p);
        return p;
    }
    // Reflect through the bounding box, choose on the reversed list, reflect back.
    LatticePoint lo = rects[0].lo, hi = rects[0].hi;
    for (const auto& r : rects) {
        lo = LatticePoint::meet(lo, r.lo);
        hi = LatticePoint::join(hi, r.hi);
    }
    LatticePoint c = lo + hi;
    std::vector<Rectangle> mirrored;
    for (std::size_t k = m; k-- > 0;) mirrored.push_back({c - rects[k].hi, c - rects[k].lo});
    std::vector<std::size_t> ident(m);
    std::iota(ident.begin(), ident.end(), 0);
    ConstructionParams ref = choose_main(mirrored, ident);
    ConstructionParams p;
    p.mode = RectMode::dual;
    p.summand_order = order;
    for (std::size_t k = 0; k < m; ++k) p.alpha_primes.push_back(c - ref.beta_primes[m - 1 - k]);
    p.mu = p.alpha_primes[0] + rects[0].hi;
    for (std::size_t k = 0; k < m; ++k) p.mu = LatticePoint::meet(p.mu, p.alpha_primes[k] + rects[k].hi);
    for (const auto& a : p.alpha_primes) p.beta_primes.push_back(p.mu - a);
    (void)n;
    assert_params(rects, p);
    return p;
}

std::optional<std::string> check_rect_params(const std::vector<Rectangle>& rects, const ConstructionParams& p) {
    const std::size_t m = rects.size();
    if (m == 0) return "empty rectangle list";
    const std::size_t n = rects[0].lo.dim();
    if (p.beta_primes.size() != m || p.alpha_primes.size() != m || p.summand_order.size() != m)
        return "parameter lists must have one entry per summand";
    {
        auto sorted = p.summand_order;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t k = 0; k < m; ++k)
            if (sorted[k] != k) return "summand_order is not a permutation";
    }
    if (p.mu.dim() != n) return "mu has the wrong arity";
    for (std::size_t k = 0; k < m; ++k)
        if (p.beta_primes[k].dim() != n || p.alpha_primes[k].dim() != n) return "parameter point of the wrong arity";
    auto rs = ordered(rects, p);
    auto name = [](const char* what, std::size_t k) { return std::string(what) + "_" + std::to_string(k + 1); };
    const auto& a2 = p.alpha_primes;
    const auto& b2 = p.beta_primes;

    if (p.mode == RectMode::main) {
        for (std::size_t k = 0; k < m; ++k)
            if (!rs[k].hi.leq(b2[k]))
                return name("beta", k) + " = " + rs[k].hi.to_string() + " not <= " + name("beta'", k) + " = " +
                       b2[k].to_string();
        for (std::size_t k = 0; k + 1 < m; ++k)
            if (!b2[k].less(b2[k + 1])) return name("beta'", k) + " not < " + name("beta'", k + 1);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (!(rs[i].lo + b2[i]).leq(twice(b2[j])))
                    return "(" + name("alpha", i) + " + " + name("beta'", i) + ")/2 not <= " + name("beta'", j);
        LatticePoint mu = rs[0].lo + b2[0];
        for (std::size_t k = 0; k < m; ++k) mu = pointwise(mu, rs[k].lo + b2[k], true);
        if (mu != p.mu) return "mu = " + p.mu.to_string() + " differs from max(alpha + beta') = " + mu.to_string();
        for (std::size_t k = 0; k < m; ++k)
            if (a2[k] != mu - b2[k]) return name("alpha'", k) + " differs from mu - " + name("beta'", k);
        for (std::size_t k = 0; k + 1 < m; ++k) {
            Rectangle s{a2[k], b2[k]}, t{a2[k + 1], b2[k + 1]};
            if (!(t.lo.leq(s.lo) && s.hi.leq(t.hi)) || s == t)
                return "support of layer-1 summand " + std::to_string(k + 1) + " not strictly inside summand " +
                       std::to_string(k + 2);
        }
        return std::nullopt;
    }

    for (std::size_t k = 0; k < m; ++k)
        if (!a2[k].leq(rs[k].lo))
            return name("alpha'", k) + " = " + a2[k].to_string() + " not <= " + name("alpha", k) + " = " +
                   rs[k].lo.to_string();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (i != j && a2[i] == a2[j]) return name("alpha'", i) + " equals " + name("alpha'", j);
            if (!twice(a2[i]).leq(a2[j] + rs[j].hi))
                return name("alpha'", i) + " not <= (" + name("alpha'", j) + " + " + name("beta", j) + ")/2";
        }
    LatticePoint mu = a2[0] + rs[0].hi;
    for (std::size_t k = 0; k < m; ++k) mu = pointwise(mu, a2[k] + rs[k].hi, false);
    if (mu != p.mu) return "mu = " + p.mu.to_string() + " differs from min(alpha' + beta) = " + mu.to_string();
    for (std::size_t k = 0; k < m; ++k)
        if (b2[k] != mu - a2[k]) return name("beta'", k) + " differs from mu - " + name("alpha'", k);
    for (std::size_t k = 0; k + 1 < m; ++k) {
        Rectangle s{a2[k], b2[k]}, t{a2[k + 1], b2[k + 1]};
        if (!(s.lo.leq(t.lo) && t.hi.leq(s.hi)) || s == t)
            return "support of layer-2 summand " + std::to_string(k + 2) + " not strictly inside summand " +
                   std::to_string(k + 1);
    }
    return std::nullopt;
}

bool layer_equal(const LayeredConstruction& c, const PersistenceModule& input) {
    return restrict_hyperplane(c.result, c.m_layer) == shift(input, c.shift);
}

PersistenceModule rectangle_sum(const std::vector<Rectangle>& rects, const Field& field) {
    require_rects(rects);
    std::vector<IntervalSupport> s;
    for (const auto& r : rects) s.push_back(IntervalSupport::rectangle(r));
    return interval_sum(s, field, rects[0].lo.dim());
}

LayeredConstruction main_rectangular(const std::vector<Rectangle>& rects, const Field& field,
                                     const std::optional<ConstructionParams>& params) {
    require_rects(rects);
    ConstructionParams p = resolve_params(rects, RectMode::main, params);
    Plan plan = main_rect_plan(rects, p);
    plan.push(rect_layer(rects), main_rect_into_top(p));
    LayeredConstruction out = finalize(plan, field, rects[0].lo.dim(), "main-rect", 3);
    out.params = p;
    return out;
}

LayeredConstruction dual_rectangular(const std::vector<Rectangle>& rects, const Field& field,
                                     const std::optional<ConstructionParams>& params) {
    require_rects(rects);
    ConstructionParams p = resolve_params(rects, RectMode::dual, params);
    Plan plan = dual_rect_plan(rect_layer(rects), rects, p);
    LayeredConstruction out = finalize(plan, field, rects[0].lo.dim(), "dual-rect", 0);
    out.params = p;
    return out;
}

LayeredConstruction glued_rectangular(const std::vector<Rectangle>& rects, const Field& field) {
    require_rects(rects);
    ConstructionParams pm = choose_rect_params(rects, RectMode::main);
    ConstructionParams pd = choose_rect_params(rects, RectMode::dual);
    Plan plan = main_rect_plan(rects, pm);
    PlanLayer mid = rect_layer(rects);
    plan.push(mid, main_rect_into_top(pm));
    plan.glue(dual_rect_plan(mid, rects, pd));
    LayeredConstruction out = finalize(plan, field, rects[0].lo.dim(), "glued-rect", 3);
    out.params = pm;
    out.dual_params = pd;
    return out;
}

LayeredConstruction main_interval(const std::vector<IntervalSupport>& summands, const Field& field) {
    require_summands(summands);
    ConstructionParams p;
    Plan plan = main_interval_plan(summands, p);
    LayeredConstruction out = finalize(plan, field, summands[0].n(), "main-int", 5);
    out.params = p;
    return out;
}

LayeredConstruction dual_interval(const std::vector<IntervalSupport>& summands, const Field& field) {
    require_summands(summands);
    ConstructionParams p;
    Plan plan = dual_interval_plan(summands, p);
    LayeredConstruction out = finalize(plan, field, summands[0].n(), "dual-int", 0);
    out.dual_params = p;
    return out;
}

LayeredConstruction glued_interval(const std::vector<IntervalSupport>& summands, const Field& field) {
    require_summands(summands);
    ConstructionParams pm, pd;
    Plan plan = main_interval_plan(summands, pm);
    plan.glue(dual_interval_plan(summands, pd));
    LayeredConstruction out = finalize(plan, field, summands[0].n(), "glued-int", 5);
    out.params = pm;
    out.dual_params = pd;
    return out;
}

std::vector<Generator> minimal_generators(const PersistenceModule& m, std::size_t max_check) {
    auto gens = compute_generators(m);
    if (!generates(m, gens)) throw ConstructionError("generator extraction failed to span the module");
    if (gens.size() <= max_check) {
        for (std::size_t k = 0; k < gens.size(); ++k) {
            auto fewer = gens;
            fewer.erase(fewer.begin() + static_cast<long>(k));
            if (generates(m, fewer))
                throw ConstructionError("generator at " + gens[k].grade.to_string() + " is redundant");
        }
    }
    return gens;
}

GeneratorSpan generator_span(const PersistenceModule& m, const Generator& g) {
    const Field& f = m.field();
    if (g.vector.size() != m.dim(g.grade) || g.vector.empty())
        throw ConstructionError("generator vector does not live in the space at " + g.grade.to_string());
    if (std::all_of(g.vector.begin(), g.vector.end(), [](Scalar s) { return Field::is_zero(s); }))
        throw ConstructionError("zero generator at " + g.grade.to_string());
    auto box = m.box();
    std::map<LatticePoint, Vector> image;
    image.emplace(g.grade, g.vector);
    for (const auto& b : grid_points(g.grade, box->hi)) {
        if (b == g.grade) continue;
        for (std::size_t j = 0; j < m.n(); ++j) {
            if (b[j] == g.grade[j]) continue;
            auto it = image.find(b.stepped(j, -1));
            if (it != image.end()) {
                Vector v = m.edge(b.stepped(j, -1), j).apply(it->second);
                if (std::any_of(v.begin(), v.end(), [](Scalar s) { return !Field::is_zero(s); }))
                    image.emplace(b, std::move(v));
            }
            break;
        }
    }
    std::set<LatticePoint> pts;
    HomElement inc;
    for (auto& [p, v] : image) {
        pts.insert(p);
        Matrix col(f, v.size(), 1);
        for (std::size_t r = 0; r < v.size(); ++r) col.set(r, 0, v[r]);
        inc.blocks.emplace(p, std::move(col));
    }
    return {require_interval(pts, "generator span at " + g.grade.to_string()), std::move(inc)};
}

LayeredConstruction main_general(const PersistenceModule& m) {
    if (m.is_zero()) throw ConstructionError("empty input");
    if (auto v = validate(m); !v.empty()) throw ConstructionError("input module is invalid: " + v[0].message);
    auto gens = minimal_generators(m);
    std::vector<IntervalSupport> spans;
    std::vector<HomElement> incs;
    for (const auto& g : gens) {
        GeneratorSpan s = generator_span(m, g);
        spans.push_back(s.support);
        incs.push_back(std::move(s.inclusion));
    }
    // row of inclusions from the sum of spans into m
    HomElement phi;
    for (const auto& [p, d] : m.dims()) {
        std::vector<std::size_t> here;
        for (std::size_t k = 0; k < spans.size(); ++k)
            if (spans[k].contains(p)) here.push_back(k);
        if (here.empty()) continue;
        Matrix blk(m.field(), d, here.size());
        for (std::size_t c = 0; c < here.size(); ++c) {
            const Matrix& col = incs[here[c]].blocks.at(p);
            for (std::size_t r = 0; r < d; ++r) blk.set(r, c, col.at(r, 0));
        }
        phi.blocks.emplace(p, std::move(blk));
    }
    ConstructionParams p;
    Plan plan = main_interval_plan(spans, p);
    for (std::size_t k = 0; k < spans.size(); ++k) plan.layers.back().ids[k] = {1, k + 1};
    PlanLayer top;
    top.module = m;
    top.ids.push_back({1, std::nullopt});
    plan.push(std::move(top), PlanMap{{}, phi});
    LayeredConstruction out = finalize(plan, m.field(), m.n(), "main-general", 6);
    if (std::any_of(out.shift.begin(), out.shift.end(), [](int s) { return s != 0; }))
        throw ConstructionError("main construction needed a shift");
    out.params = p;
    return out;
}

ZigzagEmbedding embed_zigzag(const ZigzagModule& z) {
    if (!z.interval_form) throw ConstructionError("zigzag has no interval form");
    if (auto err = check_zigzag(z); !err.empty()) throw ConstructionError("invalid zigzag: " + err);
    if (z.interval_form->empty()) throw ConstructionError("empty input");
    int backward = static_cast<int>(std::count(z.orientations.begin(), z.orientations.end(), Orientation::backward));
    std::vector<LatticePoint> pts{LatticePoint{0, backward}};
    for (auto o : z.orientations)
        pts.push_back(o == Orientation::forward ? pts.back().stepped(0, 1) : pts.back().stepped(1, -1));
    ZigzagEmbedding out;
    for (const auto& [a, b] : *z.interval_form) {
        std::set<LatticePoint> seg(pts.begin() + a, pts.begin() + b + 1);
        out.summands.push_back(require_interval(seg, "zigzag segment"));
    }
    out.module = interval_sum(out.summands, z.field, 2);
    out.path = make_path(pts);
    return out;
}

ZigzagLift lift_zigzag(const ZigzagModule& z) {
    ZigzagLift out;
    out.embedding = embed_zigzag(z);
    out.construction = main_interval(out.embedding.summands, z.field);
    out.construction.method = "lift-zigzag";
    LatticePoint by(out.construction.shift);
    std::vector<LatticePoint> lifted;
    for (const auto& p : out.embedding.path.points) lifted.push_back((p + by).extended(out.construction.m_layer));
    out.path = make_path(lifted);
    return out;
}

const std::vector<std::string>& method_names() {
    static const std::vector<std::string> names{"main-rect", "dual-rect",    "glued-rect",  "main-int",
                                                "dual-int",  "glued-int",    "main-general", "lift-zigzag"};
    return names;
}

}  // namespace pmforge
