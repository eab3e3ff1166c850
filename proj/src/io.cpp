#include "pmforge/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pmforge/errors.hpp"

namespace pmforge {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const Json& member(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) fail(std::string("missing key \"") + key + "\"");
    return j.at(key);
}

std::int64_t as_int(const Json& j, const std::string& what) {
    if (!j.is_number_integer()) fail(what + " must be an integer");
    return j.get<std::int64_t>();
}

std::size_t as_size(const Json& j, const std::string& what) {
    auto v = as_int(j, what);
    if (v < 0) fail(what + " must be nonnegative");
    return static_cast<std::size_t>(v);
}

Json scalar_to_json(const Field& f, Scalar s) {
    if (f.is_prime()) return s.num;
    return f.format(s);
}

Scalar scalar_from_json(const Json& j, const Field& f) {
    if (j.is_number_integer()) {
        auto v = j.get<std::int64_t>();
        if (f.is_prime() && (v < 0 || v >= f.characteristic()))
            fail("entry " + std::to_string(v) + " outside [0," + std::to_string(f.characteristic()) + ")");
        return f.from_int(v);
    }
    if (j.is_string()) {
        try {
            return f.parse(j.get<std::string>());
        } catch (const Error& e) {
            fail(e.what());
        }
    }
    fail("matrix entry must be an integer or a string");
}

}  // namespace

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        fail(path + ": " + e.what());
    }
}

Field parse_field_name(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "q" || t == "rational" || t == "rationals") return Field::rational();
    if (t.rfind("gf(", 0) == 0 && t.back() == ')') t = t.substr(3, t.size() - 4);
    else if (t.rfind("gf", 0) == 0) t = t.substr(2);
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        fail("unknown field \"" + text + "\"");
    try {
        return Field::prime(std::stoll(t));
    } catch (const Error& e) {
        fail(e.what());
    } catch (const std::out_of_range&) {
        fail("field characteristic out of range");
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
}

Json field_to_json(const Field& f) {
    if (f.is_prime()) return Json{{"prime", f.characteristic()}};
    return "rational";
}

Field field_from_json(const Json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "rational") return Field::rational();
        return parse_field_name(j.get<std::string>());
    }
    try {
        return Field::prime(as_int(member(j, "prime"), "prime"));
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        fail(e.what());
    }
}

Json point_to_json(const LatticePoint& p) { return p.coords(); }

LatticePoint point_from_json(const Json& j) {
    if (!j.is_array()) fail("point must be an array of integers");
    std::vector<int> c;
    for (const auto& x : j) c.push_back(static_cast<int>(as_int(x, "point coordinate")));
    return LatticePoint(c);
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m.field(), m.at(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j, const Field& f, std::size_t rows, std::size_t cols) {
    if (!j.is_array() || j.size() != rows)
        fail("matrix must have " + std::to_string(rows) + " rows");
    Matrix m(f, rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            fail("matrix row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
        for (std::size_t c = 0; c < cols; ++c) m.set(r, c, scalar_from_json(j[r][c], f));
    }
    return m;
}

Json module_to_json(const PersistenceModule& m) {
    Json out;
    out["field"] = field_to_json(m.field());
    out["n"] = m.n();
    Json dims = Json::array();
    for (const auto& [p, d] : m.dims()) dims.push_back({{"point", point_to_json(p)}, {"dim", d}});
    out["dims"] = std::move(dims);
    Json edges = Json::array();
    for (const auto& [key, mat] : m.edges())
        edges.push_back({{"point", point_to_json(key.first)}, {"axis", key.second}, {"matrix", matrix_to_json(mat)}});
    out["edges"] = std::move(edges);
    return out;
}

PersistenceModule module_from_json(const Json& j, const Field& default_field) {
    if (!j.is_object()) fail("module must be a JSON object");
    Field f = j.contains("field") ? field_from_json(j.at("field")) : default_field;
    std::size_t n = as_size(member(j, "n"), "n");
    if (n == 0) fail("n must be positive");
    PersistenceModule m(f, n);
    auto pt = [&](const Json& x) {
        LatticePoint p = point_from_json(x);
        if (p.dim() != n) fail("point " + p.to_string() + " does not have " + std::to_string(n) + " coordinates");
        if (!p.nonnegative()) fail("point " + p.to_string() + " has a negative coordinate");
        return p;
    };
    if (j.contains("dims")) {
        for (const auto& d : j.at("dims")) {
            LatticePoint p = pt(member(d, "point"));
            if (m.dim(p) != 0) fail("point " + p.to_string() + " listed twice");
            m.set_dim(p, as_size(member(d, "dim"), "dim"));
        }
    }
    if (j.contains("edges")) {
        for (const auto& e : j.at("edges")) {
            LatticePoint p = pt(member(e, "point"));
            std::size_t axis = as_size(member(e, "axis"), "axis");
            if (axis >= n) fail("axis " + std::to_string(axis) + " out of range");
            Matrix mat = matrix_from_json(member(e, "matrix"), f, m.dim(p.stepped(axis, 1)), m.dim(p));
            try {
                m.set_edge(p, axis, std::move(mat));
            } catch (const Error& err) {
                fail(err.what());
            }
        }
    }
    return m;
}

Json support_to_json(const IntervalSupport& s) {
    Json pts = Json::array();
    for (const auto& p : s.points()) pts.push_back(point_to_json(p));
    return pts;
}

IntervalSupport support_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) fail("support must be a nonempty array of points");
    std::set<LatticePoint> pts;
    for (const auto& x : j) {
        LatticePoint p = point_from_json(x);
        if (!p.nonnegative()) fail("support point " + p.to_string() + " is negative");
        pts.insert(p);
    }
    auto chk = check_interval(pts);
    if (!chk) fail("support is not an interval: " + chk.reason);
    return *chk.support;
}

std::vector<IntervalSupport> ModuleDocument::supports() const {
    std::vector<IntervalSupport> out;
    for (const auto& s : summands) out.push_back(s.support);
    return out;
}

std::optional<std::vector<Rectangle>> ModuleDocument::rectangles() const {
    std::vector<Rectangle> out;
    for (const auto& s : summands) {
        Box b = s.support.box();
        if (b.volume() != s.support.size()) return std::nullopt;
        out.push_back({b.lo, b.hi});
    }
    return out;
}

Json summand_to_json(const std::string& label, const IntervalSupport& s) {
    Json out{{"label", label}};
    Box b = s.box();
    if (b.volume() == s.size())
        out["rectangle"] = {{"lo", point_to_json(b.lo)}, {"hi", point_to_json(b.hi)}};
    else
        out["support"] = support_to_json(s);
    return out;
}

ModuleDocument document_from_json(const Json& j, const Field& default_field) {
    if (!j.is_object()) fail("module must be a JSON object");
    ModuleDocument doc;
    Field f = j.contains("field") ? field_from_json(j.at("field")) : default_field;
    if (j.contains("summands")) {
        std::size_t k = 0;
        for (const auto& s : j.at("summands")) {
            ++k;
            std::string label = s.contains("label") ? s.at("label").get<std::string>() : "I" + std::to_string(k);
            if (s.contains("rectangle")) {
                LatticePoint lo = point_from_json(member(s.at("rectangle"), "lo"));
                LatticePoint hi = point_from_json(member(s.at("rectangle"), "hi"));
                if (lo.dim() != hi.dim() || !lo.leq(hi) || !lo.nonnegative())
                    fail("rectangle " + label + " needs 0 <= lo <= hi");
                doc.summands.push_back({label, IntervalSupport::rectangle({lo, hi})});
            } else {
                doc.summands.push_back({label, support_from_json(member(s, "support"))});
            }
        }
        if (doc.summands.empty()) fail("summand list is empty");
        std::size_t n = doc.summands[0].support.n();
        for (const auto& s : doc.summands)
            if (s.support.n() != n) fail("summands of mixed arity");
        if (j.contains("n") && as_size(j.at("n"), "n") != n) fail("n disagrees with the summands");
    }
    if (j.contains("dims")) {
        doc.module = module_from_json(j, f);
        if (!doc.summands.empty() && !(interval_sum(doc.supports(), f, doc.module.n()) == doc.module))
            fail("module does not equal the direct sum of its listed summands");
    } else if (!doc.summands.empty()) {
        doc.module = interval_sum(doc.supports(), f, doc.summands[0].support.n());
    } else {
        doc.module = module_from_json(j, f);
    }
    return doc;
}

Json document_to_json(const ModuleDocument& d) {
    Json out = module_to_json(d.module);
    if (!d.summands.empty()) {
        Json s = Json::array();
        for (const auto& x : d.summands) s.push_back(summand_to_json(x.label, x.support));
        out["summands"] = std::move(s);
    }
    return out;
}

Json hom_to_json(const HomElement& f) {
    Json out = Json::array();
    for (const auto& [p, blk] : f.blocks) out.push_back({{"point", point_to_json(p)}, {"matrix", matrix_to_json(blk)}});
    return out;
}

HomElement hom_from_json(const Json& j, const PersistenceModule& source, const PersistenceModule& target) {
    if (!j.is_array()) fail("homomorphism must be an array of {point, matrix}");
    HomElement f;
    for (const auto& rec : j) {
        LatticePoint p = point_from_json(member(rec, "point"));
        Matrix m = matrix_from_json(member(rec, "matrix"), source.field(), target.dim(p), source.dim(p));
        if (!m.is_zero()) f.blocks.emplace(p, std::move(m));
    }
    return f;
}

Json zigzag_to_json(const ZigzagModule& z) {
    Json out;
    out["field"] = field_to_json(z.field);
    out["orientations"] = format_orientations(z.orientations);
    out["dims"] = z.dims;
    Json maps = Json::array();
    for (const auto& m : z.maps) maps.push_back(matrix_to_json(m));
    out["maps"] = std::move(maps);
    if (z.interval_form) {
        Json bars = Json::array();
        for (const auto& [a, b] : *z.interval_form) bars.push_back({a, b});
        out["bars"] = std::move(bars);
    }
    return out;
}

ZigzagModule zigzag_from_json(const Json& j, const Field& default_field) {
    if (!j.is_object()) fail("zigzag must be a JSON object");
    Field f = j.contains("field") ? field_from_json(j.at("field")) : default_field;
    auto o = parse_orientations(member(j, "orientations").get<std::string>());
    if (j.contains("bars")) {
        std::vector<Bar> bars;
        for (const auto& b : j.at("bars")) {
            if (!b.is_array() || b.size() != 2) fail("bar must be [a, b]");
            bars.emplace_back(static_cast<int>(as_int(b[0], "bar start")), static_cast<int>(as_int(b[1], "bar end")));
            if (bars.back().first > bars.back().second) fail("bar with start after end");
        }
        ZigzagModule z;
        try {
            z = zigzag_from_bars(f, o, bars);
        } catch (const Error& e) {
            fail(e.what());
        }
        if (j.contains("maps")) {
            ZigzagModule given = zigzag_from_json(Json{{"field", field_to_json(f)},
                                                       {"orientations", j.at("orientations")},
                                                       {"dims", member(j, "dims")},
                                                       {"maps", j.at("maps")}},
                                                  f);
            if (!zigzag_equivalent(given, z)) fail("zigzag maps disagree with the listed bars");
            given.interval_form = z.interval_form;
            return given;
        }
        return z;
    }
    ZigzagModule z;
    z.field = f;
    z.orientations = o;
    for (const auto& d : member(j, "dims")) z.dims.push_back(as_size(d, "dim"));
    if (z.dims.size() != o.size() + 1) fail("zigzag needs one more dim than orientations");
    const Json& maps = member(j, "maps");
    if (!maps.is_array() || maps.size() != o.size()) fail("zigzag needs one map per arrow");
    for (std::size_t k = 0; k < o.size(); ++k) {
        bool fwd = o[k] == Orientation::forward;
        std::size_t rows = fwd ? z.dims[k + 1] : z.dims[k], cols = fwd ? z.dims[k] : z.dims[k + 1];
        z.maps.push_back(matrix_from_json(maps[k], f, rows, cols));
    }
    return z;
}

Json path_to_json(const PathSpec& p) {
    Json pts = Json::array();
    for (const auto& x : p.points) pts.push_back(point_to_json(x));
    return Json{{"points", std::move(pts)}};
}

PathSpec path_from_json(const Json& j) {
    const Json& pts = j.is_array() ? j : member(j, "points");
    std::vector<LatticePoint> out;
    for (const auto& x : pts) out.push_back(point_from_json(x));
    try {
        return make_path(out);
    } catch (const Error& e) {
        fail(e.what());
    }
}

Json params_to_json(const ConstructionParams& p) {
    Json out;
    out["mode"] = p.mode == RectMode::main ? "main" : "dual";
    auto list = [](const std::vector<LatticePoint>& v) {
        Json a = Json::array();
        for (const auto& x : v) a.push_back(point_to_json(x));
        return a;
    };
    out["beta_primes"] = list(p.beta_primes);
    out["alpha_primes"] = list(p.alpha_primes);
    out["mu"] = point_to_json(p.mu);
    out["summand_order"] = p.summand_order;
    return out;
}

ConstructionParams params_from_json(const Json& j) {
    ConstructionParams p;
    std::string mode = member(j, "mode").get<std::string>();
    if (mode != "main" && mode != "dual") fail("params mode must be main or dual");
    p.mode = mode == "main" ? RectMode::main : RectMode::dual;
    for (const auto& x : member(j, "beta_primes")) p.beta_primes.push_back(point_from_json(x));
    for (const auto& x : member(j, "alpha_primes")) p.alpha_primes.push_back(point_from_json(x));
    p.mu = point_from_json(member(j, "mu"));
    if (j.contains("summand_order"))
        for (const auto& x : j.at("summand_order")) p.summand_order.push_back(as_size(x, "summand_order entry"));
    else
        for (std::size_t k = 0; k < p.beta_primes.size(); ++k) p.summand_order.push_back(k);
    return p;
}

Json construction_to_json(const LayeredConstruction& c) {
    Json out;
    out["method"] = c.method;
    out["m_layer"] = c.m_layer;
    out["shift"] = c.shift;
    Json layers = Json::array();
    for (const auto& l : c.layers) {
        Json s = Json::array();
        for (std::size_t k = 0; k < l.summands.size(); ++k) s.push_back(summand_to_json(l.labels[k].to_string(), l.summands[k]));
        Json layer{{"index", l.index}, {"summands", std::move(s)}};
        if (l.summands.empty() && !l.labels.empty()) layer["label"] = l.labels[0].to_string();
        layers.push_back(std::move(layer));
    }
    out["layers"] = std::move(layers);
    if (c.params) out["params"] = params_to_json(*c.params);
    if (c.dual_params) out["dual_params"] = params_to_json(*c.dual_params);
    out["result"] = module_to_json(c.result);
    return out;
}

Json report_to_json(const RunReport& r) {
    return Json{{"suite", r.suite},     {"method", r.method},         {"instance", r.instance},
                {"seed", r.seed},       {"field", r.field},           {"digest", r.digest},
                {"end_dim", r.end_dim}, {"verdict", r.verdict},       {"layer_equal", r.layer_equal},
                {"pass", r.pass},       {"seconds", r.seconds},       {"detail", r.detail},
                {"replay", r.replay}};
}

RunReport report_from_json(const Json& j) {
    RunReport r;
    r.suite = member(j, "suite").get<std::string>();
    r.method = member(j, "method").get<std::string>();
    r.instance = member(j, "instance").get<std::size_t>();
    r.seed = member(j, "seed").get<std::uint64_t>();
    r.field = member(j, "field").get<std::string>();
    r.digest = member(j, "digest").get<std::string>();
    r.end_dim = member(j, "end_dim").get<std::size_t>();
    r.verdict = member(j, "verdict").get<std::string>();
    r.layer_equal = member(j, "layer_equal").get<bool>();
    r.pass = member(j, "pass").get<bool>();
    r.seconds = member(j, "seconds").get<double>();
    r.detail = member(j, "detail").get<std::string>();
    r.replay = member(j, "replay").get<std::string>();
    return r;
}

std::string module_digest(const PersistenceModule& m) {
    std::string text = module_to_json(m).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_grid(const PersistenceModule& m) {
    if (m.n() > 2) throw ShapeError("grid view needs n <= 2");
    int xmax = 0, ymax = 0;
    std::size_t width = 1;
    for (const auto& [p, d] : m.dims()) {
        xmax = std::max(xmax, p[0]);
        if (m.n() == 2) ymax = std::max(ymax, p[1]);
        width = std::max(width, std::to_string(d).size());
    }
    const std::size_t label = std::to_string(ymax).size();
    std::ostringstream out;
    for (int y = ymax; y >= 0; --y) {
        std::string row = std::to_string(y);
        out << std::string(label - row.size(), ' ') << row << " |";
        for (int x = 0; x <= xmax; ++x) {
            LatticePoint p = m.n() == 2 ? LatticePoint{x, y} : LatticePoint{x};
            std::size_t d = m.dim(p);
            std::string cell = d ? std::to_string(d) : ".";
            out << ' ' << std::string(width - cell.size(), ' ') << cell;
        }
        out << '\n';
    }
    out << std::string(label, ' ') << " +" << std::string((xmax + 1) * (width + 1), '-') << '\n';
    out << std::string(label + 2, ' ');
    for (int x = 0; x <= xmax; ++x) {
        std::string c = std::to_string(x % 10);
        out << ' ' << std::string(width - 1, ' ') << c;
    }
    out << '\n';
    return out.str();
}

}  // namespace pmforge
