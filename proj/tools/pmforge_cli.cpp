// pmforge command-line front end.
//
// Exit codes: 0 pass, 1 property failure, 2 usage or parse error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pmforge/errors.hpp"
#include "pmforge/forge.hpp"
#include "pmforge/homlab.hpp"
#include "pmforge/intervals.hpp"
#include "pmforge/io.hpp"
#include "pmforge/suite.hpp"
#include "pmforge/zigzag.hpp"

using namespace pmforge;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

// Raised for inputs that are well formed but unusable by the requested command.
struct UsageError : Error {
    using Error::Error;
};

struct FieldChoice {
    Field field = Field::prime(2);
    // An explicit --field replaces the field stored in input files.
    bool forced = false;
};

FieldChoice choose_field(const std::string& flag) {
    FieldChoice c;
    if (!flag.empty()) {
        c.field = parse_field_name(flag);
        c.forced = true;
    } else if (const char* env = std::getenv("PERSIST_FIELD"); env && *env) {
        c.field = parse_field_name(env);
    }
    return c;
}

Json load(const std::string& path, const FieldChoice& fc) {
    Json j = path == "-" ? [] {
        try {
            return Json::parse(std::cin);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("stdin: ") + e.what());
        }
    }()
                         : read_json_file(path);
    if (fc.forced && j.is_object()) j.erase("field");
    return j;
}

bool is_zigzag(const Json& j) { return j.is_object() && j.contains("orientations"); }

void emit(const Json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw UsageError("cannot write " + out_path);
    f << j.dump(2) << '\n';
}

std::string violation_line(const Violation& v) { return v.point.to_string() + ": " + v.message; }

// ---------------------------------------------------------------------------

struct ValidateArgs {
    std::string file, field;
    bool grid = false;
};

int cmd_validate(const ValidateArgs& a) {
    FieldChoice fc = choose_field(a.field);
    Json j = load(a.file, fc);
    if (is_zigzag(j)) {
        ZigzagModule z = zigzag_from_json(j, fc.field);
        std::string bad = check_zigzag(z);
        if (!bad.empty()) {
            std::cout << "invalid: " << bad << '\n';
            return kFail;
        }
        std::cout << "ok: zigzag of length " << z.dims.size() << " over " << z.field.name() << '\n';
        return kPass;
    }
    ModuleDocument d = document_from_json(j, fc.field);
    if (a.grid) std::cout << format_grid(d.module);
    auto v = validate(d.module);
    if (!v.empty()) {
        std::cout << "invalid: " << v.size() << " violation" << (v.size() == 1 ? "" : "s") << '\n';
        for (const auto& x : v) std::cout << "  " << violation_line(x) << '\n';
        return kFail;
    }
    std::cout << "ok: n=" << d.module.n() << " total_dim=" << d.module.total_dim() << " over "
              << d.module.field().name() << '\n';
    return kPass;
}

// ---------------------------------------------------------------------------

struct ConstructArgs {
    std::string file, method, field, params, out;
    bool verify = false, grid = false;
    std::uint64_t seed = 0;
};

RunReport verify_construction(const LayeredConstruction& c, const PersistenceModule& input, const ConstructArgs& a) {
    RunReport r;
    r.suite = "construct";
    r.method = c.method;
    r.seed = a.seed;
    r.field = input.field().name();
    r.digest = module_digest(input);
    auto t = std::chrono::steady_clock::now();
    auto v = validate(c.result);
    r.layer_equal = layer_equal(c, input);
    r.end_dim = end_dim(c.result);
    r.verdict = r.end_dim == 1 ? verdict_name(Verdict::indecomposable_dim1)
                               : verdict_name(indecomposable(c.result).verdict);
    r.pass = v.empty() && r.layer_equal && r.end_dim == 1;
    if (!v.empty()) r.detail = "invalid result: " + violation_line(v[0]);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
    return r;
}

std::vector<Rectangle> need_rectangles(const ModuleDocument& d) {
    if (d.summands.empty()) throw ConstructionError("rectangular methods need a summand list");
    auto r = d.rectangles();
    if (!r) throw ConstructionError("rectangular methods need every summand to be a rectangle");
    return *r;
}

std::vector<IntervalSupport> need_supports(const ModuleDocument& d) {
    if (d.summands.empty()) throw ConstructionError("interval methods need a summand list");
    return d.supports();
}

int cmd_construct(const ConstructArgs& a) {
    FieldChoice fc = choose_field(a.field);
    Json j = load(a.file, fc);
    const std::string& m = a.method;

    std::optional<ConstructionParams> params;
    if (!a.params.empty()) params = params_from_json(read_json_file(a.params));
    if (params && m != "main-rect" && m != "dual-rect") throw UsageError("--params applies to main-rect and dual-rect");

    LayeredConstruction c;
    PersistenceModule input(fc.field, 1);
    Json extra;
    if (m == "lift-zigzag") {
        if (!is_zigzag(j)) throw UsageError("lift-zigzag needs a zigzag input");
        ZigzagModule z = zigzag_from_json(j, fc.field);
        ZigzagLift lift = lift_zigzag(z);
        c = lift.construction;
        input = lift.embedding.module;
        ZigzagModule back = restrict_path(c.result, lift.path);
        extra["path"] = path_to_json(lift.path);
        extra["round_trip"] = zigzag_equivalent(back, z);
    } else {
        if (is_zigzag(j)) throw UsageError(m + " needs a module input");
        ModuleDocument d = document_from_json(j, fc.field);
        input = d.module;
        const Field& f = d.module.field();
        if (m == "main-rect")
            c = main_rectangular(need_rectangles(d), f, params);
        else if (m == "dual-rect")
            c = dual_rectangular(need_rectangles(d), f, params);
        else if (m == "glued-rect")
            c = glued_rectangular(need_rectangles(d), f);
        else if (m == "main-int")
            c = main_interval(need_supports(d), f);
        else if (m == "dual-int")
            c = dual_interval(need_supports(d), f);
        else if (m == "glued-int")
            c = glued_interval(need_supports(d), f);
        else
            c = main_general(d.module);
    }

    Json out = construction_to_json(c);
    for (auto& [k, v] : extra.items()) out[k] = v;
    bool ok = !extra.contains("round_trip") || extra["round_trip"].get<bool>();
    if (a.verify) {
        RunReport r = verify_construction(c, input, a);
        out["report"] = report_to_json(r);
        ok = ok && r.pass;
        std::cerr << c.method << ": end_dim=" << r.end_dim << " layer_equal=" << (r.layer_equal ? "true" : "false")
                  << " verdict=" << r.verdict;
        if (extra.contains("round_trip")) std::cerr << " round_trip=" << (extra["round_trip"].get<bool>() ? "true" : "false");
        std::cerr << '\n';
    }
    if (a.grid) std::cerr << format_grid(c.result);
    emit(out, a.out);
    return ok ? kPass : kFail;
}

// ---------------------------------------------------------------------------

struct HomArgs {
    std::string a, b, field;
    bool basis = false;
};

std::optional<IntervalSupport> single_interval(const ModuleDocument& d) {
    if (d.summands.size() == 1) return d.summands[0].support;
    return std::nullopt;
}

int cmd_hom(const HomArgs& a) {
    FieldChoice fc = choose_field(a.field);
    ModuleDocument da = document_from_json(load(a.a, fc), fc.field);
    ModuleDocument db = document_from_json(load(a.b, fc), fc.field);
    if (da.module.n() != db.module.n()) throw UsageError("modules live in different dimensions");
    if (!(da.module.field() == db.module.field())) throw UsageError("modules are over different fields");
    HomBasis h = hom_basis(da.module, db.module);
    std::cout << "dim Hom = " << h.dim() << '\n';
    int code = kPass;
    auto ia = single_interval(da), ib = single_interval(db);
    if (ia && ib) {
        ComponentReport rep = intersect_components(*ia, *ib);
        std::size_t viable = 0;
        for (const auto& c : rep.components) viable += c.viable ? 1 : 0;
        std::cout << "components = " << rep.components.size() << ", viable = " << viable << '\n';
        if (viable != h.dim()) {
            std::cout << "mismatch between viable components and hom basis\n";
            code = kFail;
        }
    }
    if (a.basis) {
        Json arr = Json::array();
        for (const auto& e : h.elements) arr.push_back(hom_to_json(e));
        std::cout << arr.dump(2) << '\n';
    }
    return code;
}

// ---------------------------------------------------------------------------

struct SuiteArgs {
    std::uint64_t seed = 1;
    std::size_t count = 0, workers = 0;
    std::string fields = "2,5", filter, replay;
    bool json = false;
};

std::vector<std::int64_t> parse_fields(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        Field f = parse_field_name(item);
        if (!f.is_prime()) throw UsageError("verify-suite runs over prime fields only");
        out.push_back(f.characteristic());
    }
    if (out.empty()) throw UsageError("--fields is empty");
    return out;
}

void print_report(const RunReport& r, bool json) {
    if (json) {
        std::cout << report_to_json(r).dump() << '\n';
        return;
    }
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.suite << " #" << r.instance << ' ' << r.method << ' ' << r.field
              << " end_dim=" << r.end_dim << " verdict=" << r.verdict << " layer_equal=" << (r.layer_equal ? 1 : 0);
    if (!r.detail.empty() && !r.pass) std::cout << " (" << r.detail << ')';
    std::cout << '\n';
    if (!r.pass) std::cout << "  replay: " << r.replay << '\n';
}

int cmd_verify_suite(const SuiteArgs& a) {
    std::vector<RunReport> reports;
    auto t = std::chrono::steady_clock::now();
    if (!a.replay.empty()) {
        std::string text = a.replay;
        if (text.front() != '{') {
            std::ifstream f(text);
            if (!f) throw ParseError("cannot read " + text);
            text.assign(std::istreambuf_iterator<char>(f), {});
        }
        reports = replay_instance(text);
        for (const auto& r : reports) print_report(r, a.json);
    } else {
        SuiteOptions o;
        o.seed = a.seed;
        o.count = a.count;
        o.workers = a.workers;
        o.filter = a.filter;
        o.fields = parse_fields(a.fields);
        if (!a.filter.empty()) {
            bool any = false;
            for (const auto& s : suite_names()) any = any || s.find(a.filter) != std::string::npos;
            if (!any) throw UsageError("no suite matches \"" + a.filter + "\"");
        }
        reports = run_verify_suite(o, [&](const RunReport& r) { print_report(r, a.json); });
    }
    std::size_t failed = 0;
    for (const auto& r : reports) failed += r.pass ? 0 : 1;
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
    std::ostream& s = a.json ? std::cerr : std::cout;
    s << "summary: " << reports.size() - failed << "/" << reports.size() << " passed in " << secs << " s\n";
    return failed ? kFail : kPass;
}

// ---------------------------------------------------------------------------

struct RestrictArgs {
    std::string file, field, path, out;
    std::optional<int> layer;
    bool grid = false;
};

int cmd_restrict(const RestrictArgs& a) {
    if (a.layer.has_value() == !a.path.empty()) throw UsageError("give exactly one of --layer or --path");
    FieldChoice fc = choose_field(a.field);
    ModuleDocument d = document_from_json(load(a.file, fc), fc.field);
    if (a.layer) {
        if (d.module.n() < 2) throw UsageError("--layer needs n >= 2");
        PersistenceModule r = restrict_hyperplane(d.module, *a.layer);
        if (a.grid) std::cerr << format_grid(r);
        emit(module_to_json(r), a.out);
        return kPass;
    }
    PathSpec p = path_from_json(read_json_file(a.path));
    emit(zigzag_to_json(restrict_path(d.module, p)), a.out);
    return kPass;
}

// ---------------------------------------------------------------------------

struct EmbedArgs {
    std::string file, field, out;
    bool grid = false;
};

int cmd_embed(const EmbedArgs& a) {
    FieldChoice fc = choose_field(a.field);
    Json j = load(a.file, fc);
    if (!is_zigzag(j)) throw UsageError("embed-zigzag needs a zigzag input");
    ZigzagModule z = zigzag_from_json(j, fc.field);
    ZigzagEmbedding e = embed_zigzag(z);
    ModuleDocument d;
    d.module = e.module;
    for (std::size_t i = 0; i < e.summands.size(); ++i) d.summands.push_back({"I" + std::to_string(i), e.summands[i]});
    Json out = document_to_json(d);
    out["path"] = path_to_json(e.path);
    bool round_trip = zigzag_equivalent(restrict_path(e.module, e.path), z);
    out["round_trip"] = round_trip;
    if (a.grid) std::cerr << format_grid(e.module);
    emit(out, a.out);
    return round_trip ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Indecomposable extensions of finite persistence modules"};
    app.require_subcommand(1);
    const std::string field_help = "Field: 2, 5, GF(7), Q (default GF(2), or $PERSIST_FIELD)";

    ValidateArgs va;
    auto* v = app.add_subcommand("validate", "Check a module or zigzag file");
    v->add_option("file", va.file, "JSON input, or - for stdin")->required();
    v->add_option("--field", va.field, field_help);
    v->add_flag("--grid", va.grid, "Print dims per lattice point");

    ConstructArgs ca;
    auto* c = app.add_subcommand("construct", "Build an indecomposable extension");
    c->add_option("file", ca.file, "JSON input, or - for stdin")->required();
    c->add_option("--method", ca.method, "Construction")->required()->check(CLI::IsMember(method_names()));
    c->add_option("--field", ca.field, field_help);
    c->add_option("--params", ca.params, "Rectangle parameter file (main-rect, dual-rect)");
    c->add_option("--seed", ca.seed, "Seed recorded in the report");
    c->add_option("-o,--out", ca.out, "Write JSON here instead of stdout");
    c->add_flag("--verify", ca.verify, "Check validity, end_dim and layer equality");
    c->add_flag("--grid", ca.grid, "Print the result grid to stderr");

    HomArgs ha;
    auto* h = app.add_subcommand("hom", "Dimension of Hom(A, B)");
    h->add_option("a", ha.a, "Source module")->required();
    h->add_option("b", ha.b, "Target module")->required();
    h->add_option("--field", ha.field, field_help);
    h->add_flag("--basis", ha.basis, "Print a basis");

    SuiteArgs sa;
    auto* s = app.add_subcommand("verify-suite", "Run the randomized verification suites");
    s->add_option("--seed", sa.seed, "Run seed");
    s->add_option("--count", sa.count, "Instances per suite (0 = suite default)");
    s->add_option("--fields", sa.fields, "Comma-separated primes");
    s->add_option("--workers", sa.workers, "Worker threads (0 = hardware)");
    s->add_option("--filter", sa.filter, "Only suites whose name contains this");
    s->add_option("--replay", sa.replay, "Replay a serialized instance (text or file)");
    s->add_flag("--json", sa.json, "One JSON report per line");

    RestrictArgs ra;
    auto* r = app.add_subcommand("restrict", "Restrict to a hyperplane or a lattice path");
    r->add_option("file", ra.file, "JSON module")->required();
    r->add_option("--layer", ra.layer, "Value of the last coordinate");
    r->add_option("--path", ra.path, "Path file ({\"points\": [...]})");
    r->add_option("--field", ra.field, field_help);
    r->add_option("-o,--out", ra.out, "Write JSON here instead of stdout");
    r->add_flag("--grid", ra.grid, "Print the restricted grid to stderr");

    EmbedArgs ea;
    auto* e = app.add_subcommand("embed-zigzag", "Embed a zigzag as a 2D interval sum along a staircase");
    e->add_option("file", ea.file, "JSON zigzag")->required();
    e->add_option("--field", ea.field, field_help);
    e->add_option("-o,--out", ea.out, "Write JSON here instead of stdout");
    e->add_flag("--grid", ea.grid, "Print the embedded grid to stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (*v) return cmd_validate(va);
        if (*c) return cmd_construct(ca);
        if (*h) return cmd_hom(ha);
        if (*s) return cmd_verify_suite(sa);
        if (*r) return cmd_restrict(ra);
        if (*e) return cmd_embed(ea);
    } catch (const ConstructionError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kFail;
    } catch (const HomomorphismError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kFail;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kUsage;
    } catch (const nlohmann::json::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
