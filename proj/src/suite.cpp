#include "pmforge/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include "pmforge/errors.hpp"
#include "pmforge/forge.hpp"
#include "pmforge/homlab.hpp"
#include "pmforge/io.hpp"

namespace pmforge {

Scalar random_scalar(const Field& f, Rng& rng) {
    if (f.is_prime())
        return f.from_int(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(f.characteristic())));
    return f.from_int(static_cast<std::int64_t>(rng() % 7) - 3);
}

Matrix random_invertible(const Field& f, std::size_t n, Rng& rng) {
    while (true) {
        Matrix m(f, n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) m.set(r, c, random_scalar(f, rng));
        if (rank(m) == n) return m;
    }
}

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

LatticePoint random_point(std::size_t n, int extent, Rng& rng) {
    std::vector<int> c(n);
    for (auto& x : c) x = uniform(rng, 0, extent);
    return LatticePoint(c);
}

}  // namespace

IntervalSupport random_interval_support(std::size_t n, int extent, Rng& rng) {
    const LatticePoint lo = LatticePoint::zero(n), hi = LatticePoint::constant(n, extent);
    while (true) {
        std::vector<LatticePoint> a(1 + rng() % 3), b(1 + rng() % 3);
        for (auto& p : a) p = random_point(n, extent, rng);
        for (auto& p : b) p = random_point(n, extent, rng);
        std::set<LatticePoint> s;
        for (const auto& g : grid_points(lo, hi)) {
            bool above = std::any_of(a.begin(), a.end(), [&](const LatticePoint& p) { return p.leq(g); });
            bool below = std::any_of(b.begin(), b.end(), [&](const LatticePoint& p) { return g.leq(p); });
            if (above && below) s.insert(g);
        }
        if (s.empty()) continue;
        // keep the component of a random point
        auto it = s.begin();
        std::advance(it, static_cast<long>(rng() % s.size()));
        std::set<LatticePoint> comp{*it};
        std::vector<LatticePoint> stack{*it};
        while (!stack.empty()) {
            LatticePoint p = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n; ++j)
                for (int d : {-1, 1}) {
                    LatticePoint q = p.stepped(j, d);
                    if (s.count(q) && comp.insert(q).second) stack.push_back(q);
                }
        }
        return require_interval(comp, "random support");
    }
}

std::vector<Rectangle> random_rectangles(std::size_t n, int extent, std::size_t max_count, Rng& rng) {
    std::size_t count = 1 + rng() % max_count;
    std::vector<Rectangle> out;
    for (std::size_t i = 0; i < count; ++i) {
        LatticePoint a = random_point(n, extent, rng), b = random_point(n, extent, rng);
        out.push_back({LatticePoint::meet(a, b), LatticePoint::join(a, b)});
    }
    return out;
}

PersistenceModule random_conjugate(const PersistenceModule& m, Rng& rng) {
    const Field& f = m.field();
    std::map<LatticePoint, Matrix> p, pinv;
    for (const auto& [a, d] : m.dims()) {
        Matrix q = random_invertible(f, d, rng);
        pinv.emplace(a, *inverse(q));
        p.emplace(a, std::move(q));
    }
    PersistenceModule out(f, m.n());
    for (const auto& [a, d] : m.dims()) out.set_dim(a, d);
    for (const auto& [key, e] : m.edges()) {
        const auto& [a, j] = key;
        out.set_edge(a, j, p.at(a.stepped(j, 1)) * e * pinv.at(a));
    }
    return out;
}

namespace {

PersistenceModule random_module_raw(const Field& f, const RandomModuleSpec& spec, std::size_t n, Rng& rng) {
    if (n == 1) {
        std::size_t count = rng() % (spec.max_summands + 1);
        std::vector<IntervalSupport> bars;
        for (std::size_t i = 0; i < count; ++i) {
            int a = uniform(rng, 0, spec.extent), b = uniform(rng, 0, spec.extent);
            bars.push_back(IntervalSupport::rectangle({LatticePoint{std::min(a, b)}, LatticePoint{std::max(a, b)}}));
        }
        return interval_sum(bars, f, 1);
    }
    std::vector<PersistenceModule> layers;
    for (int i = 0; i <= spec.extent; ++i) layers.push_back(random_module_raw(f, spec, n - 1, rng));
    std::vector<HomElement> maps;
    for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
        HomBasis b = hom_basis(layers[i], layers[i + 1]);
        Vector c(b.dim());
        for (auto& x : c) x = random_scalar(f, rng);
        maps.push_back(linear_combination(f, b.elements, c));
    }
    return stack_layers(layers, maps);
}

}  // namespace

PersistenceModule random_module(const Field& f, const RandomModuleSpec& spec, Rng& rng) {
    if (spec.n == 0) throw ShapeError("random_module needs n >= 1");
    while (true) {
        PersistenceModule m = random_module_raw(f, spec, spec.n, rng);
        if (m.is_zero() || m.total_dim() > spec.max_total) continue;
        return spec.conjugate ? random_conjugate(m, rng) : m;
    }
}

ZigzagModule random_zigzag(const Field& f, std::size_t max_length, std::size_t max_bars, Rng& rng) {
    int len = uniform(rng, 1, static_cast<int>(max_length));
    std::vector<Orientation> o;
    for (int k = 0; k + 1 < len; ++k) o.push_back(rng() % 2 ? Orientation::forward : Orientation::backward);
    std::size_t count = 1 + rng() % max_bars;
    std::vector<Bar> bars;
    for (std::size_t i = 0; i < count; ++i) {
        int a = uniform(rng, 0, len - 1), b = uniform(rng, 0, len - 1);
        bars.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(bars.begin(), bars.end());
    return zigzag_from_bars(f, o, bars);
}

// ---------------------------------------------------------------------------
// verification suites

namespace {

struct SuiteDef {
    std::string name;
    std::size_t default_count;
};

const std::vector<SuiteDef>& suite_defs() {
    static const std::vector<SuiteDef> defs{
        {"hom-intervals", 200}, {"rectangular", 50}, {"interval", 50}, {"general", 30}, {"zigzag", 30}};
    return defs;
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

RunReport base_report(const std::string& suite, const std::string& method, std::size_t index, std::uint64_t seed,
                      const Field& f) {
    RunReport r;
    r.suite = suite;
    r.method = method;
    r.instance = index;
    r.seed = seed;
    r.field = f.name();
    return r;
}

// Construction checks shared by every construction suite.
void check_construction(RunReport& r, const LayeredConstruction& c, const PersistenceModule& input) {
    auto v = validate(c.result);
    r.layer_equal = layer_equal(c, input);
    r.end_dim = end_dim(c.result);
    if (r.end_dim == 1)
        r.verdict = verdict_name(Verdict::indecomposable_dim1);
    else
        r.verdict = verdict_name(indecomposable(c.result).verdict);
    r.pass = v.empty() && r.layer_equal && r.end_dim == 1;
    if (!v.empty()) r.detail = "invalid result: " + v[0].message;
    else if (!r.layer_equal) r.detail = "layer " + std::to_string(c.m_layer) + " differs from the input";
    else if (r.end_dim != 1) r.detail = "end_dim " + std::to_string(r.end_dim);
}

template <class Build>
RunReport run_construction(const std::string& suite, const std::string& method, std::size_t index,
                           std::uint64_t seed, const Field& f, const PersistenceModule& input, Build build) {
    RunReport r = base_report(suite, method, index, seed, f);
    r.digest = module_digest(input);
    auto t = Clock::now();
    try {
        LayeredConstruction c = build();
        check_construction(r, c, input);
    } catch (const Error& e) {
        r.pass = false;
        r.detail = std::string("construction failed: ") + e.what();
    }
    r.seconds = since(t);
    return r;
}

Json replay_header(const std::string& suite, std::size_t index, std::uint64_t run_seed, const Field& f) {
    return Json{{"suite", suite}, {"index", index}, {"seed", run_seed}, {"field", f.characteristic()}};
}

std::vector<RunReport> run_instance_impl(const std::string& suite, std::size_t index, std::uint64_t run_seed,
                                         const Field& f) {
    const std::uint64_t seed = instance_seed(run_seed, suite, index);
    Rng rng(seed);
    std::vector<RunReport> out;
    Json input;

    if (suite == "hom-intervals") {
        IntervalSupport a = random_interval_support(2, 6, rng), b = random_interval_support(2, 6, rng);
        RunReport r = base_report(suite, "hom", index, seed, f);
        auto t = Clock::now();
        std::size_t combinatorial = hom_dim_intervals(a, b);
        PersistenceModule ma = interval_module(a, f), mb = interval_module(b, f);
        std::size_t linear = hom_basis(ma, mb).dim();
        r.seconds = since(t);
        r.digest = module_digest(direct_sum(ma, mb));
        r.end_dim = linear;
        r.verdict = "-";
        r.layer_equal = true;
        r.pass = combinatorial == linear;
        r.detail = "viable components " + std::to_string(combinatorial) + ", hom basis " + std::to_string(linear);
        input = Json{{"a", support_to_json(a)}, {"b", support_to_json(b)}};
        out.push_back(std::move(r));
    } else if (suite == "rectangular") {
        std::size_t n = 1 + rng() % 2;
        auto rects = random_rectangles(n, 4, 3, rng);
        PersistenceModule m = rectangle_sum(rects, f);
        out.push_back(run_construction(suite, "main-rect", index, seed, f, m, [&] { return main_rectangular(rects, f); }));
        out.push_back(run_construction(suite, "dual-rect", index, seed, f, m, [&] { return dual_rectangular(rects, f); }));
        out.push_back(run_construction(suite, "glued-rect", index, seed, f, m, [&] { return glued_rectangular(rects, f); }));
        Json s = Json::array();
        for (const auto& r : rects) s.push_back(summand_to_json("", IntervalSupport::rectangle(r)));
        input = Json{{"summands", s}};
    } else if (suite == "interval") {
        std::vector<IntervalSupport> sums;
        std::size_t k = 1 + rng() % 3;
        for (std::size_t i = 0; i < k; ++i) sums.push_back(random_interval_support(2, 4, rng));
        PersistenceModule m = interval_sum(sums, f, 2);
        out.push_back(run_construction(suite, "main-int", index, seed, f, m, [&] { return main_interval(sums, f); }));
        out.push_back(run_construction(suite, "dual-int", index, seed, f, m, [&] { return dual_interval(sums, f); }));
        out.push_back(run_construction(suite, "glued-int", index, seed, f, m, [&] { return glued_interval(sums, f); }));
        Json s = Json::array();
        for (const auto& x : sums) s.push_back(summand_to_json("", x));
        input = Json{{"summands", s}};
    } else if (suite == "general") {
        RandomModuleSpec spec;
        spec.n = 2;
        spec.extent = 3;
        spec.max_summands = 2;
        spec.max_total = 10;
        PersistenceModule m = random_module(f, spec, rng);
        out.push_back(run_construction(suite, "main-general", index, seed, f, m, [&] { return main_general(m); }));
        input = module_to_json(m);
    } else if (suite == "zigzag") {
        ZigzagModule z = random_zigzag(f, 6, 3, rng);
        RunReport r = base_report(suite, "lift-zigzag", index, seed, f);
        auto t = Clock::now();
        try {
            ZigzagLift lift = lift_zigzag(z);
            r.digest = module_digest(lift.embedding.module);
            check_construction(r, lift.construction, lift.embedding.module);
            ZigzagModule back = restrict_path(lift.construction.result, lift.path);
            bool round_trip = back.dims == z.dims && back.orientations == z.orientations &&
                              zigzag_barcode(back) == *z.interval_form;
            if (!round_trip) {
                r.pass = false;
                r.detail = "path restriction does not reproduce the zigzag";
            }
        } catch (const Error& e) {
            r.pass = false;
            r.detail = std::string("construction failed: ") + e.what();
        }
        r.seconds = since(t);
        input = zigzag_to_json(z);
        out.push_back(std::move(r));
    } else {
        throw ParseError("unknown suite \"" + suite + "\"");
    }

    for (auto& r : out) {
        if (r.pass) continue;
        Json rep = replay_header(suite, index, run_seed, f);
        rep["input"] = input;
        r.replay = rep.dump();
    }
    return out;
}

}  // namespace

std::uint64_t instance_seed(std::uint64_t run_seed, const std::string& suite, std::size_t index) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : suite) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return splitmix(splitmix(splitmix(run_seed) ^ h) + static_cast<std::uint64_t>(index));
}

std::vector<std::string> suite_names() {
    std::vector<std::string> out;
    for (const auto& d : suite_defs()) out.push_back(d.name);
    return out;
}

std::vector<RunReport> run_instance(const std::string& suite, std::size_t index, std::uint64_t run_seed,
                                    std::int64_t field) {
    return run_instance_impl(suite, index, run_seed, Field::prime(field));
}

std::vector<RunReport> replay_instance(const std::string& replay) {
    Json j;
    try {
        j = Json::parse(replay);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("replay text: ") + e.what());
    }
    if (!j.contains("suite") || !j.contains("index") || !j.contains("seed") || !j.contains("field"))
        throw ParseError("replay text needs suite, index, seed and field");
    return run_instance(j["suite"].get<std::string>(), j["index"].get<std::size_t>(), j["seed"].get<std::uint64_t>(),
                        j["field"].get<std::int64_t>());
}

bool same_outcome(const RunReport& a, const RunReport& b) {
    RunReport x = a, y = b;
    x.seconds = y.seconds = 0;
    return report_to_json(x) == report_to_json(y);
}

std::vector<RunReport> run_verify_suite(const SuiteOptions& opts,
                                        const std::function<void(const RunReport&)>& on_report) {
    struct Job {
        std::string suite;
        std::size_t index;
        std::int64_t field;
    };
    std::vector<Job> jobs;
    for (const auto& d : suite_defs()) {
        if (!opts.filter.empty() && d.name.find(opts.filter) == std::string::npos) continue;
        std::size_t count = opts.count ? opts.count : d.default_count;
        for (std::size_t i = 0; i < count; ++i)
            for (auto p : opts.fields) jobs.push_back({d.name, i, p});
    }
    for (auto p : opts.fields) Field::prime(p);

    std::vector<std::vector<RunReport>> results(jobs.size());
    std::vector<bool> done(jobs.size(), false);
    std::size_t flushed = 0;
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            std::size_t k = next++;
            if (k >= jobs.size()) return;
            auto reports = run_instance(jobs[k].suite, jobs[k].index, opts.seed, jobs[k].field);
            std::lock_guard<std::mutex> lock(mu);
            results[k] = std::move(reports);
            done[k] = true;
            while (flushed < jobs.size() && done[flushed]) {
                if (on_report)
                    for (const auto& r : results[flushed]) on_report(r);
                ++flushed;
            }
        }
    };
    std::size_t workers = opts.workers ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(1, jobs.size()));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<RunReport> out;
    for (auto& r : results)
        for (auto& x : r) out.push_back(std::move(x));
    return out;
}

}  // namespace pmforge
