// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pmforge/errors.hpp"
#include "pmforge/forge.hpp"
#include "pmforge/homlab.hpp"
#include "pmforge/intervals.hpp"
#include "pmforge/io.hpp"
#include "pmforge/suite.hpp"

using namespace pmforge;

namespace {

// Time limits in seconds.
constexpr double kLimitHomPairs = 60;
constexpr double kLimitRectangular = 10;
constexpr double kLimitStaircase = 10;
constexpr double kLimitIntervalRandom = 300;
constexpr double kLimitGeneralRandom = 300;
constexpr double kLimitZigzag = 120;
constexpr double kLimitBe2 = 60;

// Instance counts.
constexpr std::size_t kHomPairs = 200;
constexpr std::size_t kIntervalModules = 50;
constexpr std::size_t kGeneralModules = 30;
constexpr std::size_t kZigzags = 30;
constexpr std::uint64_t kSeed = 20240601;

const Field F2 = Field::prime(2);
const Field F5 = Field::prime(5);

std::string fixture(const std::string& name) { return std::string(PMFORGE_FIXTURE_DIR) + "/" + name; }

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f s", s);
    return buf;
}

std::string timing(double s, double limit) { return seconds(s) + " (limit " + seconds(limit) + ")"; }

// Field-comparable fingerprint of one construction.
struct Signature {
    std::map<LatticePoint, std::size_t> dims;
    std::size_t end_dim = 0;
    std::string verdict;
    bool operator==(const Signature&) const = default;
};

struct Check {
    bool ok = true;
    std::vector<Signature> signatures;
    std::string first_failure;

    void fail(const std::string& why) {
        if (ok) first_failure = why;
        ok = false;
    }
};

std::string verdict_of(const PersistenceModule& m, std::size_t e) {
    return e == 1 ? verdict_name(Verdict::indecomposable_dim1) : verdict_name(indecomposable(m).verdict);
}

// validate = empty, end_dim = 1, layer equality.
void check_construction(Check& chk, const LayeredConstruction& c, const PersistenceModule& input,
                        const std::string& what) {
    Signature s;
    s.dims = c.result.dims();
    s.end_dim = end_dim(c.result);
    s.verdict = verdict_of(c.result, s.end_dim);
    chk.signatures.push_back(s);
    if (!validate(c.result).empty()) chk.fail(what + ": result does not validate");
    if (s.end_dim != 1) chk.fail(what + ": end_dim " + std::to_string(s.end_dim));
    if (!layer_equal(c, input)) chk.fail(what + ": layer " + std::to_string(c.m_layer) + " differs from the input");
}

std::vector<Rectangle> layer_boxes(const LayeredConstruction& c, int index) {
    std::vector<Rectangle> out;
    for (const auto& l : c.layers) {
        if (l.index != index) continue;
        for (const auto& s : l.summands) {
            Box b = s.box();
            if (b.volume() != s.size()) return {};
            LatticePoint lo = b.lo, hi = b.hi;
            for (std::size_t j = 0; j < c.shift.size(); ++j) {
                lo[j] -= c.shift[j];
                hi[j] -= c.shift[j];
            }
            out.push_back({lo, hi});
        }
    }
    return out;
}

bool same_rectangles(std::vector<Rectangle> a, std::vector<Rectangle> b) {
    return a.size() == b.size() && std::is_permutation(a.begin(), a.end(), b.begin());
}

bool same_points(std::vector<LatticePoint> a, std::vector<LatticePoint> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

Rng instance_rng(const std::string& tag, std::size_t i) { return Rng(instance_seed(kSeed, tag, i)); }

// ---------------------------------------------------------------------------

Outcome criterion_hom_formula() {
    auto t = Clock::now();
    std::size_t agree = 0, total = 0;
    for (std::size_t i = 0; i < kHomPairs; ++i) {
        Rng rng = instance_rng("hom", i);
        IntervalSupport a = random_interval_support(2, 6, rng), b = random_interval_support(2, 6, rng);
        std::size_t formula = hom_dim_intervals(a, b);
        for (const Field& f : {F2, F5}) {
            ++total;
            agree += hom_basis(interval_module(a, f), interval_module(b, f)).dim() == formula ? 1 : 0;
        }
    }
    double s = since(t);
    return {agree == total && s < kLimitHomPairs,
            std::to_string(agree) + "/" + std::to_string(total) + " pair-field runs agree, " + timing(s, kLimitHomPairs)};
}

Outcome criterion_overlaid_pair() {
    ModuleDocument m = document_from_json(read_json_file(fixture("overlap_m.json")), F2);
    ModuleDocument n = document_from_json(read_json_file(fixture("overlap_n.json")), F2);
    ComponentReport r = intersect_components(m.summands.at(0).support, n.summands.at(0).support);
    bool ok = r.components.size() == 3 && r.viable_count() == 1;
    bool saw_n = false, saw_m = false;
    for (const auto& c : r.components) {
        if (c.viable || !c.witness) continue;
        const auto& w = *c.witness;
        saw_n = saw_n || (w.beta == LatticePoint{1, 6} && w.alpha == LatticePoint{1, 5} && w.side == WitnessSide::n_side);
        saw_m = saw_m || (w.beta == LatticePoint{2, 1} && w.alpha == LatticePoint{2, 2} && w.side == WitnessSide::m_side);
    }
    ok = ok && saw_n && saw_m;
    return {ok, std::to_string(r.components.size()) + " components, " + std::to_string(r.viable_count()) +
                    " viable; witness (1,6)/(1,5) " + (saw_n ? "found" : "missing") + ", (2,1)/(2,2) " +
                    (saw_m ? "found" : "missing")};
}

Check run_rectangular(const Field& f) {
    Check chk;
    ModuleDocument d = document_from_json(read_json_file(fixture("three_bars.json")), f);
    auto rects = *d.rectangles();
    check_construction(chk, main_rectangular(rects, f), d.module, "main-rect");
    check_construction(chk, dual_rectangular(rects, f), d.module, "dual-rect");
    check_construction(chk, glued_rectangular(rects, f), d.module, "glued-rect");
    return chk;
}

Check run_staircase(const Field& f) {
    Check chk;
    ModuleDocument d = document_from_json(read_json_file(fixture("staircase.json")), f);
    auto sums = d.supports();
    const IntervalSupport& s = sums.at(0);

    if (!same_points(minimal_elements(s), {{2, 0}, {1, 2}, {0, 4}})) chk.fail("minimal elements differ");
    if (!same_points(maximal_elements(s), {{2, 4}, {3, 2}, {4, 0}})) chk.fail("maximal elements differ");

    LayeredConstruction mc = main_interval(sums, f);
    if (!same_rectangles(layer_boxes(mc, 3), {{LatticePoint{2, 0}, LatticePoint{4, 4}},
                                              {LatticePoint{1, 2}, LatticePoint{4, 4}},
                                              {LatticePoint{0, 4}, LatticePoint{4, 4}}}))
        chk.fail("main-int layer 3 differs");
    check_construction(chk, mc, d.module, "main-int");

    LayeredConstruction dc = dual_interval(sums, f);
    if (!same_rectangles(layer_boxes(dc, 2), {{LatticePoint{0, 0}, LatticePoint{2, 4}},
                                              {LatticePoint{0, 0}, LatticePoint{3, 2}},
                                              {LatticePoint{0, 0}, LatticePoint{4, 0}}}))
        chk.fail("dual-int layer 2 differs");
    check_construction(chk, dc, d.module, "dual-int");

    check_construction(chk, glued_interval(sums, f), d.module, "glued-int");
    return chk;
}

Check run_interval_random(const Field& f) {
    Check chk;
    for (std::size_t i = 0; i < kIntervalModules; ++i) {
        Rng rng = instance_rng("interval", i);
        std::vector<IntervalSupport> sums;
        std::size_t k = 1 + rng() % 3;
        for (std::size_t j = 0; j < k; ++j) sums.push_back(random_interval_support(2, 4, rng));
        PersistenceModule m = interval_sum(sums, f, 2);
        std::string tag = " #" + std::to_string(i);
        check_construction(chk, main_interval(sums, f), m, "main-int" + tag);
        check_construction(chk, dual_interval(sums, f), m, "dual-int" + tag);
        check_construction(chk, glued_interval(sums, f), m, "glued-int" + tag);
    }
    return chk;
}

// The same seed drives both fields, so supports and structure agree; scalars are drawn per field.
Check run_general_random(const Field& f) {
    Check chk;
    RandomModuleSpec spec;
    spec.n = 2;
    spec.extent = 3;
    spec.max_summands = 2;
    spec.max_total = 10;
    spec.conjugate = false;
    for (std::size_t i = 0; i < kGeneralModules; ++i) {
        Rng rng = instance_rng("general", i);
        PersistenceModule m = random_module(f, spec, rng);
        m = random_conjugate(m, rng);
        if (!validate(m).empty()) {
            chk.fail("random input #" + std::to_string(i) + " does not validate");
            continue;
        }
        LayeredConstruction c = main_general(m);
        if (c.m_layer != 6) chk.fail("main-general m_layer " + std::to_string(c.m_layer));
        check_construction(chk, c, m, "main-general #" + std::to_string(i));
        // input dims, not result dims: generator spans may differ between fields
        chk.signatures.back().dims = m.dims();
    }
    return chk;
}

Check run_zigzag(const Field& f) {
    Check chk;
    std::vector<ZigzagModule> zs;
    for (const char* name : {"zigzag_ffffb.json", "zigzag_bbfbf.json", "zigzag_fbbfb.json"})
        zs.push_back(zigzag_from_json(read_json_file(fixture(name)), f));
    for (std::size_t i = 0; i < kZigzags; ++i) {
        Rng rng = instance_rng("zigzag", i);
        zs.push_back(random_zigzag(f, 6, 3, rng));
    }
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const ZigzagModule& z = zs[i];
        std::string tag = "lift-zigzag #" + std::to_string(i) + " (" + format_orientations(z.orientations) + ")";
        ZigzagLift lift = lift_zigzag(z);
        check_construction(chk, lift.construction, lift.embedding.module, tag);
        ZigzagModule back = restrict_path(lift.construction.result, lift.path);
        if (back.dims != z.dims) chk.fail(tag + ": dims differ after restriction");
        if (back.orientations != z.orientations) chk.fail(tag + ": orientations differ after restriction");
        if (zigzag_barcode(back) != *z.interval_form) chk.fail(tag + ": barcode differs after restriction");
    }
    return chk;
}

template <class Fn>
Outcome timed_check(Fn run, double limit, const std::string& what) {
    auto t = Clock::now();
    Check chk = run(F2);
    double s = since(t);
    std::string detail = std::to_string(chk.signatures.size()) + " " + what + ", " + timing(s, limit);
    if (!chk.ok) detail = chk.first_failure + "; " + detail;
    return {chk.ok && s < limit, detail};
}

Outcome criterion_negative_controls() {
    auto r = [](int a, int b) { return rectangle_module({LatticePoint{a}, LatticePoint{b}}, F2); };
    IndecomposabilityVerdict split = indecomposable(direct_sum(r(0, 1), r(2, 3)));
    bool a_ok = split.verdict == Verdict::decomposable && split.support_split.has_value();

    PersistenceModule doubled = direct_sum(r(0, 1), r(0, 1));
    IndecomposabilityVerdict v = indecomposable(doubled);
    bool b_ok = v.end_dim == 4 && v.verdict == Verdict::decomposable && v.idempotent &&
                is_nontrivial_idempotent(*v.idempotent, doubled);
    return {a_ok && b_ok, std::string("K[0,1]+K[2,3] ") + verdict_name(split.verdict) +
                              (split.support_split ? " with support split" : " without support split") +
                              "; K[0,1]+K[0,1] end_dim " + std::to_string(v.end_dim) + ", idempotent " +
                              (v.idempotent ? "found" : "missing")};
}

Outcome criterion_be2() {
    auto t = Clock::now();
    auto r = [](int a, int b) { return rectangle_module({LatticePoint{a}, LatticePoint{b}}, F2); };
    bool ok = true;
    std::ostringstream why;
    std::vector<PersistenceModule> ms;
    for (int lambda : {0, 1}) {
        PersistenceModule m = build_be2_family(1, F2.from_int(lambda), F2);
        ms.push_back(m);
        bool valid = validate(m).empty();
        bool layers = restrict_hyperplane(m, 0) == direct_sum(r(1, 4), r(2, 3)) &&
                      restrict_hyperplane(m, 1) == direct_sum(r(0, 3), r(1, 2));
        IndecomposabilityVerdict v = indecomposable(m);
        bool indec = v.verdict == Verdict::indecomposable_dim1 || v.verdict == Verdict::indecomposable_no_idempotent;
        ok = ok && valid && layers && indec;
        why << "lambda=" << lambda << ": " << (valid ? "valid" : "invalid") << ", layers "
            << (layers ? "match" : "differ") << ", " << verdict_name(v.verdict) << "; ";
    }
    IsoResult iso = are_isomorphic(ms[0], ms[1], 0, 1);
    ok = ok && iso.answer == IsoAnswer::no;
    double s = since(t);
    why << "isomorphic: " << (iso.answer == IsoAnswer::no ? "no" : iso.answer == IsoAnswer::yes ? "yes" : "unknown")
        << ", " << timing(s, kLimitBe2);
    return {ok && s < kLimitBe2, why.str()};
}

Outcome criterion_field_independence() {
    struct Part {
        std::string name;
        std::function<Check(const Field&)> run;
    };
    std::vector<Part> parts{{"rectangular", run_rectangular},
                            {"staircase", run_staircase},
                            {"random interval", run_interval_random},
                            {"random general", run_general_random},
                            {"zigzag", run_zigzag}};
    bool ok = true;
    std::size_t compared = 0;
    std::string first;
    for (const auto& p : parts) {
        Check a = p.run(F2), b = p.run(F5);
        if (!b.ok) {
            ok = false;
            if (first.empty()) first = "GF(5) " + b.first_failure;
        }
        if (a.signatures.size() != b.signatures.size()) {
            ok = false;
            if (first.empty()) first = p.name + ": different number of constructions";
            continue;
        }
        for (std::size_t k = 0; k < a.signatures.size(); ++k, ++compared) {
            if (a.signatures[k] == b.signatures[k]) continue;
            ok = false;
            if (first.empty()) first = p.name + " construction " + std::to_string(k) + " differs between fields";
        }
    }
    std::string detail = std::to_string(compared) + " constructions compared between GF(2) and GF(5)";
    if (!first.empty()) detail = first + "; " + detail;
    return {ok, detail};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        std::string name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria{
        {1, "hom formula vs linear algebra", criterion_hom_formula},
        {2, "overlaid interval pair components", criterion_overlaid_pair},
        {3, "rectangular constructions on three bars",
         [] { return timed_check(run_rectangular, kLimitRectangular, "constructions checked"); }},
        {4, "staircase interval constructions",
         [] { return timed_check(run_staircase, kLimitStaircase, "constructions checked"); }},
        {5, "random interval modules",
         [] {
             auto t = Clock::now();
             Check a = run_interval_random(F2), b = run_interval_random(F5);
             double s = since(t);
             std::string d = std::to_string(a.signatures.size() + b.signatures.size()) +
                             " constructions over GF(2) and GF(5), " + timing(s, kLimitIntervalRandom);
             if (!a.ok) d = a.first_failure + "; " + d;
             else if (!b.ok) d = "GF(5) " + b.first_failure + "; " + d;
             return Outcome{a.ok && b.ok && s < kLimitIntervalRandom, d};
         }},
        {6, "random general modules", [] { return timed_check(run_general_random, kLimitGeneralRandom, "modules lifted"); }},
        {7, "zigzag lifts", [] { return timed_check(run_zigzag, kLimitZigzag, "zigzags lifted"); }},
        {8, "negative controls", criterion_negative_controls},
        {9, "Jordan block family", criterion_be2},
        {10, "field independence", criterion_field_independence},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail
                  << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed ? 1 : 0;
}
