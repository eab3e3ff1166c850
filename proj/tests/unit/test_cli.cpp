#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "pmforge/io.hpp"

using namespace pmforge;

namespace {

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

std::string fixture(const std::string& name) { return std::string(PMFORGE_FIXTURE_DIR) + "/" + name; }

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("pmforge_cli_" + name)).string();
}

Result run(const std::string& args, const std::string& env = "") {
    const std::string err_file = temp_path("stderr.txt");
    std::string cmd = "env -u PERSIST_FIELD " + env + " " + PMFORGE_CLI_PATH + " " + args + " 2>" + err_file;
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream e(err_file);
    r.err.assign(std::istreambuf_iterator<char>(e), {});
    return r;
}

Json json_of(const Result& r) { return Json::parse(r.out); }

std::vector<Rectangle> unshifted_rectangles(const Json& construction, std::size_t layer) {
    std::vector<int> shift = construction["shift"].get<std::vector<int>>();
    std::vector<Rectangle> out;
    for (const auto& layer_json : construction["layers"]) {
        if (layer_json["index"] != layer) continue;
        for (const auto& s : layer_json["summands"]) {
            LatticePoint lo = point_from_json(s["rectangle"]["lo"]), hi = point_from_json(s["rectangle"]["hi"]);
            for (std::size_t j = 0; j < shift.size(); ++j) {
                lo[j] -= shift[j];
                hi[j] -= shift[j];
            }
            out.push_back({lo, hi});
        }
    }
    return out;
}

}  // namespace

TEST(CliValidate, EveryShippedFixture) {
    for (const auto& entry : std::filesystem::directory_iterator(PMFORGE_FIXTURE_DIR)) {
        if (entry.path().extension() != ".json") continue;
        Result r = run("validate " + entry.path().string());
        int expected = entry.path().filename() == "broken_square.json" ? 1 : 0;
        EXPECT_EQ(r.code, expected) << entry.path() << r.out << r.err;
    }
}

TEST(CliValidate, BrokenSquareIsNamed) {
    Result r = run("validate " + fixture("broken_square.json"));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("(0,0)"), std::string::npos);
    EXPECT_NE(r.out.find("axes (0,1)"), std::string::npos);
}

TEST(CliValidate, Grid) {
    Result r = run("validate --grid " + fixture("three_bars.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0 | 1 2 2 2 1"), std::string::npos);
}

TEST(CliUsage, ParseAndUsageErrors) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("validate " + fixture("missing.json")).code, 2);
    EXPECT_EQ(run("construct " + fixture("three_bars.json") + " --method sideways").code, 2);
    EXPECT_EQ(run("construct " + fixture("three_bars.json")).code, 2);
    std::string bad = temp_path("bad.json");
    std::ofstream(bad) << "{ not json";
    EXPECT_EQ(run("validate " + bad).code, 2);
    EXPECT_EQ(run("--help").code, 0);
}

TEST(CliField, EnvironmentAndFlag) {
    EXPECT_NE(run("validate " + fixture("staircase.json")).out.find("GF(2)"), std::string::npos);
    EXPECT_NE(run("validate " + fixture("staircase.json"), "PERSIST_FIELD=5").out.find("GF(5)"), std::string::npos);
    EXPECT_NE(run("validate --field Q " + fixture("staircase.json"), "PERSIST_FIELD=5").out.find("over Q"),
              std::string::npos);
    EXPECT_EQ(run("validate " + fixture("staircase.json"), "PERSIST_FIELD=4").code, 2);
}

TEST(CliConstruct, DualRectangularVerify) {
    Result r = run("construct --method dual-rect --verify " + fixture("three_bars.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    Json j = json_of(r);
    EXPECT_EQ(j["m_layer"], 0);
    EXPECT_EQ(j["report"]["end_dim"], 1);
    EXPECT_EQ(j["report"]["layer_equal"], true);
    EXPECT_EQ(j["report"]["verdict"], "indecomposable_dim1");
    std::vector<Rectangle> expected{{LatticePoint{3}, LatticePoint{3}}, {LatticePoint{0}, LatticePoint{4}},
                                    {LatticePoint{1}, LatticePoint{2}}};
    EXPECT_EQ(unshifted_rectangles(j, 0), expected);
}

TEST(CliConstruct, DualIntervalStaircaseLayer) {
    Result r = run("construct --method dual-int " + fixture("staircase.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    std::vector<Rectangle> expected{{LatticePoint{0, 0}, LatticePoint{2, 4}},
                                    {LatticePoint{0, 0}, LatticePoint{3, 2}},
                                    {LatticePoint{0, 0}, LatticePoint{4, 0}}};
    EXPECT_EQ(unshifted_rectangles(json_of(r), 2), expected);
}

TEST(CliConstruct, MainIntervalStaircaseLayer) {
    Result r = run("construct --method main-int --verify " + fixture("staircase.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    std::vector<Rectangle> expected{{LatticePoint{2, 0}, LatticePoint{4, 4}},
                                    {LatticePoint{1, 2}, LatticePoint{4, 4}},
                                    {LatticePoint{0, 4}, LatticePoint{4, 4}}};
    auto got = unshifted_rectangles(json_of(r), 3);
    ASSERT_EQ(got.size(), expected.size());
    EXPECT_TRUE(std::is_permutation(got.begin(), got.end(), expected.begin()));
}

TEST(CliConstruct, ZigzagRoundTrip) {
    for (const char* name : {"zigzag_ffffb.json", "zigzag_bbfbf.json", "zigzag_fbbfb.json"}) {
        Result r = run("construct --method lift-zigzag --verify " + fixture(name));
        ASSERT_EQ(r.code, 0) << name << r.err;
        Json j = json_of(r);
        EXPECT_EQ(j["round_trip"], true);
        EXPECT_EQ(j["report"]["end_dim"], 1);
    }
}

TEST(CliConstruct, GeneralOverFiveAndOutFile) {
    std::string out = temp_path("be2.json");
    Result r = run("construct --method main-general --verify --field 5 -o " + out + " " + fixture("be2_d1_lambda1.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    Json j = read_json_file(out);
    EXPECT_EQ(j["report"]["field"], "GF(5)");
    EXPECT_EQ(j["report"]["end_dim"], 1);
    EXPECT_EQ(j["m_layer"], 6);
}

TEST(CliConstruct, PreconditionFailures) {
    EXPECT_EQ(run("construct --method main-rect " + fixture("staircase.json")).code, 1);
    EXPECT_EQ(run("construct --method main-int " + fixture("be2_d1_lambda0.json")).code, 1);
    EXPECT_EQ(run("construct --method lift-zigzag " + fixture("staircase.json")).code, 2);
}

TEST(CliConstruct, ExplicitParams) {
    std::string p = temp_path("params.json");
    std::ofstream(p) << R"({"mode": "main", "beta_primes": [[5],[6],[7]], "alpha_primes": [[3],[2],[1]], "mu": [8]})";
    Result r = run("construct --method main-rect --verify --params " + p + " " + fixture("three_bars.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json_of(r)["params"]["mu"], Json::array({8}));
    std::ofstream(p) << R"({"mode": "main", "beta_primes": [[5],[5],[7]], "alpha_primes": [[3],[2],[1]], "mu": [8]})";
    EXPECT_EQ(run("construct --method main-rect --params " + p + " " + fixture("three_bars.json")).code, 1);
}

TEST(CliHom, OverlaidPair) {
    Result r = run("hom " + fixture("overlap_m.json") + " " + fixture("overlap_n.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("dim Hom = 1"), std::string::npos);
    EXPECT_NE(r.out.find("components = 3, viable = 1"), std::string::npos);
}

TEST(CliHom, IdenticalAndMismatched) {
    Result r = run("hom --basis " + fixture("staircase.json") + " " + fixture("staircase.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("dim Hom = 1"), std::string::npos);
    EXPECT_EQ(run("hom " + fixture("staircase.json") + " " + fixture("three_bars.json")).code, 2);
}

TEST(CliVerifySuite, SmokeRunIsFast) {
    auto t = std::chrono::steady_clock::now();
    Result r = run("verify-suite --count 1");
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_LT(secs, 5.0);
    EXPECT_NE(r.out.find("summary: 18/18 passed"), std::string::npos) << r.out;
}

TEST(CliVerifySuite, JsonLinesAndReplay) {
    Result r = run("verify-suite --count 1 --filter general --fields 5 --json");
    ASSERT_EQ(r.code, 0);
    Json report = Json::parse(r.out.substr(0, r.out.find('\n')));
    EXPECT_EQ(report["suite"], "general");
    Result again = run(R"(verify-suite --json --replay '{"suite":"general","index":0,"seed":1,"field":5}')");
    ASSERT_EQ(again.code, 0);
    Json replayed = Json::parse(again.out.substr(0, again.out.find('\n')));
    report["seconds"] = replayed["seconds"] = 0;
    EXPECT_EQ(report, replayed);
    EXPECT_EQ(run("verify-suite --filter nothing").code, 2);
    EXPECT_EQ(run("verify-suite --fields 4").code, 2);
}

TEST(CliRestrict, LayerAndPath) {
    Result r = run("restrict --layer 2 " + fixture("staircase.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    PersistenceModule layer = module_from_json(json_of(r), Field::prime(2));
    EXPECT_EQ(layer.n(), 1u);
    EXPECT_EQ(layer.total_dim(), 3u);

    std::string p = temp_path("path.json");
    std::ofstream(p) << R"({"points": [[0,4],[1,4],[1,3],[1,2],[2,2]]})";
    Result z = run("restrict --path " + p + " " + fixture("staircase.json"));
    ASSERT_EQ(z.code, 0) << z.err;
    EXPECT_EQ(json_of(z)["orientations"], "fbbf");
    EXPECT_EQ(json_of(z)["dims"], Json::array({1, 1, 1, 1, 1}));
    EXPECT_EQ(run("restrict " + fixture("staircase.json")).code, 2);
}

TEST(CliEmbedZigzag, RoundTrip) {
    Result r = run("embed-zigzag " + fixture("zigzag_ffffb.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    Json j = json_of(r);
    EXPECT_EQ(j["round_trip"], true);
    EXPECT_EQ(j["summands"].size(), 2u);
    EXPECT_EQ(j["path"]["points"][0], Json::array({0, 1}));
    EXPECT_EQ(run("embed-zigzag " + fixture("staircase.json")).code, 2);
}
