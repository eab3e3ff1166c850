// suite.hpp
//
// Seeded random instances and the batch verification runner.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pmforge/intervals.hpp"
#include "pmforge/pmodule.hpp"
#include "pmforge/zigzag.hpp"

namespace pmforge {

using Rng = std::mt19937_64;

/// Uniform element of a prime field, or a small integer for the rationals.
Scalar random_scalar(const Field& f, Rng& rng);
Matrix random_invertible(const Field& f, std::size_t n, Rng& rng);

/// Random interval support in [0, extent]^n: a component of up(A) n down(B) for small random A, B.
IntervalSupport random_interval_support(std::size_t n, int extent, Rng& rng);

/// 1 to max_count rectangles with corners in [0, extent]^n.
std::vector<Rectangle> random_rectangles(std::size_t n, int extent, std::size_t max_count, Rng& rng);

struct RandomModuleSpec {
    std::size_t n = 2;
    int extent = 3;
    /// Summands per one-dimensional slice.
    std::size_t max_summands = 2;
    std::size_t max_total = 10;
    /// Apply a random change of basis at every grade.
    bool conjugate = true;
};

/**
 * @brief Random valid module.
 *
 * One-dimensional modules are sums of random bars. Higher-dimensional ones stack
 * random lower-dimensional layers along the last axis, joined by random elements of
 * the Hom space between consecutive layers, so they need not be interval decomposable.
 */
PersistenceModule random_module(const Field& f, const RandomModuleSpec& spec, Rng& rng);

/// Conjugates every grade by a random invertible matrix.
PersistenceModule random_conjugate(const PersistenceModule& m, Rng& rng);

/// Random zigzag in interval form: length in [1, max_length], 1 to max_bars bars.
ZigzagModule random_zigzag(const Field& f, std::size_t max_length, std::size_t max_bars, Rng& rng);

struct RunReport {
    std::string suite;
    std::string method;
    std::size_t instance = 0;
    std::uint64_t seed = 0;
    std::string field;
    std::string digest;
    std::size_t end_dim = 0;
    std::string verdict;
    bool layer_equal = false;
    bool pass = false;
    double seconds = 0;
    std::string detail;
    /// Serialized failing input, for replay.
    std::string replay;
};

struct SuiteOptions {
    std::uint64_t seed = 1;
    /// Instances per randomized suite; 0 keeps each suite's default count.
    std::size_t count = 0;
    std::vector<std::int64_t> fields{2, 5};
    std::size_t workers = 0;
    /// Restrict to suites whose name contains this text.
    std::string filter;
};

/// Instance seed derived from the run seed, the suite name and the instance index.
std::uint64_t instance_seed(std::uint64_t run_seed, const std::string& suite, std::size_t index);

std::vector<std::string> suite_names();

/// Runs the randomized suites; reports come back in deterministic order.
std::vector<RunReport> run_verify_suite(const SuiteOptions& opts,
                                        const std::function<void(const RunReport&)>& on_report = {});

/// Runs one instance: one report per method checked.
std::vector<RunReport> run_instance(const std::string& suite, std::size_t index, std::uint64_t run_seed,
                                    std::int64_t field);

/// Reruns an instance from the "replay" text of one of its reports.
std::vector<RunReport> replay_instance(const std::string& replay);

/// Equal in everything but timing.
bool same_outcome(const RunReport& a, const RunReport& b);

}  // namespace pmforge
