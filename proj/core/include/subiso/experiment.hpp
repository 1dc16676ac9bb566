#pragma once

#include "subiso/decision_tree.hpp"
#include "subiso/tree.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace subiso {

/// Library version, "major.minor.patch".
std::string version();

/// Worker count for trial farms: SUBISO_THREADS when set and positive,
/// otherwise the hardware concurrency (at least 1).
unsigned worker_count();

struct ExperimentConfig {
    std::string algorithm = "rand-binary";  // det | rand-binary | rand-ternary | rand-dary | lcst
    std::string family = "complete";        // random | complete | ov-simple | ov-bounded | ov-lcst | file
    int degree = 2;
    int min_height = 4;
    int max_height = 8;
    double leaf_drop = 0.5;    // complete family: each deepest leaf dropped with this probability
    std::size_t min_size = 8;  // host size range, random family
    std::size_t max_size = 64;
    std::size_t ov_n = 8;  // OV families
    std::size_t ov_dim = 6;
    double ov_density = 0.5;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::string pattern_path;  // file family
    std::string host_path;
    std::string decision_tree;  // rand-ternary policy (sexp); greedy baseline when empty
    std::string out;
    std::string format = "json";

    /// Throws ConstraintError on an unusable configuration.
    void validate() const;
    /// Canonical JSON of every field that affects results.
    std::string to_json() const;
    /// FNV-1a of to_json(), as 16 hex digits.
    std::string hash() const;
};

struct Summary {
    double mean = 0;
    double stddev = 0;
};

/// Aggregates of one height (or the single point of non-height families).
struct ConfigResult {
    int height = -1;
    std::size_t trials = 0;
    Summary yes_calls;
    Summary no_calls;
    Summary base_calls;
    Summary edge_queries;
    Summary wall_ms;
    Summary pattern_size;
    Summary host_size;
    std::uint64_t max_base_calls = 0;
    int max_levels = 0;
    /// Every trial stayed within (d^2)^levels base calls.
    bool within_trivial_bound = true;
    std::size_t yes_answers = 0;
    std::size_t disagreements = 0;
};

struct GrowthFit {
    std::string metric;  // base_calls or edge_queries
    double ratio = 0;    // geometric mean of successive-height ratios of means
    double ci_low = 0;   // 95% delta-method interval
    double ci_high = 0;
    double bound = 0;
    std::string bound_source;
    double tolerance = 1.05;
    bool pass = false;
};

struct BenchReport {
    ExperimentConfig config;
    std::string config_hash;
    std::string version;
    std::vector<ConfigResult> results;
    std::optional<GrowthFit> growth;
    std::size_t disagreements = 0;
    bool aborted = false;  // stopped early after a disagreement
};

/// Runs all trials of `config` on `threads` workers (0 = worker_count()).
/// Trial i of height h uses derive_seed(seed, h * 2^32 + i); results do not
/// depend on the thread count.
BenchReport run_bench(const ExperimentConfig& config, unsigned threads = 0);

std::string report_json(const BenchReport& report);
/// One row per configuration; drops the growth fit's interval.
std::string report_csv(const BenchReport& report);

/// Per-level growth of a sequence of means: geometric mean of successive
/// ratios with a delta-method 95% interval from the end-point variances.
GrowthFit fit_growth(const std::vector<ConfigResult>& results, bool use_edge_queries);

struct VerifyLine {
    std::string check;
    std::string value;
    std::string bound;
    bool pass = false;
    bool stretch = false;  // reported but not counted as a violation
};

struct VerifyReport {
    std::vector<VerifyLine> lines;
    bool ok() const;
    std::string table() const;
    std::string json() const;
};

/// Exhaustive exact expectations of the three query protocols over all
/// d x d graphs (d <= 3), or over `samples` seeded random graphs for d = 4.
VerifyReport verify_matching_bounds(int d, std::size_t samples = 2000, std::uint64_t seed = 0);
VerifyReport verify_constants();
/// Exact re-verification of a 3x3 decision tree: per-graph totals <= 9,
/// worst cost pairs, radius, and the published cost pairs as a stretch goal.
VerifyReport verify_decision_tree(const DecisionTree3x3& tree);

}  // namespace subiso
