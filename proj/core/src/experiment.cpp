#include "subiso/experiment.hpp"

#include "subiso/lcst.hpp"
#include "subiso/matching.hpp"
#include "subiso/ov.hpp"
#include "subiso/recurrence.hpp"
#include "subiso/rng.hpp"
#include "subiso/subiso.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace subiso {

using nlohmann::json;

std::string version() { return SUBISO_VERSION_STRING; }

unsigned worker_count() {
    if (const char* env = std::getenv("SUBISO_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

namespace {

const std::set<std::string> kAlgorithms{"det", "rand-binary", "rand-ternary", "rand-dary", "lcst"};
const std::set<std::string> kFamilies{"random", "complete", "ov-simple", "ov-bounded", "ov-lcst", "file"};

bool height_family(const std::string& family) { return family == "random" || family == "complete"; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConstraintError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

void ExperimentConfig::validate() const {
    if (!kAlgorithms.contains(algorithm)) throw ConstraintError("unknown algorithm: " + algorithm);
    if (!kFamilies.contains(family)) throw ConstraintError("unknown instance family: " + family);
    if (trials < 1) throw ConstraintError("trial count must be >= 1");
    if (degree < 1) throw ConstraintError("degree must be >= 1");
    if (format != "json" && format != "csv") throw ConstraintError("format must be json or csv");
    if (height_family(family) && (min_height < 0 || min_height > max_height))
        throw ConstraintError("height range is empty");
    if (family == "random" && (min_size < 1 || min_size > max_size)) throw ConstraintError("size range is empty");
    if (family == "file" && (pattern_path.empty() || host_path.empty()))
        throw ConstraintError("file family needs pattern and host paths");
    if (family.starts_with("ov-") && ov_n < 1) throw ConstraintError("OV list length must be >= 1");
    if (ov_density < 0 || ov_density > 1) throw ConstraintError("OV density must lie in [0, 1]");
    if (leaf_drop < 0 || leaf_drop > 1) throw ConstraintError("leaf drop probability must lie in [0, 1]");
    if ((algorithm == "lcst") != (family == "ov-lcst"))
        throw ConstraintError("the lcst algorithm runs exactly on the ov-lcst family");
    if (algorithm == "rand-binary" && degree != 2) throw ConstraintError("rand-binary needs degree 2");
    if (algorithm == "rand-ternary" && degree != 3) throw ConstraintError("rand-ternary needs degree 3");
    if (family == "ov-bounded" && degree < 2) throw ConstraintError("ov-bounded needs degree >= 2");
    if (family == "ov-lcst" && degree < 2) throw ConstraintError("ov-lcst needs degree >= 2");
}

std::string ExperimentConfig::to_json() const {
    json j{{"algorithm", algorithm}, {"family", family}, {"degree", degree},   {"trials", trials},
           {"seed", seed},           {"format", format}};
    if (height_family(family)) {
        j["min_height"] = min_height;
        j["max_height"] = max_height;
    }
    if (family == "complete") j["leaf_drop"] = leaf_drop;
    if (family == "random") {
        j["min_size"] = min_size;
        j["max_size"] = max_size;
    }
    if (family.starts_with("ov-")) {
        j["ov_n"] = ov_n;
        j["ov_dim"] = ov_dim;
        j["ov_density"] = ov_density;
    }
    if (family == "file") {
        j["pattern_path"] = pattern_path;
        j["host_path"] = host_path;
    }
    if (algorithm == "rand-ternary") j["decision_tree"] = decision_tree;
    return j.dump();
}

std::string ExperimentConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : to_json()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

/// Complete d-ary tree of the given height whose deepest leaves are each
/// kept with probability 1 - drop.
Tree pruned_complete(int d, int height, double drop, SplitMix64& rng) {
    if (complete_dary_size(d, height) > 10'000'000) throw ConstraintError("complete tree exceeds 10^7 nodes");
    Tree t;
    std::vector<NodeId> layer{t.add_root()};
    const auto cutoff = static_cast<double>(SplitMix64::max()) * drop;
    for (int level = 1; level <= height; ++level) {
        std::vector<NodeId> next;
        for (NodeId v : layer)
            for (int c = 0; c < d; ++c)
                if (level < height || static_cast<double>(rng()) >= cutoff) next.push_back(t.add_child(v));
        layer = std::move(next);
    }
    return t;
}

struct TrialRecord {
    std::uint64_t yes_calls = 0;
    std::uint64_t no_calls = 0;
    std::uint64_t edge_queries = 0;
    double wall_ms = 0;
    std::size_t pattern_size = 0;
    std::size_t host_size = 0;
    int levels = 0;
    bool answer = false;
    bool agrees = true;
};

class TrialRunner {
public:
    explicit TrialRunner(const ExperimentConfig& c) : c_(c) {
        if (c.algorithm == "rand-ternary")
            policy_ = c.decision_tree.empty() ? DecisionTree3x3::greedy_baseline()
                                              : DecisionTree3x3::parse(c.decision_tree);
        if (c.family == "file") {
            file_h_ = parse_tree(read_file(c.pattern_path));
            file_g_ = parse_tree(read_file(c.host_path));
        }
    }

    const DecisionTree3x3& policy() const { return policy_; }

    TrialRecord run(int height, std::uint64_t seed) const {
        SplitMix64 rng(seed);
        const std::uint64_t instance_seed = rng();
        const std::uint64_t solver_seed = rng();
        TrialRecord r;

        if (c_.family == "ov-lcst") {
            const OvInstance inst = random_ov(c_.ov_n, c_.ov_dim, c_.ov_density, instance_seed);
            const auto start = std::chrono::steady_clock::now();
            const LcstInstanceBundle bundle = build_lcst_instance(inst, c_.degree);
            bool answer = false;
            for (const LcstTriple& t : bundle.triples) {
                const LcstResult v = lcst(t.h, t.g);
                r.edge_queries += v.node_pairs;
                r.pattern_size += t.h.size();
                r.host_size += t.g.size();
                answer = answer || v.size >= t.threshold;
            }
            r.wall_ms = elapsed_ms(start);
            r.answer = answer;
            r.agrees = answer == ov_bruteforce(inst);
            return r;
        }

        Tree h;
        Tree g;
        std::optional<bool> ov_answer;
        if (c_.family == "complete") {
            SplitMix64 irng(instance_seed);
            h = pruned_complete(c_.degree, height, c_.leaf_drop, irng);
            g = pruned_complete(c_.degree, height, c_.leaf_drop, irng);
        } else if (c_.family == "random") {
            SplitMix64 irng(instance_seed);
            const std::uint64_t capacity = complete_dary_size(c_.degree, height);
            const std::size_t hi = static_cast<std::size_t>(std::min<std::uint64_t>(c_.max_size, capacity));
            const std::size_t lo = std::min(c_.min_size, hi);
            const std::size_t g_size = lo + irng.below(hi - lo + 1);
            const std::size_t h_size = 1 + irng.below(g_size);
            h = random_tree(h_size, c_.degree, height, irng());
            g = random_tree(g_size, c_.degree, height, irng());
        } else if (c_.family == "file") {
            h = file_h_;
            g = file_g_;
        } else {
            const OvInstance inst = random_ov(c_.ov_n, c_.ov_dim, c_.ov_density, instance_seed);
            SubisoInstance built =
                c_.family == "ov-simple" ? build_simple_instance(inst) : build_bounded_instance(inst, c_.degree);
            h = std::move(built.h);
            g = std::move(built.g);
            ov_answer = ov_bruteforce(inst);
        }

        r.pattern_size = h.size();
        r.host_size = g.size();
        r.levels = recursion_levels(h, g);
        const auto start = std::chrono::steady_clock::now();
        SubisoAnswer a;
        if (c_.algorithm == "det")
            a = subiso_det(h, g);
        else if (c_.algorithm == "rand-binary")
            a = rand_binary(h, g, solver_seed);
        else if (c_.algorithm == "rand-ternary")
            a = rand_ternary(h, g, solver_seed, policy_);
        else
            a = rand_dary(h, g, c_.degree, solver_seed);
        r.wall_ms = elapsed_ms(start);
        r.yes_calls = a.stats.yes_base_calls;
        r.no_calls = a.stats.no_base_calls;
        r.edge_queries = a.stats.edge_queries;
        r.answer = a.contained;
        const bool reference = c_.algorithm == "det" ? a.contained : subiso_det(h, g, true).contained;
        r.agrees = a.contained == reference && (!ov_answer || *ov_answer == reference);
        return r;
    }

private:
    static double elapsed_ms(std::chrono::steady_clock::time_point start) {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }

    const ExperimentConfig& c_;
    DecisionTree3x3 policy_;
    Tree file_h_;
    Tree file_g_;
};

template <typename Get>
Summary summarize(const std::vector<TrialRecord>& records, Get get) {
    Summary s;
    if (records.empty()) return s;
    double sum = 0;
    for (const auto& r : records) sum += static_cast<double>(get(r));
    s.mean = sum / static_cast<double>(records.size());
    if (records.size() > 1) {
        double sq = 0;
        for (const auto& r : records) {
            const double dv = static_cast<double>(get(r)) - s.mean;
            sq += dv * dv;
        }
        s.stddev = std::sqrt(sq / static_cast<double>(records.size() - 1));
    }
    return s;
}

double ipow(double base, int e) {
    double r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

ConfigResult aggregate(int height, int degree, const std::vector<TrialRecord>& records) {
    ConfigResult c;
    c.height = height;
    c.trials = records.size();
    c.yes_calls = summarize(records, [](const TrialRecord& r) { return r.yes_calls; });
    c.no_calls = summarize(records, [](const TrialRecord& r) { return r.no_calls; });
    c.base_calls = summarize(records, [](const TrialRecord& r) { return r.yes_calls + r.no_calls; });
    c.edge_queries = summarize(records, [](const TrialRecord& r) { return r.edge_queries; });
    c.wall_ms = summarize(records, [](const TrialRecord& r) { return r.wall_ms; });
    c.pattern_size = summarize(records, [](const TrialRecord& r) { return r.pattern_size; });
    c.host_size = summarize(records, [](const TrialRecord& r) { return r.host_size; });
    for (const auto& r : records) {
        const std::uint64_t base = r.yes_calls + r.no_calls;
        c.max_base_calls = std::max(c.max_base_calls, base);
        c.max_levels = std::max(c.max_levels, r.levels);
        if (static_cast<double>(base) > ipow(static_cast<double>(degree) * degree, r.levels))
            c.within_trivial_bound = false;
        c.yes_answers += r.answer ? 1 : 0;
        c.disagreements += r.agrees ? 0 : 1;
    }
    return c;
}

}  // namespace

GrowthFit fit_growth(const std::vector<ConfigResult>& results, bool use_edge_queries) {
    GrowthFit fit;
    fit.metric = use_edge_queries ? "edge_queries" : "base_calls";
    std::vector<const ConfigResult*> points;
    for (const auto& r : results) {
        const Summary& s = use_edge_queries ? r.edge_queries : r.base_calls;
        if (s.mean > 0) points.push_back(&r);
    }
    if (points.size() < 2) return fit;
    const ConfigResult& first = *points.front();
    const ConfigResult& last = *points.back();
    const Summary& a = use_edge_queries ? first.edge_queries : first.base_calls;
    const Summary& b = use_edge_queries ? last.edge_queries : last.base_calls;
    const double span = static_cast<double>(last.height - first.height);
    const double log_ratio = (std::log(b.mean) - std::log(a.mean)) / span;
    auto rel_var = [](const Summary& s, std::size_t n) {
        return (s.stddev * s.stddev) / (static_cast<double>(n) * s.mean * s.mean);
    };
    const double se = std::sqrt(rel_var(a, first.trials) + rel_var(b, last.trials)) / span;
    fit.ratio = std::exp(log_ratio);
    fit.ci_low = std::exp(log_ratio - 1.96 * se);
    fit.ci_high = std::exp(log_ratio + 1.96 * se);
    return fit;
}

BenchReport run_bench(const ExperimentConfig& config, unsigned threads) {
    config.validate();
    BenchReport report;
    report.config = config;
    report.config_hash = config.hash();
    report.version = version();
    const TrialRunner runner(config);

    std::vector<int> heights;
    if (height_family(config.family))
        for (int h = config.min_height; h <= config.max_height; ++h) heights.push_back(h);
    else
        heights.push_back(-1);

    const std::size_t total = heights.size() * config.trials;
    std::vector<TrialRecord> records(total);
    std::vector<char> done(total, 0);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            if (stop.load()) return;
            const std::size_t job = next.fetch_add(1);
            if (job >= total) return;
            const int height = heights[job / config.trials];
            const std::size_t trial = job % config.trials;
            const auto key = (static_cast<std::uint64_t>(height + 1) << 32) | trial;
            try {
                records[job] = runner.run(height, derive_seed(config.seed, key));
                done[job] = 1;
                if (!records[job].agrees) stop.store(true);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                stop.store(true);
            }
        }
    };
    if (threads == 0) threads = worker_count();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    for (std::size_t i = 0; i < heights.size(); ++i) {
        std::vector<TrialRecord> slice;
        for (std::size_t t = 0; t < config.trials; ++t) {
            const std::size_t job = i * config.trials + t;
            if (done[job]) slice.push_back(records[job]);
        }
        report.results.push_back(aggregate(heights[i], config.degree, slice));
        report.disagreements += report.results.back().disagreements;
    }
    report.aborted = stop.load() && report.disagreements > 0;

    if (heights.size() > 1 && config.algorithm != "lcst") {
        GrowthFit fit = fit_growth(report.results, config.algorithm == "det");
        const double d = config.degree;
        if (config.algorithm == "rand-binary") {
            fit.bound = (17 + std::sqrt(33.0)) / 8;
            fit.bound_source = "binary recurrence radius (17+sqrt(33))/8";
        } else if (config.algorithm == "rand-ternary") {
            fit.bound = verify_decision_tree_3x3(runner.policy()).spectral_radius;
            fit.bound_source = "spectral radius of the decision tree's dominant recurrence";
        } else if (config.algorithm == "rand-dary" && config.degree >= 3) {
            fit.bound = to_double(mixed_bound(config.degree));
            fit.bound_source = "mixed protocol bound d^2-d/3+2/3";
        } else {
            fit.bound = d * d;
            fit.bound_source = "d^2 child pairs per level";
        }
        fit.pass = fit.ratio <= fit.bound * fit.tolerance;
        report.growth = fit;
    }
    return report;
}

namespace {

json summary_json(const Summary& s) { return {{"mean", s.mean}, {"stddev", s.stddev}}; }

}  // namespace

std::string report_json(const BenchReport& report) {
    json j;
    j["version"] = report.version;
    j["config_hash"] = report.config_hash;
    j["config"] = json::parse(report.config.to_json());
    j["disagreements"] = report.disagreements;
    j["aborted"] = report.aborted;
    json results = json::array();
    for (const ConfigResult& c : report.results) {
        results.push_back({{"height", c.height},
                           {"trials", c.trials},
                           {"yes_base_calls", summary_json(c.yes_calls)},
                           {"no_base_calls", summary_json(c.no_calls)},
                           {"base_calls", summary_json(c.base_calls)},
                           {"edge_queries", summary_json(c.edge_queries)},
                           {"wall_ms", summary_json(c.wall_ms)},
                           {"pattern_size", summary_json(c.pattern_size)},
                           {"host_size", summary_json(c.host_size)},
                           {"max_base_calls", c.max_base_calls},
                           {"max_levels", c.max_levels},
                           {"within_trivial_bound", c.within_trivial_bound},
                           {"yes_answers", c.yes_answers},
                           {"disagreements", c.disagreements}});
    }
    j["results"] = results;
    if (report.growth) {
        const GrowthFit& g = *report.growth;
        j["growth"] = {{"metric", g.metric},      {"ratio", g.ratio},
                       {"ci_low", g.ci_low},      {"ci_high", g.ci_high},
                       {"bound", g.bound},        {"bound_source", g.bound_source},
                       {"tolerance", g.tolerance}, {"pass", g.pass}};
    }
    return j.dump(2) + "\n";
}

std::string report_csv(const BenchReport& report) {
    std::ostringstream out;
    out << std::setprecision(10);
    out << "config_hash,algorithm,family,degree,height,trials,yes_mean,no_mean,base_mean,base_stddev,"
           "edge_mean,wall_ms_mean,max_base_calls,disagreements,growth_ratio,growth_bound,growth_pass\n";
    for (const ConfigResult& c : report.results) {
        out << report.config_hash << ',' << report.config.algorithm << ',' << report.config.family << ','
            << report.config.degree << ',' << c.height << ',' << c.trials << ',' << c.yes_calls.mean << ','
            << c.no_calls.mean << ',' << c.base_calls.mean << ',' << c.base_calls.stddev << ','
            << c.edge_queries.mean << ',' << c.wall_ms.mean << ',' << c.max_base_calls << ',' << c.disagreements
            << ',';
        if (report.growth)
            out << report.growth->ratio << ',' << report.growth->bound << ',' << (report.growth->pass ? 1 : 0);
        else
            out << ",,";
        out << '\n';
    }
    return out.str();
}

bool VerifyReport::ok() const {
    return std::ranges::all_of(lines, [](const VerifyLine& l) { return l.pass || l.stretch; });
}

std::string VerifyReport::table() const {
    std::size_t w = 5;
    for (const auto& l : lines) w = std::max(w, l.check.size());
    std::ostringstream out;
    for (const auto& l : lines) {
        const char* status = l.pass ? "PASS" : (l.stretch ? "ATTEMPTED" : "FAIL");
        out << std::left << std::setw(10) << status << std::setw(static_cast<int>(w) + 2) << l.check << l.value;
        if (!l.bound.empty()) out << "  (bound " << l.bound << ")";
        out << '\n';
    }
    return out.str();
}

std::string VerifyReport::json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& l : lines)
        j.push_back({{"check", l.check}, {"value", l.value}, {"bound", l.bound}, {"pass", l.pass}, {"stretch", l.stretch}});
    return nlohmann::json{{"version", version()}, {"ok", ok()}, {"checks", j}}.dump(2) + "\n";
}

namespace {

std::string show(const Rational& r) {
    std::ostringstream out;
    out << to_string(r) << " = " << std::fixed << std::setprecision(4) << to_double(r);
    return out.str();
}

std::string show(const CostPair& p) { return "(" + to_string(p.yes_calls) + ", " + to_string(p.no_calls) + ")"; }

std::string show(double x, int digits = 6) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << x;
    return out.str();
}

}  // namespace

VerifyReport verify_matching_bounds(int d, std::size_t samples, std::uint64_t seed) {
    if (d < 1 || d > 4) throw ConstraintError("verify_matching_bounds: d must be in 1..4");
    const auto dd = static_cast<std::size_t>(d);
    std::vector<std::uint64_t> graphs;
    const bool exhaustive = d <= 3;
    if (exhaustive) {
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << (dd * dd)); ++m) graphs.push_back(m);
    } else {
        SplitMix64 rng(seed);
        for (std::size_t i = 0; i < samples; ++i) graphs.push_back(rng() & 0xffffULL);
    }
    Rational worst_mixed = 0, worst_no = 0, worst_yes = 0;
    std::size_t yes_graphs = 0, no_graphs = 0;
    for (std::uint64_t m : graphs) {
        const Adjacency a = Adjacency::from_mask(dd, dd, m);
        worst_mixed = std::max(worst_mixed, exact_expected_queries_mixed(a));
        if (has_perfect_matching(a)) {
            ++yes_graphs;
            worst_yes = std::max(worst_yes, exact_expected_queries_yescase(a));
        } else {
            ++no_graphs;
            worst_no = std::max(worst_no, exact_expected_queries_nocase(a));
        }
    }
    const std::string scope = (exhaustive ? "all " : "sampled ") + std::to_string(graphs.size()) + " graphs, d=" +
                              std::to_string(d);
    VerifyReport r;
    r.lines.push_back({"mixed protocol worst E[queries] (" + scope + ")", show(worst_mixed),
                       show(mixed_bound(d)), worst_mixed <= mixed_bound(d)});
    r.lines.push_back({"no-case protocol worst E[queries] on " + std::to_string(no_graphs) + " no-instances",
                       show(worst_no), show(nocase_bound(d)), worst_no <= nocase_bound(d)});
    r.lines.push_back({"yes-case protocol worst E[queries] on " + std::to_string(yes_graphs) + " yes-instances",
                       show(worst_yes), show(yescase_bound(d)), worst_yes <= yescase_bound(d)});
    return r;
}

VerifyReport verify_constants() {
    VerifyReport r;
    for (const ConstantCheck& c : recurrence_constants()) {
        char tol[32];
        std::snprintf(tol, sizeof tol, "%g", c.tolerance);
        r.lines.push_back({c.name, show(c.computed), show(c.expected, 4) + " +- " + tol, c.pass()});
    }
    return r;
}

VerifyReport verify_decision_tree(const DecisionTree3x3& tree) {
    const DecisionTreeReport rep = verify_decision_tree_3x3(tree);
    VerifyReport r;
    r.lines.push_back({"largest per-graph expected yes+no calls", show(rep.max_total), "9", rep.max_total <= 9});
    r.lines.push_back({"worst yes-instance cost pair", show(rep.worst_yes), "", true});
    r.lines.push_back({"worst no-instance cost pair", show(rep.worst_no), "", true});
    r.lines.push_back({"dominant recurrence " + rep.dominant.to_string(), show(rep.spectral_radius), "9",
                       rep.spectral_radius <= 9});

    const CostPair target_no{Rational(26, 9), Rational(37, 9)};
    std::vector<CostPair> target_yes{{Rational(131, 36), Rational(61, 36)}, {Rational(133, 36), Rational(5, 3)}};
    auto same_front = [](std::vector<CostPair> a, std::vector<CostPair> b) {
        auto less = [](const CostPair& x, const CostPair& y) {
            return x.yes_calls != y.yes_calls ? x.yes_calls < y.yes_calls : x.no_calls < y.no_calls;
        };
        std::ranges::sort(a, less);
        std::ranges::sort(b, less);
        return a == b;
    };
    VerifyLine no_line{"target no-instance pair", show(rep.worst_no), show(target_no), rep.worst_no == target_no};
    no_line.stretch = true;
    std::string front;
    for (const auto& p : rep.pareto_yes) front += (front.empty() ? "" : " ") + show(p);
    VerifyLine yes_line{"target yes-instance pareto pairs", front, show(target_yes[0]) + " " + show(target_yes[1]),
                        same_front(rep.pareto_yes, target_yes)};
    yes_line.stretch = true;
    VerifyLine radius_line{"target radius", show(rep.spectral_radius), "6.107 +- 0.001",
                           std::abs(rep.spectral_radius - 6.107) <= 1e-3};
    radius_line.stretch = true;
    r.lines.push_back(no_line);
    r.lines.push_back(yes_line);
    r.lines.push_back(radius_line);
    return r;
}

}  // namespace subiso
