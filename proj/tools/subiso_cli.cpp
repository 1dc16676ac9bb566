// Command-line front end: solvers, LCST, OV reductions, benchmarks and the
// exhaustive verifiers.

#include "subiso/decision_tree.hpp"
#include "subiso/experiment.hpp"
#include "subiso/lcst.hpp"
#include "subiso/ov.hpp"
#include "subiso/subiso.hpp"
#include "subiso/tree.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;
using namespace subiso;

enum Exit : int {
    kOk = 0,
    kFailure = 1,
    kParseError = 2,
    kConstraintError = 3,
    kDisagreement = 4,
    kBoundViolation = 5,
};

/// Unreadable input files are reported like malformed ones.
std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path, 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

/// Writes to `path`, or to stdout when it is empty.
void emit(const std::string& path, const std::string& text) {
    if (path.empty())
        std::cout << text;
    else
        write_file(path, text);
}

Tree read_tree(const std::string& path) { return parse_tree(read_file(path)); }

struct SolveArgs {
    std::string algo = "det";
    std::string pattern;
    std::string host;
    int degree = 0;
    std::uint64_t seed = 0;
    std::string decision_tree;
    std::string stats;
    std::string format = "json";
};

int cmd_solve(const SolveArgs& a) {
    const Tree h = read_tree(a.pattern);
    const Tree g = read_tree(a.host);
    const auto start = std::chrono::steady_clock::now();
    SubisoAnswer r;
    if (a.algo == "det") {
        r = subiso_det(h, g);
    } else if (a.algo == "rand-binary") {
        r = rand_binary(h, g, a.seed);
    } else if (a.algo == "rand-ternary") {
        const DecisionTree3x3 policy = a.decision_tree.empty()
                                           ? DecisionTree3x3::greedy_baseline()
                                           : DecisionTree3x3::parse(read_file(a.decision_tree));
        r = rand_ternary(h, g, a.seed, policy);
    } else {
        const int d = a.degree > 0 ? a.degree
                                   : static_cast<int>(std::max<std::size_t>(
                                         1, std::max(metrics(h).max_degree, metrics(g).max_degree)));
        r = rand_dary(h, g, d, a.seed);
    }
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
    std::cout << (r.contained ? "true" : "false") << '\n';

    if (!a.stats.empty()) {
        const int height = std::min(metrics(h).height, metrics(g).height);
        const json rec{{"algorithm", a.algo},
                       {"seed", a.seed},
                       {"yes_base_calls", r.stats.yes_base_calls},
                       {"no_base_calls", r.stats.no_base_calls},
                       {"edge_queries", r.stats.edge_queries},
                       {"answer", r.contained},
                       {"h_size", h.size()},
                       {"g_size", g.size()},
                       {"height", height},
                       {"elapsed_ns", elapsed}};
        if (a.format == "csv") {
            std::ostringstream out;
            out << "algorithm,seed,yes_base_calls,no_base_calls,edge_queries,answer,h_size,g_size,height,"
                   "elapsed_ns\n"
                << a.algo << ',' << a.seed << ',' << r.stats.yes_base_calls << ',' << r.stats.no_base_calls << ','
                << r.stats.edge_queries << ',' << (r.contained ? "true" : "false") << ',' << h.size() << ','
                << g.size() << ',' << height << ',' << elapsed << '\n';
            write_file(a.stats, out.str());
        } else {
            write_file(a.stats, rec.dump(2) + "\n");
        }
    }
    return kOk;
}

struct LcstArgs {
    std::string pattern;
    std::string host;
    bool labelled = false;
    bool witness = false;
};

int cmd_lcst(const LcstArgs& a) {
    const Tree h = read_tree(a.pattern);
    const Tree g = read_tree(a.host);
    const LcstResult r = a.labelled ? llcs(h, g) : lcst(h, g);
    std::cout << r.size << '\n';
    if (a.witness)
        for (const auto& [x, y] : r.witness) std::cout << x << ' ' << y << '\n';
    return kOk;
}

json sidecar(const std::string& construction, int d, const Tree& h, const Tree& g) {
    const TreeMetrics mh = metrics(h);
    const TreeMetrics mg = metrics(g);
    return {{"construction", construction},
            {"d", d},
            {"measured_size", {{"h", mh.size}, {"g", mg.size}}},
            {"measured_height", {{"h", mh.height}, {"g", mg.height}}},
            {"measured_degree", {{"h", mh.max_degree}, {"g", mg.max_degree}}}};
}

struct ReduceArgs {
    std::string ov;
    std::string kind = "simple";
    int degree = 2;
    std::string out = "reduced";
};

int cmd_reduce(const ReduceArgs& a) {
    const OvInstance inst = parse_ov(read_file(a.ov));
    try {
        inst.validate();
    } catch (const ConstraintError& e) {
        throw ParseError(e.what(), 0);
    }
    const std::string& p = a.out;
    if (a.kind == "lcst") {
        const LcstInstanceBundle bundle = build_lcst_instance(inst, a.degree);
        json triples = json::array();
        for (std::size_t i = 0; i < bundle.triples.size(); ++i) {
            const LcstTriple& t = bundle.triples[i];
            const std::string stem = p + "." + std::to_string(i);
            write_file(stem + ".h.tree", serialize_tree(t.h) + "\n");
            write_file(stem + ".g.tree", serialize_tree(t.g) + "\n");
            json s = sidecar("lcst", a.degree, t.h, t.g);
            s["threshold"] = t.threshold;
            s["e_prime"] = t.e_prime;
            s["popcount"] = t.popcount;
            s["padded_n"] = t.padded_n;
            s["pattern"] = stem + ".h.tree";
            s["host"] = stem + ".g.tree";
            triples.push_back(std::move(s));
        }
        write_file(p + ".json", json{{"construction", "lcst"}, {"d", a.degree}, {"triples", triples}}.dump(2) + "\n");
        std::cout << bundle.triples.size() << " triples\n";
        return kOk;
    }
    const bool bounded = a.kind == "bounded";
    const SubisoInstance built = bounded ? build_bounded_instance(inst, a.degree) : build_simple_instance(inst);
    write_file(p + ".h.tree", serialize_tree(built.h) + "\n");
    write_file(p + ".g.tree", serialize_tree(built.g) + "\n");
    json s = sidecar(a.kind, bounded ? a.degree : 0, built.h, built.g);
    s["flags"] = {{"trivial", built.trivial}, {"padded_n", built.padded_n}};
    write_file(p + ".json", s.dump(2) + "\n");
    return kOk;
}

int cmd_ov_check(const std::string& path) {
    const OvInstance inst = parse_ov(read_file(path));
    try {
        inst.validate();
    } catch (const ConstraintError& e) {
        throw ParseError(e.what(), 0);
    }
    std::cout << (ov_bruteforce(inst) ? "true" : "false") << '\n';
    return kOk;
}

int cmd_bench(ExperimentConfig c) {
    if (!c.decision_tree.empty()) c.decision_tree = read_file(c.decision_tree);
    const BenchReport r = run_bench(c);
    emit(c.out, c.format == "csv" ? report_csv(r) : report_json(r));
    if (r.disagreements > 0) {
        std::cerr << "Las Vegas disagreement in " << r.disagreements << " trial(s)\n";
        return kDisagreement;
    }
    return kOk;
}

struct VerifyArgs {
    int matching_d = 0;
    bool constants = false;
    std::string decision_tree;
    int search_budget = -1;
    std::uint64_t seed = 0;
    std::string format = "table";
    std::string out;
};

int cmd_verify(const VerifyArgs& a) {
    const bool all = a.matching_d == 0 && !a.constants && a.decision_tree.empty() && a.search_budget < 0;
    VerifyReport report;
    auto append = [&](const VerifyReport& r) { report.lines.insert(report.lines.end(), r.lines.begin(), r.lines.end()); };
    if (all || a.matching_d > 0) append(verify_matching_bounds(a.matching_d > 0 ? a.matching_d : 3, 2000, a.seed));
    if (all || a.constants) append(verify_constants());
    if (!a.decision_tree.empty()) append(verify_decision_tree(DecisionTree3x3::parse(read_file(a.decision_tree))));
    if (a.search_budget >= 0) append(verify_decision_tree(search_decision_tree_3x3(a.search_budget, a.seed).tree));
    if (all) append(verify_decision_tree(DecisionTree3x3::full_order()));
    emit(a.out, a.format == "json" ? report.json() : report.table());
    return report.ok() ? kOk : kBoundViolation;
}

int cmd_search(int budget, std::uint64_t seed, const std::string& out) {
    const DecisionTreeSearchResult r = search_decision_tree_3x3(budget, seed);
    emit(out, r.tree.to_sexp() + "\n");
    std::cerr << "candidates " << r.candidates << ", radius " << r.report.spectral_radius << ", dominant "
              << r.report.dominant.to_string() << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rooted subtree isomorphism toolkit"};
    app.set_version_flag("--version", subiso::version());
    app.require_subcommand(1);

    SolveArgs solve;
    auto* s = app.add_subcommand("solve", "Decide rooted containment of a pattern tree in a host tree");
    s->add_option("--algo", solve.algo, "Solver")
        ->check(CLI::IsMember({"det", "rand-binary", "rand-ternary", "rand-dary"}));
    s->add_option("--pattern", solve.pattern, "Pattern tree file")->required();
    s->add_option("--host", solve.host, "Host tree file")->required();
    s->add_option("--degree", solve.degree, "Slot count for rand-dary (default: largest degree)");
    s->add_option("--seed", solve.seed, "Random seed");
    s->add_option("--decision-tree", solve.decision_tree, "Decision tree file for rand-ternary");
    s->add_option("--stats", solve.stats, "Write a stats record to this path");
    s->add_option("--format", solve.format, "Stats format")->check(CLI::IsMember({"json", "csv"}));

    LcstArgs lc;
    auto* l = app.add_subcommand("lcst", "Size of the largest common rooted subtree");
    l->add_option("--pattern", lc.pattern, "First tree file")->required();
    l->add_option("--host", lc.host, "Second tree file")->required();
    l->add_flag("--labelled", lc.labelled, "Require equal labels on mapped nodes");
    l->add_flag("--witness", lc.witness, "Print the mapped node pairs");

    ReduceArgs red;
    auto* r = app.add_subcommand("reduce", "Build tree instances from an OV file");
    r->add_option("--ov", red.ov, "OV instance file")->required();
    r->add_option("--kind", red.kind, "Construction")->check(CLI::IsMember({"simple", "bounded", "lcst"}));
    r->add_option("--degree", red.degree, "Degree bound d (bounded, lcst)")->check(CLI::PositiveNumber);
    r->add_option("--out", red.out, "Output path prefix");

    std::string ov_path;
    auto* o = app.add_subcommand("ov-check", "Brute-force orthogonal vectors answer");
    o->add_option("--ov", ov_path, "OV instance file")->required();

    ExperimentConfig cfg;
    auto* b = app.add_subcommand("bench", "Run a seeded trial farm and write a report");
    b->add_option("--algo", cfg.algorithm, "det | rand-binary | rand-ternary | rand-dary | lcst");
    b->add_option("--family", cfg.family, "random | complete | ov-simple | ov-bounded | ov-lcst | file");
    b->add_option("--degree", cfg.degree, "Degree d");
    b->add_option("--min-height", cfg.min_height);
    b->add_option("--max-height", cfg.max_height);
    b->add_option("--leaf-drop", cfg.leaf_drop, "Leaf drop probability (complete family)");
    b->add_option("--min-size", cfg.min_size, "Host size range (random family)");
    b->add_option("--max-size", cfg.max_size);
    b->add_option("--ov-n", cfg.ov_n, "List length (OV families)");
    b->add_option("--ov-dim", cfg.ov_dim, "Dimension (OV families)");
    b->add_option("--ov-density", cfg.ov_density, "Probability of a 1 entry");
    b->add_option("--trials", cfg.trials, "Trials per configuration");
    b->add_option("--seed", cfg.seed, "Base seed");
    b->add_option("--pattern", cfg.pattern_path, "Pattern tree (file family)");
    b->add_option("--host", cfg.host_path, "Host tree (file family)");
    b->add_option("--decision-tree", cfg.decision_tree, "Decision tree file for rand-ternary");
    b->add_option("--out", cfg.out, "Report path (default stdout)");
    b->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "csv"}));

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "Exhaustive bound checks (all of them when no option is given)");
    v->add_option("--matching-bounds", ver.matching_d, "Protocol bounds for d x d graphs")->check(CLI::Range(1, 4));
    v->add_flag("--constants", ver.constants, "Recurrence constants");
    v->add_option("--decision-tree", ver.decision_tree, "Decision tree file to verify");
    v->add_option("--search", ver.search_budget, "Search a ternary decision tree with this budget and verify it");
    v->add_option("--seed", ver.seed, "Seed for sampling and search");
    v->add_option("--format", ver.format)->check(CLI::IsMember({"table", "json"}));
    v->add_option("--out", ver.out, "Report path (default stdout)");

    int budget = 200;
    std::uint64_t search_seed = 0;
    std::string search_out;
    auto* t = app.add_subcommand("search-ternary", "Search a 3x3 decision tree and print it");
    t->add_option("--budget", budget, "Number of candidate trees")->check(CLI::NonNegativeNumber);
    t->add_option("--seed", search_seed, "Seed");
    t->add_option("--out", search_out, "Output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*s) return cmd_solve(solve);
        if (*l) return cmd_lcst(lc);
        if (*r) return cmd_reduce(red);
        if (*o) return cmd_ov_check(ov_path);
        if (*b) return cmd_bench(cfg);
        if (*v) return cmd_verify(ver);
        if (*t) return cmd_search(budget, search_seed, search_out);
    } catch (const subiso::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParseError;
    } catch (const subiso::ConstraintError& e) {
        std::cerr << "constraint violation: " << e.what() << '\n';
        return kConstraintError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
