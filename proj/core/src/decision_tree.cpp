#include "subiso/decision_tree.hpp"

#include "subiso/rng.hpp"
#include "subiso/tree.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace subiso {
namespace {

constexpr std::uint32_t kAll = 0x1FF;
constexpr int kSlots = 9;

const std::array<bool, 512>& pm_table() {
    static const std::array<bool, 512> table = [] {
        std::array<bool, 512> t{};
        for (std::uint32_t g = 0; g < 512; ++g) t[g] = has_perfect_matching(Adjacency::from_mask(3, 3, g));
        return t;
    }();
    return table;
}

class SexpReader {
public:
    explicit SexpReader(std::string_view text) : text_(text) {}

    /// Appends the subtree at the cursor to `out` and returns its index.
    int read(std::vector<DecisionTree3x3::Node>& out, int depth) {
        skip_ws();
        if (depth > kSlots + 1) fail("decision tree deeper than 9 queries");
        const auto self = out.size();
        out.emplace_back();
        if (at('(')) {
            ++pos_;
            if (word() != "q") fail("expected 'q'");
            const int i = number();
            const int j = number();
            if (i > 2 || j > 2) fail("query index out of range");
            out[self].query = 3 * i + j;
            const int yes = read(out, depth + 1);
            const int no = read(out, depth + 1);
            out[self].on_yes = yes;
            out[self].on_no = no;
            skip_ws();
            if (!at(')')) fail("expected ')'");
            ++pos_;
        } else {
            const std::string w = word();
            if (w == "accept") out[self].accept = true;
            else if (w != "reject") fail("expected '(', 'accept' or 'reject'");
        }
        return static_cast<int>(self);
    }

    void finish() {
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters");
    }

private:
    std::string word() {
        skip_ws();
        const auto start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a word");
        return std::string(text_.substr(start, pos_ - start));
    }

    int number() {
        skip_ws();
        const auto start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_ || pos_ - start > 2) fail("expected a small integer");
        return std::stoi(std::string(text_.substr(start, pos_ - start)));
    }

    bool at(char c) const { return pos_ < text_.size() && text_[pos_] == c; }
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("decision tree: " + what, pos_);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void append_sexp(const std::vector<DecisionTree3x3::Node>& nodes, int index, std::string& out) {
    const auto& n = nodes[static_cast<std::size_t>(index)];
    if (n.leaf()) {
        out += n.accept ? "accept" : "reject";
        return;
    }
    out += "(q ";
    out += std::to_string(n.query / 3);
    out += ' ';
    out += std::to_string(n.query % 3);
    out += ' ';
    append_sexp(nodes, n.on_yes, out);
    out += ' ';
    append_sexp(nodes, n.on_no, out);
    out += ')';
}

bool pareto_dominated(const CostPair& p, const CostPair& q) {
    return p.yes_calls <= q.yes_calls && p.no_calls <= q.no_calls && !(p == q);
}

std::vector<CostPair> pareto_front(std::vector<CostPair> pairs) {
    std::sort(pairs.begin(), pairs.end(), [](const CostPair& a, const CostPair& b) {
        return a.yes_calls != b.yes_calls ? a.yes_calls > b.yes_calls : a.no_calls > b.no_calls;
    });
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    std::vector<CostPair> front;
    for (const auto& p : pairs) {
        const bool dominated = std::any_of(pairs.begin(), pairs.end(),
                                           [&](const CostPair& q) { return pareto_dominated(p, q); });
        if (!dominated) front.push_back(p);
    }
    return front;
}

}  // namespace

int forced_verdict(std::uint32_t known, std::uint32_t values) {
    const auto& pm = pm_table();
    const std::uint32_t free_bits = kAll & ~known;
    bool any = false;
    bool all = true;
    std::uint32_t sub = free_bits;
    for (;;) {
        const bool m = pm[(values & known) | sub];
        any = any || m;
        all = all && m;
        if (any && !all) return -1;
        if (sub == 0) break;
        sub = (sub - 1) & free_bits;
    }
    return all ? 1 : 0;
}

const std::vector<std::array<std::uint8_t, 9>>& randomizations_3x3() {
    static const std::vector<std::array<std::uint8_t, 9>> maps = [] {
        std::vector<std::array<std::uint8_t, 9>> out;
        std::array<int, 3> pu{0, 1, 2};
        for (int swap_sides = 0; swap_sides < 2; ++swap_sides) {
            std::sort(pu.begin(), pu.end());
            do {
                std::array<int, 3> pv{0, 1, 2};
                do {
                    std::array<std::uint8_t, 9> m{};
                    for (int i = 0; i < 3; ++i)
                        for (int j = 0; j < 3; ++j)
                            m[static_cast<std::size_t>(3 * i + j)] = static_cast<std::uint8_t>(
                                swap_sides ? 3 * pv[static_cast<std::size_t>(j)] + pu[static_cast<std::size_t>(i)]
                                           : 3 * pu[static_cast<std::size_t>(i)] + pv[static_cast<std::size_t>(j)]);
                    out.push_back(m);
                } while (std::next_permutation(pv.begin(), pv.end()));
            } while (std::next_permutation(pu.begin(), pu.end()));
        }
        return out;
    }();
    return maps;
}

DecisionTree3x3 DecisionTree3x3::parse(std::string_view sexp) {
    DecisionTree3x3 t;
    SexpReader reader(sexp);
    reader.read(t.nodes_, 1);
    reader.finish();
    t.validate();
    return t;
}

std::string DecisionTree3x3::to_sexp() const {
    std::string out;
    if (!nodes_.empty()) append_sexp(nodes_, 0, out);
    return out;
}

int DecisionTree3x3::build(std::uint32_t known, std::uint32_t values, bool early_exit,
                           const Policy& choose) {
    const auto index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    const int verdict = forced_verdict(known, values);
    if ((early_exit && verdict >= 0) || known == kAll) {
        nodes_[static_cast<std::size_t>(index)].accept = verdict == 1;
        return index;
    }
    const int q = choose(known, values);
    if (q < 0 || q >= kSlots || (known >> q) & 1U)
        throw std::logic_error("decision tree policy returned an invalid query");
    const std::uint32_t bit = 1U << q;
    nodes_[static_cast<std::size_t>(index)].query = q;
    const int yes = build(known | bit, values | bit, early_exit, choose);
    const int no = build(known | bit, values, early_exit, choose);
    nodes_[static_cast<std::size_t>(index)].on_yes = yes;
    nodes_[static_cast<std::size_t>(index)].on_no = no;
    return index;
}

DecisionTree3x3 DecisionTree3x3::from_policy(const Policy& choose, bool early_exit) {
    DecisionTree3x3 t;
    t.build(0, 0, early_exit, choose);
    t.validate();
    return t;
}

DecisionTree3x3 DecisionTree3x3::full_order() {
    return from_policy([](std::uint32_t known, std::uint32_t) { return std::countr_one(known); }, false);
}

DecisionTree3x3 DecisionTree3x3::greedy_baseline() {
    return from_policy([](std::uint32_t known, std::uint32_t) { return std::countr_one(known); }, true);
}

void DecisionTree3x3::validate() const {
    if (nodes_.empty()) throw ConstraintError("decision tree: no nodes");
    std::vector<char> visited(nodes_.size(), 0);
    struct Frame {
        int node;
        std::uint32_t known;
        std::uint32_t values;
        int depth;
    };
    std::vector<Frame> stack{{0, 0, 0, 0}};
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        if (f.node < 0 || static_cast<std::size_t>(f.node) >= nodes_.size())
            throw ConstraintError("decision tree: dangling child index");
        if (visited[static_cast<std::size_t>(f.node)]++)
            throw ConstraintError("decision tree: node reachable twice");
        const Node& n = nodes_[static_cast<std::size_t>(f.node)];
        if (n.leaf()) {
            if (forced_verdict(f.known, f.values) != (n.accept ? 1 : 0))
                throw ConstraintError("decision tree: inconsistent leaf verdict");
            continue;
        }
        if (n.query >= kSlots) throw ConstraintError("decision tree: query out of range");
        const std::uint32_t bit = 1U << n.query;
        if (f.known & bit) throw ConstraintError("decision tree: repeated query on a path");
        if (f.depth >= kSlots) throw ConstraintError("decision tree: deeper than 9");
        stack.push_back({n.on_yes, f.known | bit, f.values | bit, f.depth + 1});
        stack.push_back({n.on_no, f.known | bit, f.values, f.depth + 1});
    }
}

DecisionTree3x3::Walk DecisionTree3x3::walk(std::uint32_t graph) const {
    Walk w;
    int index = 0;
    for (;;) {
        const Node& n = nodes_[static_cast<std::size_t>(index)];
        if (n.leaf()) {
            w.accept = n.accept;
            return w;
        }
        if ((graph >> n.query) & 1U) {
            ++w.yes_answers;
            index = n.on_yes;
        } else {
            ++w.no_answers;
            index = n.on_no;
        }
    }
}

int DecisionTree3x3::depth() const {
    int best = 0;
    std::vector<std::pair<int, int>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [index, d] = stack.back();
        stack.pop_back();
        const Node& n = nodes_[static_cast<std::size_t>(index)];
        if (n.leaf()) {
            best = std::max(best, d);
            continue;
        }
        stack.emplace_back(n.on_yes, d + 1);
        stack.emplace_back(n.on_no, d + 1);
    }
    return best;
}

DecisionTreeReport verify_decision_tree_3x3(const DecisionTree3x3& tree) {
    tree.validate();
    const auto& maps = randomizations_3x3();
    const auto& pm = pm_table();
    DecisionTreeReport r;
    r.per_graph.reserve(512);
    std::vector<CostPair> yes_pairs;
    std::vector<CostPair> no_pairs;
    for (std::uint32_t g = 0; g < 512; ++g) {
        long yes = 0;
        long no = 0;
        for (const auto& m : maps) {
            std::uint32_t relabelled = 0;
            for (int s = 0; s < kSlots; ++s)
                if ((g >> m[static_cast<std::size_t>(s)]) & 1U) relabelled |= 1U << s;
            const auto w = tree.walk(relabelled);
            if (w.accept != pm[g]) throw std::logic_error("decision tree walk disagrees with matching");
            yes += w.yes_answers;
            no += w.no_answers;
        }
        GraphCost gc{g, pm[g], {Rational(yes, static_cast<long>(maps.size())),
                                Rational(no, static_cast<long>(maps.size()))}};
        (gc.matchable ? yes_pairs : no_pairs).push_back(gc.cost);
        r.max_total = std::max(r.max_total, gc.cost.total());
        r.per_graph.push_back(std::move(gc));
    }
    for (const auto& p : yes_pairs) {
        r.worst_yes.yes_calls = std::max(r.worst_yes.yes_calls, p.yes_calls);
        r.worst_yes.no_calls = std::max(r.worst_yes.no_calls, p.no_calls);
    }
    for (const auto& p : no_pairs) {
        r.worst_no.yes_calls = std::max(r.worst_no.yes_calls, p.yes_calls);
        r.worst_no.no_calls = std::max(r.worst_no.no_calls, p.no_calls);
    }
    r.pareto_yes = pareto_front(std::move(yes_pairs));
    r.pareto_no = pareto_front(std::move(no_pairs));
    r.spectral_radius = -1;
    for (const auto& p : r.pareto_yes) {
        for (const auto& q : r.pareto_no) {
            const auto m = RecurrenceMatrix::from_rows(p, q);
            const double rho = m.spectral_radius();
            if (rho > r.spectral_radius) {
                r.spectral_radius = rho;
                r.dominant = m;
            }
        }
    }
    return r;
}

namespace {

/// Weighted-average-cost optimal trees by dynamic programming over partial
/// answer states (known, values), values a subset of known.
class TreeOptimizer {
public:
    TreeOptimizer() : forced_(kStates, -2), weight_(kStates), cost_(kStates), best_(kStates, -1) {
        for (std::uint32_t known = 0; known <= kAll; ++known) by_popcount_.push_back(known);
        std::stable_sort(by_popcount_.begin(), by_popcount_.end(), [](std::uint32_t a, std::uint32_t b) {
            return std::popcount(a) > std::popcount(b);
        });
        for (std::uint32_t known : by_popcount_) {
            for_each_submask(known, [&](std::uint32_t values) {
                forced_[index(known, values)] = static_cast<signed char>(forced_verdict(known, values));
            });
        }
    }

    /// graph_weight: 512 weights; yes_cost/no_cost: price of one answer.
    DecisionTree3x3 optimize(const std::vector<double>& graph_weight, double yes_cost, double no_cost,
                             SplitMix64& rng) {
        for (std::uint32_t known : by_popcount_) {
            std::array<int, kSlots> order{};
            std::iota(order.begin(), order.end(), 0);
            rng.shuffle(order.begin(), order.end());
            for_each_submask(known, [&](std::uint32_t values) {
                const auto s = index(known, values);
                if (known == kAll) {
                    weight_[s] = graph_weight[values];
                } else {
                    const std::uint32_t bit = 1U << std::countr_one(known);
                    weight_[s] = weight_[index(known | bit, values | bit)] + weight_[index(known | bit, values)];
                }
                if (forced_[s] >= 0) {
                    cost_[s] = 0;
                    return;
                }
                double best = std::numeric_limits<double>::infinity();
                int arg = -1;
                for (int q : order) {
                    const std::uint32_t bit = 1U << q;
                    if (known & bit) continue;
                    const auto on_yes = index(known | bit, values | bit);
                    const auto on_no = index(known | bit, values);
                    const double c = yes_cost * weight_[on_yes] + no_cost * weight_[on_no] + cost_[on_yes] +
                                     cost_[on_no];
                    if (c < best - 1e-12) {
                        best = c;
                        arg = q;
                    }
                }
                cost_[s] = best;
                best_[s] = arg;
            });
        }
        return DecisionTree3x3::from_policy(
            [this](std::uint32_t known, std::uint32_t values) { return best_[index(known, values)]; }, true);
    }

private:
    static constexpr std::size_t kStates = std::size_t{1} << 18;

    static std::size_t index(std::uint32_t known, std::uint32_t values) {
        return (static_cast<std::size_t>(known) << 9) | values;
    }

    template <typename F>
    static void for_each_submask(std::uint32_t mask, F&& f) {
        std::uint32_t sub = mask;
        for (;;) {
            f(sub);
            if (sub == 0) break;
            sub = (sub - 1) & mask;
        }
    }

    std::vector<std::uint32_t> by_popcount_;
    std::vector<signed char> forced_;
    std::vector<double> weight_;
    std::vector<double> cost_;
    std::vector<int> best_;
};

struct Eigen2 {
    double rho;
    std::array<double, 2> right;  // growth direction of (T_yes, T_no)
    std::array<double, 2> left;
};

Eigen2 perron(const RecurrenceMatrix& m) {
    const double a = to_double(m.yes_yes), b = to_double(m.yes_no);
    const double c = to_double(m.no_yes), d = to_double(m.no_no);
    Eigen2 e{};
    e.rho = spectral_radius(a, b, c, d);
    e.right = b > 0 ? std::array<double, 2>{b, e.rho - a} : std::array<double, 2>{1.0, 1.0};
    e.left = c > 0 ? std::array<double, 2>{c, e.rho - a} : std::array<double, 2>{1.0, 1.0};
    auto normalize = [](std::array<double, 2>& v) {
        const double s = std::abs(v[0]) + std::abs(v[1]);
        if (s > 0) v = {std::abs(v[0]) / s, std::abs(v[1]) / s};
        else v = {0.5, 0.5};
    };
    normalize(e.right);
    normalize(e.left);
    return e;
}

}  // namespace

DecisionTreeSearchResult search_decision_tree_3x3(int budget, std::uint64_t seed) {
    DecisionTreeSearchResult best{DecisionTree3x3::greedy_baseline(), {}, 1};
    best.report = verify_decision_tree_3x3(best.tree);
    if (budget <= 0) return best;

    const auto& maps = randomizations_3x3();
    const auto& pm = pm_table();
    // Orbits of the 72 relabellings; every graph in an orbit has the same
    // averaged cost.
    std::vector<int> orbit_of(512, -1);
    std::vector<int> orbit_size;
    for (std::uint32_t g = 0; g < 512; ++g) {
        if (orbit_of[g] >= 0) continue;
        const int id = static_cast<int>(orbit_size.size());
        orbit_size.push_back(0);
        for (const auto& m : maps) {
            std::uint32_t image = 0;
            for (int s = 0; s < kSlots; ++s)
                if ((g >> m[static_cast<std::size_t>(s)]) & 1U) image |= 1U << s;
            if (orbit_of[image] < 0) {
                orbit_of[image] = id;
                ++orbit_size.back();
            }
        }
    }
    const std::size_t orbits = orbit_size.size();
    std::vector<bool> orbit_matchable(orbits);
    std::vector<std::uint32_t> representative(orbits);
    for (std::uint32_t g = 0; g < 512; ++g) {
        orbit_matchable[static_cast<std::size_t>(orbit_of[g])] = pm[g];
        representative[static_cast<std::size_t>(orbit_of[g])] = g;
    }

    SplitMix64 rng(seed);
    TreeOptimizer optimizer;
    std::vector<double> cumulative_loss(orbits, 0.0);
    Eigen2 steer = perron(best.report.dominant);
    const double eta = 2.0;

    for (int iter = 0; iter < budget; ++iter) {
        std::vector<double> orbit_weight(orbits);
        for (int cls = 0; cls < 2; ++cls) {
            double peak = -std::numeric_limits<double>::infinity();
            for (std::size_t o = 0; o < orbits; ++o)
                if (orbit_matchable[o] == (cls == 0)) peak = std::max(peak, cumulative_loss[o]);
            double total = 0;
            for (std::size_t o = 0; o < orbits; ++o) {
                if (orbit_matchable[o] != (cls == 0)) continue;
                orbit_weight[o] = std::exp(eta * (cumulative_loss[o] - peak));
                total += orbit_weight[o];
            }
            const double class_weight = cls == 0 ? steer.left[0] : steer.left[1];
            for (std::size_t o = 0; o < orbits; ++o)
                if (orbit_matchable[o] == (cls == 0)) orbit_weight[o] *= class_weight / total;
        }
        std::vector<double> graph_weight(512);
        for (std::uint32_t g = 0; g < 512; ++g) {
            const auto o = static_cast<std::size_t>(orbit_of[g]);
            const double jitter = 1.0 + 0.05 * (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5);
            graph_weight[g] = orbit_weight[o] / orbit_size[o] * jitter;
        }

        auto tree = optimizer.optimize(graph_weight, steer.right[0], steer.right[1], rng);
        auto report = verify_decision_tree_3x3(tree);
        ++best.candidates;
        // Loss of each orbit relative to the worst orbit of its class.
        const auto& current = report;
        std::array<double, 2> peak{0, 0};
        std::vector<double> loss(orbits);
        for (std::size_t o = 0; o < orbits; ++o) {
            const auto& c = current.per_graph[representative[o]].cost;
            loss[o] = steer.right[0] * to_double(c.yes_calls) + steer.right[1] * to_double(c.no_calls);
            auto& p = peak[orbit_matchable[o] ? 0 : 1];
            p = std::max(p, loss[o]);
        }
        for (std::size_t o = 0; o < orbits; ++o) {
            const double p = peak[orbit_matchable[o] ? 0 : 1];
            if (p > 0) cumulative_loss[o] += loss[o] / p;
        }
        if (report.spectral_radius < best.report.spectral_radius - 1e-12) {
            best.tree = std::move(tree);
            best.report = std::move(report);
            steer = perron(best.report.dominant);
        }
    }
    return best;
}

}  // namespace subiso
