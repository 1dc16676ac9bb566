#pragma once

#include "subiso/recurrence.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace subiso {

/// Deterministic decision tree over the nine edge queries of a 3x3
/// bipartite matching instance. Query q = 3*i + j asks for edge (u_i, v_j).
///
/// Text form: `(q i j <yes-subtree> <no-subtree>)`, leaves `accept` and
/// `reject`, indices 0-based.
class DecisionTree3x3 {
public:
    struct Node {
        int query = -1;  // -1 for a leaf
        bool accept = false;
        int on_yes = -1;
        int on_no = -1;

        bool leaf() const noexcept { return query < 0; }
    };

    struct Walk {
        bool accept = false;
        int yes_answers = 0;
        int no_answers = 0;
    };

    static DecisionTree3x3 parse(std::string_view sexp);
    std::string to_sexp() const;

    /// Queries all nine pairs in row-major order, no early exit.
    static DecisionTree3x3 full_order();
    /// Row-major order, stops as soon as the answer is forced.
    static DecisionTree3x3 greedy_baseline();

    /// Builds a tree from a query policy. `choose(known, values)` returns the
    /// next query given the answered set; it is only asked while the answer
    /// is not yet forced (or always, when `early_exit` is false).
    using Policy = std::function<int(std::uint32_t known, std::uint32_t values)>;
    static DecisionTree3x3 from_policy(const Policy& choose, bool early_exit);

    /// Checks structure (distinct queries on every path, both children
    /// present) and that every leaf's verdict is forced by the answers on
    /// its path. Throws ConstraintError otherwise.
    void validate() const;

    /// Walks the tree on the graph given as a 9-bit row-major mask.
    Walk walk(std::uint32_t graph) const;

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    int depth() const;

private:
    int build(std::uint32_t known, std::uint32_t values, bool early_exit, const Policy& choose);

    std::vector<Node> nodes_;
};

/// Forced verdict of a partial answer set: 1 = every completion has a
/// perfect matching, 0 = none has, -1 = undecided.
int forced_verdict(std::uint32_t known, std::uint32_t values);

/// The 72 equiprobable relabellings (side swap, left and right
/// permutation), each as a map from query slot to original edge slot.
const std::vector<std::array<std::uint8_t, 9>>& randomizations_3x3();

struct GraphCost {
    std::uint32_t graph = 0;
    bool matchable = false;
    CostPair cost;
};

struct DecisionTreeReport {
    std::vector<GraphCost> per_graph;  // all 512 graphs
    CostPair worst_yes;                // component-wise max over matchable graphs
    CostPair worst_no;                 // component-wise max over unmatchable graphs
    std::vector<CostPair> pareto_yes;  // maximal cost pairs, matchable graphs
    std::vector<CostPair> pareto_no;
    RecurrenceMatrix dominant;         // pareto pair combination with largest radius
    double spectral_radius = 0;
    Rational max_total = 0;            // largest expected yes+no count
};

/// Exact expected yes/no counts for every graph, averaged over the 72
/// relabellings. Validates the tree first.
DecisionTreeReport verify_decision_tree_3x3(const DecisionTree3x3& tree);

struct DecisionTreeSearchResult {
    DecisionTree3x3 tree;
    DecisionTreeReport report;
    int candidates = 0;
};

/// Searches for a tree with small spectral radius. Each candidate is an
/// optimal tree for a weighted average cost (dynamic programming over the
/// 3^9 partial answer states); weights are steered toward the currently
/// worst graph orbits. budget 0 returns the greedy baseline. The returned
/// report is always an exact re-verification.
DecisionTreeSearchResult search_decision_tree_3x3(int budget, std::uint64_t seed);

}  // namespace subiso
