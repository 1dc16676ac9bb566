#pragma once

#include "subiso/decision_tree.hpp"
#include "subiso/recurrence.hpp"
#include "subiso/tree.hpp"

#include <cstdint>

namespace subiso {

/// Counters of one solver run. A base call is a recursive invocation that
/// hits an empty tree: on the pattern side it answers yes, on the host side
/// no. edge_queries counts recursive sub-calls issued (one per adjacency
/// query between child subtrees).
struct RunStats {
    std::uint64_t yes_base_calls = 0;
    std::uint64_t no_base_calls = 0;
    std::uint64_t edge_queries = 0;
    std::uint64_t seed = 0;

    std::uint64_t base_calls() const noexcept { return yes_base_calls + no_base_calls; }
    friend bool operator==(const RunStats&, const RunStats&) = default;
};

/// `contained` is true iff `h` maps into `g` with root sent to root.
struct SubisoAnswer {
    bool contained = false;
    RunStats stats;
};

/// Exponential oracle: tries every injective assignment of pattern children
/// to host children. Labels are ignored. Intended for trees of <= 12 nodes.
bool subiso_bruteforce(const Tree& h, const Tree& g);

/// Edmonds–Matula: builds the child adjacency recursively and decides a
/// left-saturating matching. Any degree. stats.edge_queries counts node
/// pairs evaluated. With `memoize`, answers are cached by the pair of AHU
/// classes; counters then no longer follow the plain recursion.
SubisoAnswer subiso_det(const Tree& h, const Tree& g, bool memoize = false);

/// Randomized recursion for binary trees: swap each side's two children with
/// probability 1/2, then try (L,L),(R,R) before (L,R),(R,L), skipping calls
/// whose outcome cannot change the answer. Fresh coins at every call.
SubisoAnswer rand_binary(const Tree& h, const Tree& g, std::uint64_t seed);

/// Randomized recursion for ternary trees: children padded to three slots
/// with empty subtrees, one of 72 relabellings drawn uniformly, then
/// `policy` is walked with each query answered by a recursive call.
SubisoAnswer rand_ternary(const Tree& h, const Tree& g, std::uint64_t seed,
                          const DecisionTree3x3& policy);

/// Randomized recursion for degree <= d: children padded to d slots and
/// the child adjacency decided by the mixed matching query protocol, each
/// query answered by a recursive call.
SubisoAnswer rand_dary(const Tree& h, const Tree& g, int d, std::uint64_t seed);

/// Exact expected (yes, no) base-call counts of rand_binary, averaged over
/// its coins. Memoized over node pairs; throws ConstraintError when
/// |h| * |g| > 10^6.
CostPair expected_cost_exact_binary(const Tree& h, const Tree& g);

/// Number of recursion levels of a call on (h, g): one more than the
/// smaller height, 0 when either tree is empty. rand_binary makes at most
/// 4^levels base calls.
int recursion_levels(const Tree& h, const Tree& g);

}  // namespace subiso
