#pragma once

#include "subiso/tree.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace subiso {

/// Largest common rooted subtree (roots mapped to roots, parent-child edges
/// preserved). `witness` lists the mapped (pattern node, host node) pairs,
/// root pair first; `node_pairs` counts recursive invocations.
struct LcstResult {
    std::size_t size = 0;
    std::vector<std::pair<NodeId, NodeId>> witness;
    std::uint64_t node_pairs = 0;
};

/// Labelled variant: node pairs only contribute when their labels are equal.
/// Returns 0 when either tree is empty or the root labels differ.
LcstResult llcs(const Tree& h, const Tree& g);

/// Unlabelled variant: llcs with every label treated as equal.
LcstResult lcst(const Tree& h, const Tree& g);

}  // namespace subiso
