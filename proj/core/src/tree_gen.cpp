#include "subiso/rng.hpp"
#include "subiso/tree.hpp"

#include <limits>

namespace subiso {
namespace {

constexpr std::uint64_t kMaxGeneratedNodes = 10'000'000;

}  // namespace

std::uint64_t complete_dary_size(int d, int height) {
    if (d < 0 || height < 0) return 0;
    std::uint64_t total = 0;
    std::uint64_t level = 1;
    for (int depth = 0; depth <= height; ++depth) {
        total += level;
        if (total > kMaxGeneratedNodes) return std::numeric_limits<std::uint64_t>::max();
        level *= static_cast<std::uint64_t>(d);
        if (level == 0) break;
    }
    return total;
}

Tree complete_dary(int d, int height) {
    if (d < 1 || height < 0) throw ConstraintError("complete_dary: need d >= 1 and height >= 0");
    if (complete_dary_size(d, height) > kMaxGeneratedNodes)
        throw ConstraintError("complete_dary: more than 10^7 nodes");
    Tree t;
    std::vector<NodeId> frontier{t.add_root()};
    for (int depth = 0; depth < height; ++depth) {
        std::vector<NodeId> next;
        next.reserve(frontier.size() * static_cast<std::size_t>(d));
        for (NodeId v : frontier)
            for (int i = 0; i < d; ++i) next.push_back(t.add_child(v));
        frontier = std::move(next);
    }
    return t;
}

Tree path_tree(std::size_t nodes) {
    Tree t;
    if (nodes == 0) return t;
    NodeId v = t.add_root();
    for (std::size_t i = 1; i < nodes; ++i) v = t.add_child(v);
    return t;
}

Tree star_tree(std::size_t leaves) {
    Tree t;
    const NodeId r = t.add_root();
    for (std::size_t i = 0; i < leaves; ++i) t.add_child(r);
    return t;
}

Tree random_tree(std::size_t size, int max_degree, int max_height, std::uint64_t seed) {
    if (size == 0) return {};
    if (max_height < 0 || max_degree < 0)
        throw ConstraintError("random_tree: negative degree or height bound");
    const std::uint64_t capacity =
        max_degree == 0 ? 1 : complete_dary_size(max_degree, max_height);
    if (size > capacity) throw ConstraintError("random_tree: no tree satisfies the bounds");

    SplitMix64 rng(seed);
    Tree t;
    std::vector<int> depth{0};
    // Nodes that can still take a child.
    std::vector<NodeId> open;
    const NodeId root = t.add_root();
    if (max_height > 0 && max_degree > 0) open.push_back(root);
    for (std::size_t i = 1; i < size; ++i) {
        const std::size_t slot = rng.below(open.size());
        const NodeId parent = open[slot];
        const NodeId child = t.add_child(parent);
        depth.push_back(depth[parent] + 1);
        if (t.degree(parent) == static_cast<std::size_t>(max_degree)) {
            open[slot] = open.back();
            open.pop_back();
        }
        if (depth[child] < max_height) open.push_back(child);
    }
    return t;
}

Tree shuffle_children(const Tree& t, std::uint64_t seed) {
    Tree out = t;
    SplitMix64 rng(seed);
    for (NodeId v = 0; v < out.size(); ++v) {
        std::vector<NodeId> ch(out.children(v).begin(), out.children(v).end());
        rng.shuffle(ch.begin(), ch.end());
        out.reorder_children(v, std::move(ch));
    }
    return out;
}

}  // namespace subiso
