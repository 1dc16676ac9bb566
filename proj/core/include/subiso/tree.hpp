#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace subiso {

using NodeId = std::uint32_t;

/// Sentinel for "no node". A child slot holding kEmpty is the empty subtree.
inline constexpr NodeId kEmpty = std::numeric_limits<NodeId>::max();

struct Node {
    std::string label;  // empty means unlabelled
    std::vector<NodeId> children;
};

struct TreeMetrics {
    std::size_t size = 0;
    int height = -1;
    std::size_t max_degree = 0;

    friend bool operator==(const TreeMetrics&, const TreeMetrics&) = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Thrown when an input violates a precondition (degree bound, size cap,
/// infeasible generator parameters).
class ConstraintError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Rooted, unordered tree stored in an arena. Child order is storage order
/// only; every isomorphism-level operation ignores it.
///
/// Trees are built through TreeBuilder-style calls (add_node/add_child) and
/// are treated as immutable once handed to a solver.
class Tree {
public:
    Tree() = default;

    static Tree single(std::string label = {});

    bool empty() const noexcept { return root_ == kEmpty; }
    NodeId root() const noexcept { return root_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    const Node& node(NodeId id) const { return nodes_.at(id); }
    std::span<const NodeId> children(NodeId id) const { return nodes_[id].children; }
    std::size_t degree(NodeId id) const { return id == kEmpty ? 0 : nodes_[id].children.size(); }
    const std::string& label(NodeId id) const { return nodes_[id].label; }

    /// Creates the root of an empty tree. Throws if a root exists.
    NodeId add_root(std::string label = {});
    NodeId add_child(NodeId parent, std::string label = {});

    /// Copies `other` below `parent` (or as the root when this tree is empty
    /// and parent == kEmpty). Returns the id of the grafted root.
    NodeId graft(NodeId parent, const Tree& other);

    /// Subtree rooted at `id`, re-indexed into a fresh arena.
    Tree subtree(NodeId id) const;

    /// Nodes in an order where every parent precedes its children.
    std::vector<NodeId> preorder() const;

    /// Throws ConstraintError if the arena does not form a single rooted tree.
    void validate() const;

    void set_label(NodeId id, std::string label) { nodes_.at(id).label = std::move(label); }
    void reorder_children(NodeId id, std::vector<NodeId> order);

    const std::vector<Node>& nodes() const noexcept { return nodes_; }

private:
    std::vector<Node> nodes_;
    NodeId root_ = kEmpty;
};

TreeMetrics metrics(const Tree& t);
/// Height of the subtree at `id` (edges); -1 for kEmpty.
int subtree_height(const Tree& t, NodeId id);
/// Sizes of all subtrees, indexed by node id.
std::vector<std::size_t> subtree_sizes(const Tree& t);

/// Grammar: tree := "" | node ; node := [label] "(" [node {"," node}] ")".
Tree parse_tree(std::string_view text);
/// Canonical text: children in AHU order, no whitespace.
std::string serialize_tree(const Tree& t);
/// Text in storage order (not an isomorphism invariant).
std::string serialize_ordered(const Tree& t);

/// Isomorphism code for rooted, unordered, labelled trees. Two codes are
/// equal iff the trees are isomorphic.
std::string ahu_canonize(const Tree& t);
/// Per-node class ids; equal ids at equal depth iff isomorphic subtrees.
/// Ids are only comparable within one tree and one depth.
std::vector<std::uint32_t> ahu_ranks(const Tree& t);

Tree complete_dary(int d, int height);
Tree path_tree(std::size_t nodes);
Tree star_tree(std::size_t leaves);
/// Uniform-attachment tree with at most max_degree children per node and
/// height at most max_height. Deterministic in `seed`.
Tree random_tree(std::size_t size, int max_degree, int max_height, std::uint64_t seed);
/// Node count of complete_dary(d, height), or nullopt-like max() on overflow.
std::uint64_t complete_dary_size(int d, int height);

/// Returns a copy with children of every node shuffled (same isomorphism class).
Tree shuffle_children(const Tree& t, std::uint64_t seed);
/// Copy of t without leaf `leaf` (which must not be the root).
Tree remove_leaf(const Tree& t, NodeId leaf);

}  // namespace subiso
