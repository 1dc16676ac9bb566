#include "subiso/tree.hpp"

#include <algorithm>
#include <utility>

namespace subiso {

Tree Tree::single(std::string label) {
    Tree t;
    t.add_root(std::move(label));
    return t;
}

NodeId Tree::add_root(std::string label) {
    if (root_ != kEmpty) throw ConstraintError("tree already has a root");
    nodes_.push_back(Node{std::move(label), {}});
    root_ = static_cast<NodeId>(nodes_.size() - 1);
    return root_;
}

NodeId Tree::add_child(NodeId parent, std::string label) {
    if (parent >= nodes_.size()) throw ConstraintError("add_child: invalid parent");
    nodes_.push_back(Node{std::move(label), {}});
    const auto id = static_cast<NodeId>(nodes_.size() - 1);
    nodes_[parent].children.push_back(id);
    return id;
}

NodeId Tree::graft(NodeId parent, const Tree& other) {
    if (other.empty()) return kEmpty;
    if (parent == kEmpty ? root_ != kEmpty : parent >= nodes_.size())
        throw ConstraintError("graft: invalid parent");
    const auto offset = static_cast<NodeId>(nodes_.size());
    nodes_.reserve(nodes_.size() + other.size());
    for (const Node& n : other.nodes_) {
        Node copy{n.label, n.children};
        for (NodeId& c : copy.children) c += offset;
        nodes_.push_back(std::move(copy));
    }
    const NodeId grafted = other.root_ + offset;
    if (parent == kEmpty)
        root_ = grafted;
    else
        nodes_[parent].children.push_back(grafted);
    return grafted;
}

Tree Tree::subtree(NodeId id) const {
    Tree out;
    if (id == kEmpty) return out;
    // (source node, destination parent)
    std::vector<std::pair<NodeId, NodeId>> stack{{id, kEmpty}};
    while (!stack.empty()) {
        auto [src, dst_parent] = stack.back();
        stack.pop_back();
        const NodeId dst = dst_parent == kEmpty ? out.add_root(nodes_[src].label)
                                                : out.add_child(dst_parent, nodes_[src].label);
        const auto& ch = nodes_[src].children;
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.emplace_back(*it, dst);
    }
    return out;
}

std::vector<NodeId> Tree::preorder() const {
    std::vector<NodeId> order;
    if (empty()) return order;
    order.reserve(nodes_.size());
    std::vector<NodeId> stack{root_};
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        order.push_back(v);
        const auto& ch = nodes_[v].children;
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
    return order;
}

void Tree::validate() const {
    if (root_ == kEmpty) {
        if (!nodes_.empty()) throw ConstraintError("empty tree with stored nodes");
        return;
    }
    if (root_ >= nodes_.size()) throw ConstraintError("root index out of range");
    std::vector<int> parents(nodes_.size(), 0);
    for (const Node& n : nodes_) {
        for (NodeId c : n.children) {
            if (c >= nodes_.size()) throw ConstraintError("child index out of range");
            if (++parents[c] > 1) throw ConstraintError("node with more than one parent");
        }
    }
    if (parents[root_] != 0) throw ConstraintError("root has a parent");
    if (preorder().size() != nodes_.size()) throw ConstraintError("tree is not connected");
}

void Tree::reorder_children(NodeId id, std::vector<NodeId> order) {
    auto& ch = nodes_.at(id).children;
    auto a = ch;
    auto b = order;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw ConstraintError("reorder_children: not a permutation");
    ch = std::move(order);
}

std::vector<std::size_t> subtree_sizes(const Tree& t) {
    std::vector<std::size_t> sizes(t.size(), 1);
    const auto order = t.preorder();
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        for (NodeId c : t.children(*it)) sizes[*it] += sizes[c];
    return sizes;
}

int subtree_height(const Tree& t, NodeId id) {
    if (id == kEmpty) return -1;
    int best = 0;
    std::vector<std::pair<NodeId, int>> stack{{id, 0}};
    while (!stack.empty()) {
        auto [v, depth] = stack.back();
        stack.pop_back();
        best = std::max(best, depth);
        for (NodeId c : t.children(v)) stack.emplace_back(c, depth + 1);
    }
    return best;
}

TreeMetrics metrics(const Tree& t) {
    TreeMetrics m;
    m.size = t.size();
    if (t.empty()) return m;
    m.height = subtree_height(t, t.root());
    for (const Node& n : t.nodes()) m.max_degree = std::max(m.max_degree, n.children.size());
    return m;
}

Tree remove_leaf(const Tree& t, NodeId leaf) {
    if (leaf == t.root() || leaf >= t.size() || t.degree(leaf) != 0)
        throw ConstraintError("remove_leaf: not a non-root leaf");
    Tree out;
    std::vector<std::pair<NodeId, NodeId>> stack{{t.root(), kEmpty}};
    while (!stack.empty()) {
        auto [src, dst_parent] = stack.back();
        stack.pop_back();
        if (src == leaf) continue;
        const NodeId dst = dst_parent == kEmpty ? out.add_root(t.label(src))
                                                : out.add_child(dst_parent, t.label(src));
        const auto ch = t.children(src);
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.emplace_back(*it, dst);
    }
    return out;
}

}  // namespace subiso
