#include "subiso/tree.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace subiso {
namespace {

constexpr std::size_t kMaxParseDepth = 1'000'000;

bool is_label_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Tree run() {
        skip_ws();
        if (pos_ == text_.size()) return {};
        parse_node_head();
        // Invariant: the top of open_ is the node whose child list is being read.
        bool just_opened = true;
        while (!open_.empty()) {
            skip_ws();
            if (at(')')) {
                ++pos_;
                open_.pop_back();
                just_opened = false;
                continue;
            }
            if (!just_opened) {
                if (!at(',')) fail("expected ',' or ')'");
                ++pos_;
                skip_ws();
            }
            parse_node_head();
            just_opened = true;
        }
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters after tree");
        return std::move(tree_);
    }

private:
    void parse_node_head() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_label_char(text_[pos_])) ++pos_;
        std::string label(text_.substr(start, pos_ - start));
        skip_ws();
        if (!at('(')) fail(pos_ == text_.size() ? "unexpected end of input" : "expected '('");
        ++pos_;
        if (open_.size() >= kMaxParseDepth) fail("nesting depth exceeds limit");
        const NodeId id = open_.empty() ? tree_.add_root(std::move(label))
                                        : tree_.add_child(open_.back(), std::move(label));
        open_.push_back(id);
    }

    bool at(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0)
            ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    std::string_view text_;
    std::size_t pos_ = 0;
    Tree tree_;
    std::vector<NodeId> open_;
};

void emit(const Tree& t, const std::vector<std::vector<NodeId>>& child_order, std::string& out) {
    if (t.empty()) return;
    // Frame: node and index of the next child to print.
    std::vector<std::pair<NodeId, std::size_t>> stack;
    auto open = [&](NodeId v) {
        out += t.label(v);
        out += '(';
        stack.emplace_back(v, 0);
    };
    open(t.root());
    while (!stack.empty()) {
        auto& [v, next] = stack.back();
        const auto& ch = child_order[v];
        if (next == ch.size()) {
            out += ')';
            stack.pop_back();
            continue;
        }
        if (next > 0) out += ',';
        const NodeId c = ch[next++];
        open(c);
    }
}

}  // namespace

Tree parse_tree(std::string_view text) { return Parser(text).run(); }

std::vector<std::uint32_t> ahu_ranks(const Tree& t) {
    std::vector<std::uint32_t> rank(t.size(), 0);
    if (t.empty()) return rank;

    std::vector<std::vector<NodeId>> levels;
    std::vector<std::pair<NodeId, std::size_t>> stack{{t.root(), 0}};
    while (!stack.empty()) {
        auto [v, depth] = stack.back();
        stack.pop_back();
        if (levels.size() <= depth) levels.resize(depth + 1);
        levels[depth].push_back(v);
        for (NodeId c : t.children(v)) stack.emplace_back(c, depth + 1);
    }

    using Key = std::pair<std::string_view, std::vector<std::uint32_t>>;
    std::vector<std::pair<Key, NodeId>> keyed;
    for (auto level = levels.rbegin(); level != levels.rend(); ++level) {
        keyed.clear();
        keyed.reserve(level->size());
        for (NodeId v : *level) {
            std::vector<std::uint32_t> child_ranks;
            child_ranks.reserve(t.degree(v));
            for (NodeId c : t.children(v)) child_ranks.push_back(rank[c]);
            std::sort(child_ranks.begin(), child_ranks.end());
            keyed.emplace_back(Key{t.label(v), std::move(child_ranks)}, v);
        }
        std::sort(keyed.begin(), keyed.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::uint32_t next = 0;
        for (std::size_t i = 0; i < keyed.size(); ++i) {
            if (i > 0 && keyed[i - 1].first != keyed[i].first) ++next;
            rank[keyed[i].second] = next;
        }
    }
    return rank;
}

std::string serialize_tree(const Tree& t) {
    std::string out;
    if (t.empty()) return out;
    const auto rank = ahu_ranks(t);
    std::vector<std::vector<NodeId>> order(t.size());
    for (NodeId v = 0; v < t.size(); ++v) {
        auto& ch = order[v];
        ch.assign(t.children(v).begin(), t.children(v).end());
        std::stable_sort(ch.begin(), ch.end(),
                         [&](NodeId a, NodeId b) { return rank[a] < rank[b]; });
    }
    out.reserve(2 * t.size());
    emit(t, order, out);
    return out;
}

std::string serialize_ordered(const Tree& t) {
    std::string out;
    if (t.empty()) return out;
    std::vector<std::vector<NodeId>> order(t.size());
    for (NodeId v = 0; v < t.size(); ++v)
        order[v].assign(t.children(v).begin(), t.children(v).end());
    emit(t, order, out);
    return out;
}

std::string ahu_canonize(const Tree& t) { return serialize_tree(t); }

}  // namespace subiso
