#include "subiso/subiso.hpp"

#include "subiso/matching.hpp"
#include "subiso/rng.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <utility>

namespace subiso {
namespace {

void require_degree(const Tree& h, const Tree& g, std::size_t d, const char* who) {
    if (metrics(h).max_degree > d || metrics(g).max_degree > d)
        throw ConstraintError(std::string(who) + ": tree degree exceeds " + std::to_string(d));
}

/// Children of v padded with kEmpty up to `slots` entries.
template <std::size_t N>
std::array<NodeId, N> padded(const Tree& t, NodeId v) {
    std::array<NodeId, N> out;
    out.fill(kEmpty);
    const auto ch = t.children(v);
    std::copy(ch.begin(), ch.end(), out.begin());
    return out;
}

std::vector<std::uint32_t> depths(const Tree& t) {
    std::vector<std::uint32_t> out(t.size(), 0);
    for (NodeId v : t.preorder())
        for (NodeId c : t.children(v)) out[c] = out[v] + 1;
    return out;
}

bool brute(const Tree& h, NodeId hv, const Tree& g, NodeId gv);

bool assign_children(const Tree& h, std::span<const NodeId> hc, std::size_t next, const Tree& g,
                     std::span<const NodeId> gc, std::vector<char>& used) {
    if (next == hc.size()) return true;
    for (std::size_t j = 0; j < gc.size(); ++j) {
        if (used[j]) continue;
        if (!brute(h, hc[next], g, gc[j])) continue;
        used[j] = 1;
        const bool ok = assign_children(h, hc, next + 1, g, gc, used);
        used[j] = 0;
        if (ok) return true;
    }
    return false;
}

bool brute(const Tree& h, NodeId hv, const Tree& g, NodeId gv) {
    if (hv == kEmpty) return true;
    if (gv == kEmpty) return false;
    const auto hc = h.children(hv);
    const auto gc = g.children(gv);
    if (hc.size() > gc.size()) return false;
    std::vector<char> used(gc.size(), 0);
    return assign_children(h, hc, 0, g, gc, used);
}

class Deterministic {
public:
    Deterministic(const Tree& h, const Tree& g, RunStats& stats, bool memoize)
        : h_(h), g_(g), stats_(stats) {
        if (memoize) {
            h_class_ = ahu_ranks(h);
            g_class_ = ahu_ranks(g);
            h_depth_ = depths(h);
        }
    }

    bool call(NodeId hv, NodeId gv) {
        ++stats_.edge_queries;
        if (hv == kEmpty) {
            ++stats_.yes_base_calls;
            return true;
        }
        if (gv == kEmpty) {
            ++stats_.no_base_calls;
            return false;
        }
        if (h_class_.empty()) return evaluate(hv, gv);
        // Classes are per depth; both nodes of a visited pair share a depth.
        const std::array<std::uint32_t, 3> key{h_depth_[hv], h_class_[hv], g_class_[gv]};
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        const bool result = evaluate(hv, gv);
        cache_.emplace(key, result);
        return result;
    }

private:
    bool evaluate(NodeId hv, NodeId gv) {
        const auto hc = h_.children(hv);
        const auto gc = g_.children(gv);
        if (hc.empty()) return true;
        if (hc.size() > gc.size()) return false;
        Adjacency a(hc.size(), gc.size());
        for (std::size_t i = 0; i < hc.size(); ++i)
            for (std::size_t j = 0; j < gc.size(); ++j) a.set(i, j, call(hc[i], gc[j]));
        return has_perfect_matching(a);
    }

    const Tree& h_;
    const Tree& g_;
    RunStats& stats_;
    std::vector<std::uint32_t> h_class_;
    std::vector<std::uint32_t> g_class_;
    std::vector<std::uint32_t> h_depth_;
    std::map<std::array<std::uint32_t, 3>, bool> cache_;
};

class RandomizedBinary {
public:
    RandomizedBinary(const Tree& h, const Tree& g, RunStats& stats) : h_(h), g_(g), stats_(stats) {}

    bool call(NodeId hv, NodeId gv, SplitMix64 rng) {
        if (hv == kEmpty) {
            ++stats_.yes_base_calls;
            return true;
        }
        if (gv == kEmpty) {
            ++stats_.no_base_calls;
            return false;
        }
        auto [hl, hr] = padded<2>(h_, hv);
        auto [gl, gr] = padded<2>(g_, gv);
        if (rng.coin()) std::swap(hl, hr);
        if (rng.coin()) std::swap(gl, gr);
        auto sub = [&](NodeId a, NodeId b) {
            ++stats_.edge_queries;
            return call(a, b, rng.split());
        };
        if (sub(hl, gl) && sub(hr, gr)) return true;
        if (!sub(hl, gr)) return false;
        return sub(hr, gl);
    }

private:
    const Tree& h_;
    const Tree& g_;
    RunStats& stats_;
};

class RandomizedTernary {
public:
    RandomizedTernary(const Tree& h, const Tree& g, const DecisionTree3x3& policy, RunStats& stats)
        : h_(h), g_(g), policy_(policy), stats_(stats) {}

    bool call(NodeId hv, NodeId gv, SplitMix64 rng) {
        if (hv == kEmpty) {
            ++stats_.yes_base_calls;
            return true;
        }
        if (gv == kEmpty) {
            ++stats_.no_base_calls;
            return false;
        }
        const auto hs = padded<3>(h_, hv);
        const auto gs = padded<3>(g_, gv);
        const auto& relabel = randomizations_3x3()[rng.below(randomizations_3x3().size())];
        const auto& nodes = policy_.nodes();
        int index = 0;
        for (;;) {
            const auto& n = nodes[static_cast<std::size_t>(index)];
            if (n.leaf()) return n.accept;
            const std::uint8_t edge = relabel[static_cast<std::size_t>(n.query)];
            ++stats_.edge_queries;
            index = call(hs[edge / 3], gs[edge % 3], rng.split()) ? n.on_yes : n.on_no;
        }
    }

private:
    const Tree& h_;
    const Tree& g_;
    const DecisionTree3x3& policy_;
    RunStats& stats_;
};

class RandomizedDary {
public:
    RandomizedDary(const Tree& h, const Tree& g, std::size_t d, RunStats& stats)
        : h_(h), g_(g), d_(d), stats_(stats) {}

    bool call(NodeId hv, NodeId gv, SplitMix64 rng) {
        if (hv == kEmpty) {
            ++stats_.yes_base_calls;
            return true;
        }
        if (gv == kEmpty) {
            ++stats_.no_base_calls;
            return false;
        }
        std::vector<NodeId> hs(d_, kEmpty);
        std::vector<NodeId> gs(d_, kEmpty);
        std::ranges::copy(h_.children(hv), hs.begin());
        std::ranges::copy(g_.children(gv), gs.begin());
        EdgeOracle oracle(d_, d_, [&](std::size_t i, std::size_t j) {
            ++stats_.edge_queries;
            return call(hs[i], gs[j], rng.split());
        });
        return mixed_protocol(oracle, rng).answer;
    }

private:
    const Tree& h_;
    const Tree& g_;
    std::size_t d_;
    RunStats& stats_;
};

}  // namespace

bool subiso_bruteforce(const Tree& h, const Tree& g) { return brute(h, h.root(), g, g.root()); }

SubisoAnswer subiso_det(const Tree& h, const Tree& g, bool memoize) {
    SubisoAnswer out;
    Deterministic solver(h, g, out.stats, memoize);
    out.contained = solver.call(h.root(), g.root());
    return out;
}

SubisoAnswer rand_binary(const Tree& h, const Tree& g, std::uint64_t seed) {
    require_degree(h, g, 2, "rand_binary");
    SubisoAnswer out;
    out.stats.seed = seed;
    RandomizedBinary solver(h, g, out.stats);
    out.contained = solver.call(h.root(), g.root(), SplitMix64(seed));
    return out;
}

SubisoAnswer rand_ternary(const Tree& h, const Tree& g, std::uint64_t seed, const DecisionTree3x3& policy) {
    require_degree(h, g, 3, "rand_ternary");
    policy.validate();
    SubisoAnswer out;
    out.stats.seed = seed;
    RandomizedTernary solver(h, g, policy, out.stats);
    out.contained = solver.call(h.root(), g.root(), SplitMix64(seed));
    return out;
}

SubisoAnswer rand_dary(const Tree& h, const Tree& g, int d, std::uint64_t seed) {
    if (d < 1) throw ConstraintError("rand_dary: d must be >= 1");
    require_degree(h, g, static_cast<std::size_t>(d), "rand_dary");
    SubisoAnswer out;
    out.stats.seed = seed;
    RandomizedDary solver(h, g, static_cast<std::size_t>(d), out.stats);
    out.contained = solver.call(h.root(), g.root(), SplitMix64(seed));
    return out;
}

int recursion_levels(const Tree& h, const Tree& g) {
    if (h.empty() || g.empty()) return 0;
    return std::min(metrics(h).height, metrics(g).height) + 1;
}

}  // namespace subiso
