#include "subiso/lcst.hpp"

#include "subiso/matching.hpp"

#include <unordered_map>

namespace subiso {
namespace {

class CommonSubtree {
public:
    CommonSubtree(const Tree& h, const Tree& g, bool labelled) : h_(h), g_(g), labelled_(labelled) {}

    bool compatible(NodeId a, NodeId b) const { return !labelled_ || h_.label(a) == g_.label(b); }

    std::size_t solve(NodeId hv, NodeId gv) {
        ++calls_;
        const auto hc = h_.children(hv);
        const auto gc = g_.children(gv);
        if (hc.empty() || gc.empty()) return 1;
        WeightMatrix w(hc.size(), gc.size());
        for (std::size_t i = 0; i < hc.size(); ++i)
            for (std::size_t j = 0; j < gc.size(); ++j)
                if (compatible(hc[i], gc[j]))
                    w.set(i, j, static_cast<std::int64_t>(solve(hc[i], gc[j])));
        WeightedMatching m = max_weight_left_saturating(w);
        const auto size = static_cast<std::size_t>(m.weight) + 1;
        std::vector<std::pair<NodeId, NodeId>> pairs;
        for (std::size_t i = 0; i < hc.size(); ++i) {
            const int j = m.assignment[i];
            if (j < 0 || w(i, static_cast<std::size_t>(j)) == 0) continue;
            pairs.emplace_back(hc[i], gc[static_cast<std::size_t>(j)]);
        }
        chosen_.emplace(key(hv, gv), std::move(pairs));
        return size;
    }

    void witness(NodeId hv, NodeId gv, std::vector<std::pair<NodeId, NodeId>>& out) const {
        std::vector<std::pair<NodeId, NodeId>> stack{{hv, gv}};
        while (!stack.empty()) {
            const auto p = stack.back();
            stack.pop_back();
            out.push_back(p);
            const auto it = chosen_.find(key(p.first, p.second));
            if (it == chosen_.end()) continue;
            for (auto c = it->second.rbegin(); c != it->second.rend(); ++c) stack.push_back(*c);
        }
    }

    std::uint64_t calls() const noexcept { return calls_; }

private:
    static std::uint64_t key(NodeId a, NodeId b) { return (std::uint64_t{a} << 32) | b; }

    const Tree& h_;
    const Tree& g_;
    bool labelled_;
    std::uint64_t calls_ = 0;
    std::unordered_map<std::uint64_t, std::vector<std::pair<NodeId, NodeId>>> chosen_;
};

LcstResult run(const Tree& h, const Tree& g, bool labelled) {
    LcstResult out;
    if (h.empty() || g.empty()) return out;
    CommonSubtree solver(h, g, labelled);
    if (!solver.compatible(h.root(), g.root())) return out;
    out.size = solver.solve(h.root(), g.root());
    solver.witness(h.root(), g.root(), out.witness);
    out.node_pairs = solver.calls();
    return out;
}

}  // namespace

LcstResult llcs(const Tree& h, const Tree& g) { return run(h, g, true); }

LcstResult lcst(const Tree& h, const Tree& g) { return run(h, g, false); }

}  // namespace subiso
