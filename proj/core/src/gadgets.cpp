#include "subiso/lcst.hpp"
#include "subiso/ov.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace subiso {
namespace {

/// Appends a path of `length` nodes below `from`; returns the last node.
NodeId append_path(Tree& t, NodeId from, std::size_t length) {
    for (std::size_t i = 0; i < length; ++i) from = t.add_child(from);
    return from;
}

/// Grows a complete d-ary tree of `levels` levels below (and including)
/// `root`; returns its leaves left to right.
std::vector<NodeId> grow_complete(Tree& t, NodeId root, int d, std::size_t levels) {
    std::vector<NodeId> layer{root};
    for (std::size_t l = 0; l < levels; ++l) {
        std::vector<NodeId> next;
        next.reserve(layer.size() * static_cast<std::size_t>(d));
        for (NodeId v : layer)
            for (int c = 0; c < d; ++c) next.push_back(t.add_child(v));
        layer = std::move(next);
    }
    return layer;
}

/// Smallest d^k >= n (n >= 1), and k.
std::pair<std::size_t, std::size_t> next_power(std::size_t n, int d) {
    std::size_t p = 1;
    std::size_t k = 0;
    while (p < n) {
        p *= static_cast<std::size_t>(d);
        ++k;
    }
    return {p, k};
}

bool all_zero(const BitVector& v) { return std::ranges::none_of(v, [](auto x) { return x != 0; }); }

Tree simple_gadget(const BitVector& v, std::uint8_t pendant_when) {
    Tree t;
    NodeId u = t.add_root();
    for (std::size_t i = 1; i <= v.size() + 2; ++i) {
        u = t.add_child(u);
        if (i <= v.size() && v[i - 1] == pendant_when) t.add_child(u);
    }
    return t;
}

/// tail(i) is the tail length at coordinate i (0-based) or at a surplus leaf.
template <typename Tail>
Tree logdepth_gadget(std::size_t dim, Tail tail) {
    const std::size_t leaves = logdepth_leaves(dim);
    const std::size_t bits = logdepth_index_length(dim);
    const auto levels = static_cast<std::size_t>(std::countr_zero(leaves));
    Tree t;
    const auto us = grow_complete(t, t.add_root(), 2, levels);
    for (std::size_t i = 0; i < leaves; ++i) {
        const std::size_t index = i + 1;
        NodeId at = us[i];
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t b = 0; b < bits; ++b) {
                at = t.add_child(at);
                const bool bit = ((index >> (bits - 1 - b)) & 1U) != 0;
                if (bit != (pass == 1)) t.add_child(at);
            }
        }
        append_path(t, at, tail(i));
    }
    return t;
}

}  // namespace

Tree simple_gadget_h(const BitVector& alpha) { return simple_gadget(alpha, 1); }
Tree simple_gadget_g(const BitVector& beta) { return simple_gadget(beta, 0); }

Tree index_gadget(const std::vector<std::uint8_t>& bits) {
    if (bits.empty()) throw ConstraintError("index_gadget: needs at least one bit");
    Tree t;
    NodeId z = kEmpty;
    for (auto b : bits) {
        z = z == kEmpty ? t.add_root() : t.add_child(z);
        if (b) t.add_child(z);
    }
    return t;
}

std::size_t logdepth_leaves(std::size_t dim) { return std::bit_ceil(std::max<std::size_t>(dim, 1)); }

std::size_t logdepth_index_length(std::size_t dim) {
    return static_cast<std::size_t>(std::bit_width(logdepth_leaves(dim)));
}

Tree logdepth_gadget_h(const BitVector& alpha) {
    return logdepth_gadget(alpha.size(), [&](std::size_t i) -> std::size_t {
        return i < alpha.size() && alpha[i] == 1 ? 3 : 2;
    });
}

Tree logdepth_gadget_g(const BitVector& beta) {
    return logdepth_gadget(beta.size(), [&](std::size_t i) -> std::size_t {
        return i >= beta.size() || beta[i] == 0 ? 3 : 2;
    });
}

SubisoInstance build_simple_instance(const OvInstance& inst) {
    inst.validate();
    if (inst.n() == 0) throw ConstraintError("build_simple_instance: N must be >= 1");
    SubisoInstance out;
    out.padded_n = inst.n();
    out.trivial = std::ranges::any_of(inst.a, all_zero) || std::ranges::any_of(inst.b, all_zero);
    const NodeId h_root = out.h.add_root();
    for (const BitVector& alpha : inst.a) out.h.graft(h_root, simple_gadget_h(alpha));
    const NodeId g_root = out.g.add_root();
    for (const BitVector& beta : inst.b) out.g.graft(g_root, simple_gadget_g(beta));
    const Tree zero = simple_gadget_g(BitVector(inst.dim, 0));
    for (std::size_t i = 1; i < inst.n(); ++i) out.g.graft(g_root, zero);
    return out;
}

SubisoInstance build_bounded_instance(const OvInstance& inst, int d) {
    if (d < 2) throw ConstraintError("build_bounded_instance: d must be >= 2");
    inst.validate();
    if (inst.n() == 0) throw ConstraintError("build_bounded_instance: N must be >= 1");
    SubisoInstance out;
    out.trivial = std::ranges::any_of(inst.a, all_zero) || std::ranges::any_of(inst.b, all_zero);
    const auto [n, levels] = next_power(inst.n(), d);
    out.padded_n = n;
    std::vector<BitVector> a = inst.a;
    std::vector<BitVector> b = inst.b;
    a.resize(n, BitVector(inst.dim, 1));
    b.resize(n, BitVector(inst.dim, 1));

    const auto us = grow_complete(out.h, out.h.add_root(), d, levels);
    for (std::size_t i = 0; i < n; ++i)
        out.h.graft(append_path(out.h, us[i], levels + 1), logdepth_gadget_h(a[i]));

    // The last leaf gets one extra node above the second complete tree so
    // that the host gadgets sit at the same depth as the pattern gadgets.
    const auto vs = grow_complete(out.g, out.g.add_root(), d, levels);
    const Tree zero = logdepth_gadget_g(BitVector(inst.dim, 0));
    for (std::size_t i = 0; i + 1 < n; ++i) out.g.graft(append_path(out.g, vs[i], levels + 1), zero);
    const auto inner = grow_complete(out.g, out.g.add_child(vs[n - 1]), d, levels);
    for (std::size_t i = 0; i < n; ++i) out.g.graft(inner[i], logdepth_gadget_g(b[i]));
    return out;
}

LcstInstanceBundle build_lcst_instance(const OvInstance& inst, int d) {
    if (d < 2) throw ConstraintError("build_lcst_instance: d must be >= 2");
    inst.validate();
    LcstInstanceBundle bundle;
    bundle.d = d;
    if (inst.n() == 0) return bundle;

    const std::size_t dim = inst.dim + 1;
    std::vector<BitVector> b;
    for (const BitVector& beta : inst.b) {
        BitVector v{0};
        v.insert(v.end(), beta.begin(), beta.end());
        b.push_back(std::move(v));
    }
    std::map<std::size_t, std::vector<BitVector>> classes;
    for (const BitVector& alpha : inst.a) {
        BitVector v{1};
        v.insert(v.end(), alpha.begin(), alpha.end());
        classes[popcount(v)].push_back(std::move(v));
    }

    BitVector delta(dim, 0);
    delta[0] = 1;
    const Tree g_delta = logdepth_gadget_g(delta);

    for (auto& [ones, a] : classes) {
        const auto [n, levels] = next_power(std::max(a.size(), b.size()), d);
        std::vector<BitVector> bs = b;
        for (std::size_t i = a.size(); i < n; ++i) a.push_back(a[i % a.size()]);
        for (std::size_t i = bs.size(); i < n; ++i) bs.push_back(bs[i % b.size()]);

        LcstTriple triple;
        triple.popcount = ones;
        triple.padded_n = n;
        const auto hs = grow_complete(triple.h, triple.h.add_root(), d, levels);
        for (std::size_t i = 0; i < n; ++i) {
            const NodeId r = triple.h.add_child(hs[i]);
            const auto before = triple.h.size();
            triple.h.graft(r, logdepth_gadget_h(a[i]));
            triple.e_prime = triple.h.size() - before + 1;
        }
        const auto gs = grow_complete(triple.g, triple.g.add_root(), d, levels);
        for (std::size_t i = 0; i < n; ++i) {
            const NodeId r = triple.g.add_child(gs[i]);
            triple.g.graft(r, g_delta);
            triple.g.graft(r, logdepth_gadget_g(bs[i]));
        }
        const std::size_t top = (static_cast<std::size_t>(d) * n - 1) / static_cast<std::size_t>(d - 1);
        triple.threshold = top + n * (triple.e_prime - 1) + 1;
        bundle.triples.push_back(std::move(triple));
    }
    return bundle;
}

bool lcst_bundle_answer(const LcstInstanceBundle& bundle) {
    return std::ranges::any_of(bundle.triples,
                               [](const LcstTriple& t) { return lcst(t.h, t.g).size >= t.threshold; });
}

}  // namespace subiso
