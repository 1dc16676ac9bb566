#include "oracles.hpp"
#include "subiso/lcst.hpp"
#include "subiso/subiso.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

using namespace subiso;

namespace {

std::vector<NodeId> parents(const Tree& t) {
    std::vector<NodeId> p(t.size(), kEmpty);
    for (NodeId v = 0; v < t.size(); ++v)
        for (NodeId c : t.children(v)) p[c] = v;
    return p;
}

Tree labelled_tree(SplitMix64& rng, std::size_t max_size, int d) {
    Tree t = random_tree(1 + rng.below(max_size), d, 6, rng());
    for (NodeId v = 0; v < t.size(); ++v) t.set_label(v, rng.coin() ? "a" : "b");
    return t;
}

void expect_valid_witness(const Tree& h, const Tree& g, const LcstResult& r, bool labelled) {
    ASSERT_EQ(r.witness.size(), r.size);
    if (r.size == 0) return;
    EXPECT_EQ(r.witness.front(), std::make_pair(h.root(), g.root()));
    const auto ph = parents(h), pg = parents(g);
    std::map<NodeId, NodeId> map;
    std::set<NodeId> image;
    for (const auto& [a, b] : r.witness) {
        EXPECT_TRUE(map.emplace(a, b).second);
        EXPECT_TRUE(image.insert(b).second);
        if (labelled) {
            EXPECT_EQ(h.label(a), g.label(b));
        }
    }
    for (const auto& [a, b] : r.witness) {
        if (a == h.root()) continue;
        ASSERT_TRUE(map.count(ph[a]));
        EXPECT_EQ(map[ph[a]], pg[b]);
    }
}

}  // namespace

TEST(Lcst, Examples) {
    EXPECT_EQ(lcst(Tree{}, Tree::single()).size, 0U);
    EXPECT_EQ(lcst(Tree::single(), Tree::single()).size, 1U);
    EXPECT_EQ(lcst(parse_tree("((),())"), parse_tree("(())")).size, 2U);
    EXPECT_EQ(lcst(parse_tree("(((),()))"), parse_tree("((()),(()))")).size, 3U);
    EXPECT_EQ(llcs(parse_tree("a()"), parse_tree("b()")).size, 0U);
    EXPECT_EQ(llcs(parse_tree("a(b(),c())"), parse_tree("a(c(),c())")).size, 2U);
}

TEST(Lcst, AgreesWithSubsetEnumeration) {
    SplitMix64 rng(31);
    for (int i = 0; i < 1000; ++i) {
        const Tree h = random_tree(1 + rng.below(9), 3, 5, rng());
        const Tree g = random_tree(1 + rng.below(9), 3, 5, rng());
        const LcstResult r = lcst(h, g);
        EXPECT_EQ(r.size, oracle::lcst(h, g, false));
        expect_valid_witness(h, g, r, false);
        EXPECT_LE(r.node_pairs, h.size() * g.size());
    }
}

TEST(Lcst, LabelledAgreesWithSubsetEnumeration) {
    SplitMix64 rng(32);
    for (int i = 0; i < 1000; ++i) {
        const Tree h = labelled_tree(rng, 9, 3);
        const Tree g = labelled_tree(rng, 9, 3);
        const LcstResult r = llcs(h, g);
        EXPECT_EQ(r.size, oracle::lcst(h, g, true));
        expect_valid_witness(h, g, r, true);
        EXPECT_LE(r.node_pairs, h.size() * g.size());
    }
}

TEST(Lcst, Properties) {
    SplitMix64 rng(33);
    for (int i = 0; i < 1000; ++i) {
        const Tree t = random_tree(1 + rng.below(60), 4, 10, rng());
        EXPECT_EQ(lcst(t, t).size, t.size());
        EXPECT_EQ(lcst(t, shuffle_children(t, rng())).size, t.size());
    }
    for (int i = 0; i < 1000; ++i) {
        const Tree h = random_tree(1 + rng.below(25), 3, 6, rng());
        const Tree g = random_tree(1 + rng.below(40), 3, 7, rng());
        const LcstResult r = lcst(h, g);
        EXPECT_EQ(r.size, lcst(g, h).size);
        EXPECT_LE(r.size, std::min(h.size(), g.size()));
        EXPECT_EQ(r.size == h.size(), subiso_det(h, g).contained);
        EXPECT_LE(r.node_pairs, h.size() * g.size());
        // Adding host nodes never shrinks the answer.
        Tree bigger = g;
        bigger.add_child(static_cast<NodeId>(rng.below(g.size())));
        EXPECT_GE(lcst(h, bigger).size, r.size);
    }
}
