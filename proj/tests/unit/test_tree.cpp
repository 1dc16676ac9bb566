#include "oracles.hpp"
#include "subiso/rng.hpp"
#include "subiso/tree.hpp"

#include <gtest/gtest.h>

using namespace subiso;

TEST(TreeParse, SmallestTrees) {
    EXPECT_TRUE(parse_tree("").empty());
    EXPECT_TRUE(parse_tree("  \n").empty());
    const Tree one = parse_tree("()");
    EXPECT_EQ(one.size(), 1U);
    EXPECT_EQ(one.degree(one.root()), 0U);
}

TEST(TreeParse, RootWithTwoLeaves) {
    const Tree t = parse_tree("((),())");
    EXPECT_EQ(t.size(), 3U);
    EXPECT_EQ(t.degree(t.root()), 2U);
}

TEST(TreeParse, Labels) {
    const Tree t = parse_tree("a((),b())");
    EXPECT_EQ(t.label(t.root()), "a");
    ASSERT_EQ(t.degree(t.root()), 2U);
    EXPECT_EQ(t.label(t.children(t.root())[0]), "");
    EXPECT_EQ(t.label(t.children(t.root())[1]), "b");
}

TEST(TreeParse, WhitespaceBetweenTokens) {
    EXPECT_EQ(serialize_ordered(parse_tree(" x ( ( ) , y ( ) ) ")), "x((),y())");
}

TEST(TreeParse, ErrorsCarryOffsets) {
    try {
        parse_tree("((),x");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 5U);
    }
    EXPECT_THROW(parse_tree("(()"), ParseError);
    EXPECT_THROW(parse_tree("()()"), ParseError);
    EXPECT_THROW(parse_tree("(,)"), ParseError);
    EXPECT_THROW(parse_tree("a-b()"), ParseError);
    EXPECT_THROW(parse_tree("(()))"), ParseError);
}

TEST(TreeParse, DepthLimit) {
    const std::size_t deep = 1'000'001;
    std::string text(deep, '(');
    text.append(deep, ')');
    EXPECT_THROW(parse_tree(text), ParseError);

    const std::size_t ok = 200'000;
    std::string path(ok, '(');
    path.append(ok, ')');
    const Tree t = parse_tree(path);
    EXPECT_EQ(metrics(t).height, static_cast<int>(ok) - 1);
}

TEST(TreeSerialize, EmptyAndSingle) {
    EXPECT_EQ(serialize_tree(Tree{}), "");
    EXPECT_EQ(serialize_tree(Tree::single()), "()");
}

TEST(TreeSerialize, IndependentOfChildOrder) {
    EXPECT_EQ(serialize_tree(parse_tree("((),(()))")), serialize_tree(parse_tree("((()),())")));
    EXPECT_EQ(ahu_canonize(parse_tree("((),((),()))")), ahu_canonize(parse_tree("(((),()),())")));
}

TEST(TreeSerialize, RoundTripKeepsIsomorphismClass) {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        Tree t = random_tree(1 + seed % 40, 2 + static_cast<int>(seed % 3), 12, seed);
        if (seed % 3 == 0) t.set_label(t.root(), "r");
        const Tree back = parse_tree(serialize_tree(t));
        EXPECT_EQ(ahu_canonize(back), ahu_canonize(t));
        EXPECT_EQ(oracle::canon(back), oracle::canon(t));
        EXPECT_EQ(serialize_ordered(parse_tree(serialize_ordered(t))), serialize_ordered(t));
    }
}

TEST(TreeCanon, InvariantUnderChildPermutation) {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const Tree t = random_tree(1 + seed % 60, 4, 10, seed);
        EXPECT_EQ(ahu_canonize(t), ahu_canonize(shuffle_children(t, seed * 7 + 1)));
    }
}

TEST(TreeCanon, AgreesWithSortedStringCanonization) {
    // Pairs of small trees collide often enough to exercise both directions.
    std::size_t equal = 0;
    for (std::uint64_t seed = 0; seed < 3000; ++seed) {
        const Tree a = random_tree(6, 3, 4, seed);
        const Tree b = random_tree(6, 3, 4, seed + 100'000);
        const bool same = oracle::canon(a) == oracle::canon(b);
        EXPECT_EQ(ahu_canonize(a) == ahu_canonize(b), same);
        equal += same ? 1 : 0;
    }
    EXPECT_GT(equal, 0U);
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const Tree a = random_tree(10, 3, 9, seed);
        const Tree b = random_tree(10, 3, 9, seed + 7);
        EXPECT_EQ(ahu_canonize(a) == ahu_canonize(b), oracle::canon(a) == oracle::canon(b));
    }
}

TEST(TreeCanon, LabelsDistinguish) {
    EXPECT_NE(ahu_canonize(parse_tree("a(b())")), ahu_canonize(parse_tree("a(c())")));
    EXPECT_EQ(ahu_canonize(parse_tree("a(b(),c())")), ahu_canonize(parse_tree("a(c(),b())")));
}

TEST(TreeCanon, LeafDeletionChangesCode) {
    const Tree t = random_tree(25, 3, 8, 5);
    for (NodeId v = 0; v < t.size(); ++v)
        if (v != t.root() && t.degree(v) == 0) {
            EXPECT_NE(ahu_canonize(remove_leaf(t, v)), ahu_canonize(t));
        }
}

TEST(TreeCanon, RanksMatchSubtreeClassesPerDepth) {
    const Tree t = random_tree(40, 3, 6, 11);
    const auto ranks = ahu_ranks(t);
    std::vector<int> depth(t.size(), 0);
    for (NodeId v : t.preorder())
        for (NodeId c : t.children(v)) depth[c] = depth[v] + 1;
    for (NodeId a = 0; a < t.size(); ++a)
        for (NodeId b = 0; b < t.size(); ++b)
            if (depth[a] == depth[b]) {
                EXPECT_EQ(ranks[a] == ranks[b], oracle::canon(t.subtree(a)) == oracle::canon(t.subtree(b)));
            }
}

TEST(TreeGen, CompleteDary) {
    EXPECT_EQ(complete_dary(2, 0).size(), 1U);
    EXPECT_EQ(complete_dary(2, 3).size(), 15U);
    EXPECT_EQ(complete_dary(3, 2).size(), 13U);
    EXPECT_EQ(complete_dary(1, 4).size(), 5U);
    for (int d = 1; d <= 4; ++d)
        for (int h = 0; h <= 5; ++h) {
            const Tree t = complete_dary(d, h);
            std::uint64_t expected = 0, level = 1;
            for (int i = 0; i <= h; ++i, level *= static_cast<std::uint64_t>(d)) expected += level;
            EXPECT_EQ(metrics(t), (TreeMetrics{expected, h, h == 0 ? 0U : static_cast<std::size_t>(d)}));
            EXPECT_EQ(complete_dary_size(d, h), expected);
        }
    EXPECT_THROW(complete_dary(0, 2), ConstraintError);
    EXPECT_THROW(complete_dary(2, -1), ConstraintError);
    EXPECT_THROW(complete_dary(10, 8), ConstraintError);
}

TEST(TreeGen, RandomTreeExamples) {
    EXPECT_EQ(random_tree(1, 2, 0, 9).size(), 1U);
    for (std::uint64_t s = 0; s < 20; ++s)
        EXPECT_EQ(ahu_canonize(random_tree(7, 2, 2, s)), ahu_canonize(complete_dary(2, 2)));
    EXPECT_EQ(serialize_ordered(random_tree(100, 3, 10, 42)), serialize_ordered(random_tree(100, 3, 10, 42)));
    EXPECT_THROW(random_tree(8, 2, 2, 0), ConstraintError);
    EXPECT_TRUE(random_tree(0, 2, 2, 0).empty());
}

TEST(TreeGen, RandomTreeRespectsConstraints) {
    SplitMix64 rng(3);
    for (int i = 0; i < 500; ++i) {
        const int d = 1 + static_cast<int>(rng.below(5));
        const int h = static_cast<int>(rng.below(8));
        const auto cap = std::min<std::uint64_t>(complete_dary_size(d, h), 300);
        const std::size_t n = 1 + rng.below(cap);
        const Tree t = random_tree(n, d, h, rng());
        t.validate();
        const TreeMetrics m = metrics(t);
        EXPECT_EQ(m.size, n);
        EXPECT_LE(m.height, h);
        EXPECT_LE(m.max_degree, static_cast<std::size_t>(d));
    }
}

TEST(TreeMetrics, Examples) {
    EXPECT_EQ(metrics(Tree{}), (TreeMetrics{0, -1, 0}));
    EXPECT_EQ(metrics(complete_dary(2, 3)), (TreeMetrics{15, 3, 2}));
    EXPECT_EQ(metrics(path_tree(5)), (TreeMetrics{5, 4, 1}));
    EXPECT_EQ(metrics(star_tree(6)), (TreeMetrics{7, 1, 6}));
}

TEST(TreeMetrics, Invariants) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Tree t = random_tree(1 + seed % 50, 5, 20, seed);
        const TreeMetrics m = metrics(t);
        EXPECT_LE(m.height, static_cast<int>(m.size) - 1);
        EXPECT_LE(m.max_degree, m.size - 1);
        const auto sizes = subtree_sizes(t);
        EXPECT_EQ(sizes[t.root()], t.size());
        EXPECT_EQ(subtree_height(t, t.root()), m.height);
    }
    EXPECT_EQ(subtree_height(Tree::single(), kEmpty), -1);
}

TEST(TreeEdit, GraftSubtreeAndRemoveLeaf) {
    Tree t = parse_tree("a(b(),c())");
    const NodeId g = t.graft(t.children(t.root())[0], parse_tree("x(y())"));
    EXPECT_EQ(t.size(), 5U);
    EXPECT_EQ(t.label(g), "x");
    EXPECT_EQ(serialize_ordered(t), "a(b(x(y())),c())");
    EXPECT_EQ(serialize_ordered(t.subtree(g)), "x(y())");
    t.validate();

    Tree empty;
    EXPECT_EQ(empty.graft(kEmpty, Tree::single("r")), 0U);
    EXPECT_THROW(empty.graft(kEmpty, Tree::single()), ConstraintError);
    EXPECT_THROW(empty.graft(7, Tree::single()), ConstraintError);

    const Tree small = remove_leaf(parse_tree("a(b(),c(d()))"), 3);
    EXPECT_EQ(ahu_canonize(small), ahu_canonize(parse_tree("a(b(),c())")));
    EXPECT_THROW(remove_leaf(parse_tree("a(b())"), 0), ConstraintError);
}
