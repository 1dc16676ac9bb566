#include "oracles.hpp"
#include "subiso/subiso.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace subiso;

namespace {

std::uint64_t power(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

/// Random tree of 0..max_size nodes; the height cap grows when n needs it.
Tree small_tree(SplitMix64& rng, std::size_t max_size, int d, int max_height = 6) {
    const std::size_t n = rng.below(max_size + 1);
    while (complete_dary_size(d, max_height) < n) ++max_height;
    return random_tree(n, d, max_height, rng());
}

}  // namespace

TEST(Subiso, Examples) {
    const Tree leaf = Tree::single();
    const Tree cherry = parse_tree("((),())");
    const Tree stick = parse_tree("(())");
    EXPECT_TRUE(subiso_det(stick, cherry).contained);
    EXPECT_FALSE(subiso_det(cherry, stick).contained);
    EXPECT_TRUE(subiso_det(leaf, cherry).contained);
    EXPECT_TRUE(subiso_det(Tree{}, cherry).contained);
    EXPECT_FALSE(subiso_det(leaf, Tree{}).contained);
    EXPECT_FALSE(subiso_det(parse_tree("(((),()))"), parse_tree("((()),(()))")).contained);
    EXPECT_TRUE(subiso_det(parse_tree("((()),())"), parse_tree("(((),()),())")).contained);
    EXPECT_TRUE(subiso_bruteforce(stick, cherry));
    EXPECT_FALSE(subiso_bruteforce(cherry, stick));
}

TEST(Subiso, EmptyPairIsOneYesBaseCall) {
    const auto r = subiso_det(Tree{}, Tree{});
    EXPECT_TRUE(r.contained);
    EXPECT_EQ(r.stats.yes_base_calls, 1U);
    EXPECT_EQ(r.stats.no_base_calls, 0U);
    const auto b = rand_binary(Tree{}, Tree{}, 3);
    EXPECT_TRUE(b.contained);
    EXPECT_EQ(b.stats.base_calls(), 1U);
    EXPECT_EQ(recursion_levels(Tree{}, Tree::single()), 0);
    EXPECT_EQ(recursion_levels(Tree::single(), Tree::single()), 1);
    EXPECT_EQ(recursion_levels(complete_dary(2, 3), path_tree(2)), 2);
}

TEST(Subiso, DeterministicAgreesWithOracles) {
    SplitMix64 rng(21);
    std::size_t yes = 0;
    for (int i = 0; i < 10000; ++i) {
        const int d = 1 + static_cast<int>(rng.below(4));
        const Tree h = small_tree(rng, 7, d);
        const Tree g = small_tree(rng, 10, d);
        const bool truth = oracle::contains(h, g);
        EXPECT_EQ(subiso_det(h, g).contained, truth);
        EXPECT_EQ(subiso_det(h, g, true).contained, truth);
        EXPECT_EQ(subiso_bruteforce(h, g), truth);
        yes += truth ? 1 : 0;
    }
    EXPECT_GT(yes, 1000U);
    EXPECT_LT(yes, 9000U);
}

TEST(Subiso, RandomizedSolversAgreeWithDeterministic) {
    SplitMix64 rng(22);
    const DecisionTree3x3 greedy = DecisionTree3x3::greedy_baseline();
    const DecisionTree3x3 full = DecisionTree3x3::full_order();
    for (int i = 0; i < 2000; ++i) {
        const Tree h2 = small_tree(rng, 15, 2), g2 = small_tree(rng, 25, 2);
        const Tree h3 = small_tree(rng, 15, 3), g3 = small_tree(rng, 25, 3);
        const Tree h4 = small_tree(rng, 15, 4, 4), g4 = small_tree(rng, 25, 4, 4);
        const bool t2 = subiso_det(h2, g2).contained;
        const bool t3 = subiso_det(h3, g3).contained;
        const bool t4 = subiso_det(h4, g4).contained;
        for (std::uint64_t s = 0; s < 3; ++s) {
            EXPECT_EQ(rand_binary(h2, g2, rng()).contained, t2);
            EXPECT_EQ(rand_dary(h2, g2, 2, rng()).contained, t2);
            EXPECT_EQ(rand_ternary(h3, g3, rng(), greedy).contained, t3);
            EXPECT_EQ(rand_ternary(h3, g3, rng(), full).contained, t3);
            EXPECT_EQ(rand_dary(h3, g3, 3, rng()).contained, t3);
            EXPECT_EQ(rand_dary(h4, g4, 4, rng()).contained, t4);
        }
    }
}

TEST(Subiso, DegreeLimitsThrow) {
    const Tree star = star_tree(3);
    EXPECT_THROW(rand_binary(star, star, 0), ConstraintError);
    EXPECT_THROW(rand_ternary(star_tree(4), star, 0, DecisionTree3x3::greedy_baseline()), ConstraintError);
    EXPECT_THROW(rand_dary(star, star_tree(5), 4, 0), ConstraintError);
    EXPECT_THROW(rand_dary(star, star, 0, 0), ConstraintError);
    EXPECT_THROW(expected_cost_exact_binary(star, star), ConstraintError);
    EXPECT_THROW(expected_cost_exact_binary(path_tree(1001), path_tree(1000)), ConstraintError);
}

TEST(Subiso, ContainmentIsAPreorder) {
    SplitMix64 rng(23);
    for (int i = 0; i < 500; ++i) {
        const Tree t = random_tree(1 + rng.below(30), 3, 8, rng());
        EXPECT_TRUE(subiso_det(t, t).contained);
        EXPECT_TRUE(subiso_det(t, shuffle_children(t, rng())).contained);
        // Deleting a leaf of the pattern keeps it contained.
        Tree smaller = t;
        for (int k = 0; k < 3 && smaller.size() > 1; ++k) {
            NodeId leaf = kEmpty;
            for (NodeId v = 0; v < smaller.size(); ++v)
                if (v != smaller.root() && smaller.degree(v) == 0) leaf = v;
            smaller = remove_leaf(smaller, leaf);
            EXPECT_TRUE(subiso_det(smaller, t).contained);
        }
    }
    for (int i = 0; i < 2000; ++i) {
        const Tree a = small_tree(rng, 6, 3), b = small_tree(rng, 9, 3), c = small_tree(rng, 12, 3);
        if (subiso_det(a, b).contained && subiso_det(b, c).contained) {
            EXPECT_TRUE(subiso_det(a, c).contained);
        }
    }
}

TEST(Subiso, MutualContainmentIsIsomorphism) {
    SplitMix64 rng(24);
    std::size_t mutual = 0;
    for (int i = 0; i < 5000; ++i) {
        const Tree a = random_tree(1 + rng.below(7), 3, 5, rng());
        const Tree b = random_tree(a.size(), 3, 5, rng());
        const bool both = subiso_det(a, b).contained && subiso_det(b, a).contained;
        EXPECT_EQ(both, ahu_canonize(a) == ahu_canonize(b));
        mutual += both ? 1 : 0;
    }
    EXPECT_GT(mutual, 0U);
}

TEST(Subiso, RandomizedRunsAreSeedDeterministic) {
    const Tree h = random_tree(40, 2, 8, 1), g = random_tree(80, 2, 9, 2);
    for (std::uint64_t s = 0; s < 20; ++s) {
        EXPECT_EQ(rand_binary(h, g, s).stats, rand_binary(h, g, s).stats);
        EXPECT_EQ(rand_dary(h, g, 3, s).stats, rand_dary(h, g, 3, s).stats);
    }
    EXPECT_EQ(rand_binary(h, g, 5).stats.seed, 5U);
}

TEST(Subiso, BaseCallsWithinTrivialBound) {
    SplitMix64 rng(25);
    const DecisionTree3x3 greedy = DecisionTree3x3::greedy_baseline();
    for (int i = 0; i < 500; ++i) {
        const Tree h = small_tree(rng, 40, 2, 7), g = small_tree(rng, 60, 2, 7);
        const int levels = recursion_levels(h, g);
        EXPECT_LE(rand_binary(h, g, rng()).stats.base_calls(), std::max<std::uint64_t>(1, power(4, levels)));
        const Tree h3 = small_tree(rng, 40, 3, 5), g3 = small_tree(rng, 60, 3, 5);
        const int l3 = recursion_levels(h3, g3);
        EXPECT_LE(rand_ternary(h3, g3, rng(), greedy).stats.base_calls(), std::max<std::uint64_t>(1, power(9, l3)));
        EXPECT_LE(rand_dary(h3, g3, 3, rng()).stats.base_calls(), std::max<std::uint64_t>(1, power(9, l3)));
    }
}

TEST(ExactCost, SmallExamples) {
    // A pair of leaves: two queries on (empty, empty), both yes.
    EXPECT_EQ(expected_cost_exact_binary(Tree::single(), Tree::single()), (CostPair{2, 0}));
    EXPECT_EQ(expected_cost_exact_binary(Tree{}, Tree::single()), (CostPair{1, 0}));
    EXPECT_EQ(expected_cost_exact_binary(Tree::single(), Tree{}), (CostPair{0, 1}));
    // Stick into leaf: the child meets an empty host slot twice either way;
    // when the empty pattern slot comes first it adds two yes calls.
    EXPECT_EQ(expected_cost_exact_binary(parse_tree("(())"), Tree::single()), (CostPair{1, 2}));
}

TEST(ExactCost, MatchesMonteCarloMean) {
    SplitMix64 rng(26);
    for (int i = 0; i < 10; ++i) {
        const Tree h = random_tree(6 + rng.below(10), 2, 5, rng());
        const Tree g = random_tree(10 + rng.below(20), 2, 6, rng());
        const CostPair exact = expected_cost_exact_binary(h, g);
        const int runs = 20000;
        double yes = 0, yes_sq = 0, no = 0, no_sq = 0;
        for (int r = 0; r < runs; ++r) {
            const RunStats s = rand_binary(h, g, rng()).stats;
            yes += static_cast<double>(s.yes_base_calls);
            yes_sq += static_cast<double>(s.yes_base_calls * s.yes_base_calls);
            no += static_cast<double>(s.no_base_calls);
            no_sq += static_cast<double>(s.no_base_calls * s.no_base_calls);
        }
        auto check = [&](double sum, double sq, const Rational& expected) {
            const double mean = sum / runs;
            const double se = std::sqrt(std::max(0.0, sq / runs - mean * mean) / runs);
            EXPECT_LE(std::abs(mean - to_double(expected)), 4 * se + 1e-9);
        };
        check(yes, yes_sq, exact.yes_calls);
        check(no, no_sq, exact.no_calls);
    }
}

TEST(ExactCost, WithinRecurrencePowerBound) {
    SplitMix64 rng(27);
    const RecurrenceMatrix m = binary_recurrence();
    for (int i = 0; i < 300; ++i) {
        const Tree h = small_tree(rng, 60, 2, 8), g = small_tree(rng, 80, 2, 8);
        const CostPair exact = expected_cost_exact_binary(h, g);
        const CostPair bound = m.power_bound(recursion_levels(h, g));
        EXPECT_LE(exact.yes_calls, bound.yes_calls) << serialize_tree(h) << " | " << serialize_tree(g);
        EXPECT_LE(exact.no_calls, bound.no_calls) << serialize_tree(h) << " | " << serialize_tree(g);
    }
    for (int height = 0; height <= 7; ++height) {
        const Tree t = complete_dary(2, height);
        const CostPair exact = expected_cost_exact_binary(t, t);
        EXPECT_LE(exact.yes_calls, m.power_bound(height + 1).yes_calls);
        EXPECT_LE(exact.no_calls, m.power_bound(height + 1).no_calls);
    }
}

TEST(Recurrence, Constants) {
    for (const auto& c : recurrence_constants()) EXPECT_TRUE(c.pass()) << c.name << ' ' << c.computed;
    EXPECT_NEAR(binary_recurrence().spectral_radius(), 2.8431, 1e-4);
    EXPECT_NEAR(ternary_recurrence().spectral_radius(), 6.107, 1e-3);
    EXPECT_DOUBLE_EQ(spectral_radius(2, 0, 0, 3), 3.0);
    EXPECT_EQ(binary_recurrence().to_string(), "[[9/4, 1/2], [1, 2]]");
    EXPECT_EQ(binary_recurrence().power_bound(0), (CostPair{1, 1}));
    EXPECT_EQ(binary_recurrence().power_bound(1), (CostPair{Rational(11, 4), 3}));
}
