#include "subiso/lcst.hpp"
#include "subiso/ov.hpp"
#include "subiso/subiso.hpp"

#include <gtest/gtest.h>

#include <bit>

using namespace subiso;

namespace {

BitVector bits_of(std::uint32_t mask, std::size_t dim) {
    BitVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = (mask >> i) & 1U;
    return v;
}

bool orthogonal_oracle(std::uint32_t x, std::uint32_t y) { return (x & y) == 0; }

bool contains(const Tree& h, const Tree& g) { return subiso_det(h, g, true).contained; }

BitVector prefixed(std::uint8_t first, const BitVector& v) {
    BitVector out{first};
    out.insert(out.end(), v.begin(), v.end());
    return out;
}

}  // namespace

TEST(OvFormat, ParseAndRoundTrip) {
    const OvInstance inst = parse_ov("2 3\n101\n010\n\n001\n110\n");
    EXPECT_EQ(inst.n(), 2U);
    EXPECT_EQ(inst.dim, 3U);
    EXPECT_EQ(inst.a[0], (BitVector{1, 0, 1}));
    EXPECT_EQ(inst.b[1], (BitVector{1, 1, 0}));
    EXPECT_EQ(format_ov(inst), "2 3\n101\n010\n\n001\n110\n");
    EXPECT_EQ(format_ov(parse_ov("2 3\r\n101\r\n010\r\n\r\n001\r\n110\r\n\n\n")), format_ov(inst));
    for (std::uint64_t s = 0; s < 50; ++s) {
        const OvInstance r = random_ov(1 + s % 9, 1 + s % 7, 0.4, s);
        const OvInstance back = parse_ov(format_ov(r));
        EXPECT_EQ(back.a, r.a);
        EXPECT_EQ(back.b, r.b);
    }
}

TEST(OvFormat, ParseErrors) {
    EXPECT_THROW(parse_ov(""), ParseError);
    EXPECT_THROW(parse_ov("x 3\n"), ParseError);
    EXPECT_THROW(parse_ov("1 3 4\n101\n\n010\n"), ParseError);
    EXPECT_THROW(parse_ov("1 3\n101\n010\n"), ParseError);
    EXPECT_THROW(parse_ov("1 3\n1011\n\n010\n"), ParseError);
    EXPECT_THROW(parse_ov("1 3\n1a1\n\n010\n"), ParseError);
    EXPECT_THROW(parse_ov("2 3\n101\n\n010\n"), ParseError);
    EXPECT_THROW(parse_ov("1 3\n101\n\n010\n111\n"), ParseError);
    try {
        parse_ov("1 3\n1a1\n\n010\n");
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 5U);
    }
}

TEST(OvInstance, ValidateAndBruteForce) {
    OvInstance bad;
    bad.dim = 2;
    bad.a = {{1, 0}};
    EXPECT_THROW(bad.validate(), ConstraintError);
    bad.b = {{1, 2}};
    EXPECT_THROW(bad.validate(), ConstraintError);
    EXPECT_TRUE(ov_bruteforce(parse_ov("2 3\n101\n010\n\n001\n110\n")));
    EXPECT_FALSE(ov_bruteforce(parse_ov("2 2\n11\n10\n\n11\n10\n")));
    EXPECT_TRUE(orthogonal({1, 0, 0}, {0, 1, 1}));
    EXPECT_FALSE(orthogonal({1, 0, 1}, {0, 0, 1}));
    EXPECT_EQ(popcount({1, 0, 1, 1}), 3U);
    const OvInstance dense = random_ov(5, 4, 1.0, 1);
    for (const auto& v : dense.a) EXPECT_EQ(popcount(v), 4U);
    const OvInstance sparse = random_ov(5, 4, 0.0, 1);
    for (const auto& v : sparse.b) EXPECT_EQ(popcount(v), 0U);
}

TEST(Gadgets, SimpleGadgetLawExhaustive) {
    const std::size_t dim = 4;
    for (std::uint32_t x = 0; x < 16; ++x)
        for (std::uint32_t y = 0; y < 16; ++y)
            EXPECT_EQ(contains(simple_gadget_h(bits_of(x, dim)), simple_gadget_g(bits_of(y, dim))),
                      orthogonal_oracle(x, y))
                << x << ' ' << y;
}

TEST(Gadgets, SimpleGadgetSizes) {
    for (std::uint32_t x = 0; x < 32; ++x) {
        const BitVector v = bits_of(x, 5);
        const std::size_t ones = static_cast<std::size_t>(std::popcount(x));
        EXPECT_EQ(simple_gadget_h(v).size(), 5 + 3 + ones);
        EXPECT_EQ(simple_gadget_g(v).size(), 5 + 3 + (5 - ones));
        EXPECT_EQ(metrics(simple_gadget_h(v)).height, static_cast<int>(5 + 2));
    }
}

TEST(Gadgets, IndexGadgetSubsetLaw) {
    EXPECT_THROW(index_gadget({}), ConstraintError);
    for (std::uint32_t x = 0; x < 8; ++x)
        for (std::uint32_t y = 0; y < 8; ++y)
            EXPECT_EQ(contains(index_gadget(bits_of(x, 3)), index_gadget(bits_of(y, 3))), (x & ~y) == 0)
                << x << ' ' << y;
}

TEST(Gadgets, LogDepthGadgetLawExhaustive) {
    for (std::size_t dim : {1U, 3U, 4U, 5U}) {
        const std::uint32_t count = 1U << dim;
        for (std::uint32_t x = 0; x < count; ++x)
            for (std::uint32_t y = 0; y < count; ++y)
                EXPECT_EQ(contains(logdepth_gadget_h(bits_of(x, dim)), logdepth_gadget_g(bits_of(y, dim))),
                          orthogonal_oracle(x, y))
                    << dim << ' ' << x << ' ' << y;
    }
}

TEST(Gadgets, LogDepthShape) {
    EXPECT_EQ(logdepth_leaves(1), 1U);
    EXPECT_EQ(logdepth_leaves(5), 8U);
    EXPECT_EQ(logdepth_leaves(8), 8U);
    EXPECT_EQ(logdepth_index_length(4), 3U);
    EXPECT_EQ(logdepth_index_length(5), 4U);
    for (std::size_t dim = 1; dim <= 9; ++dim) {
        const std::size_t p = logdepth_leaves(dim), l = logdepth_index_length(dim);
        // Indices 1..P must fit in l bits.
        EXPECT_LT(p, std::size_t{1} << l);
        for (std::uint32_t x = 0; x < (1U << dim); x += 3) {
            const BitVector v = bits_of(x, dim);
            const auto ones = static_cast<std::size_t>(std::popcount(x));
            const std::size_t frame = 2 * p - 1 + 3 * p * l;
            const Tree h = logdepth_gadget_h(v), g = logdepth_gadget_g(v);
            EXPECT_EQ(h.size(), frame + 2 * p + ones);
            EXPECT_EQ(g.size(), frame + 3 * p - ones);
            const auto levels = static_cast<int>(std::countr_zero(p));
            const bool g_long = ones < dim || p > dim;
            EXPECT_EQ(metrics(g).height, levels + static_cast<int>(2 * l) + (g_long ? 3 : 2));
            EXPECT_EQ(metrics(h).height, levels + static_cast<int>(2 * l) + (ones > 0 ? 3 : 2));
            EXPECT_LE(metrics(h).max_degree, 2U);
            EXPECT_LE(metrics(g).max_degree, 2U);
        }
    }
}

TEST(Reductions, SimpleConstruction) {
    for (std::uint64_t s = 0; s < 300; ++s) {
        const OvInstance inst = random_ov(1 + s % 6, 1 + s % 5, 0.5, s);
        const SubisoInstance r = build_simple_instance(inst);
        EXPECT_EQ(contains(r.h, r.g), ov_bruteforce(inst)) << format_ov(inst);
        EXPECT_EQ(r.padded_n, inst.n());
        EXPECT_EQ(r.h.degree(r.h.root()), inst.n());
        EXPECT_EQ(r.g.degree(r.g.root()), 2 * inst.n() - 1);
    }
    const SubisoInstance t = build_simple_instance(parse_ov("1 2\n00\n\n11\n"));
    EXPECT_TRUE(t.trivial);
}

TEST(Reductions, BoundedConstruction) {
    for (int d = 2; d <= 4; ++d) {
        for (std::uint64_t s = 0; s < 150; ++s) {
            const OvInstance inst = random_ov(1 + s % 7, 1 + s % 5, 0.5, s * 7 + static_cast<std::uint64_t>(d));
            const SubisoInstance r = build_bounded_instance(inst, d);
            EXPECT_EQ(contains(r.h, r.g), ov_bruteforce(inst)) << d << '\n' << format_ov(inst);
            EXPECT_LE(metrics(r.h).max_degree, static_cast<std::size_t>(d));
            EXPECT_LE(metrics(r.g).max_degree, static_cast<std::size_t>(d));
            std::size_t p = 1;
            int k = 0;
            while (p < inst.n()) p *= static_cast<std::size_t>(d), ++k;
            EXPECT_EQ(r.padded_n, p);
            const int gadget = metrics(logdepth_gadget_g(BitVector(inst.dim, 0))).height;
            EXPECT_LE(metrics(r.g).height, 2 * k + 2 + gadget);
            EXPECT_LE(metrics(r.h).height, 2 * k + 2 + gadget);
        }
    }
    EXPECT_THROW(build_bounded_instance(random_ov(2, 2, 0.5, 0), 1), ConstraintError);
}

TEST(Reductions, LcstGadgetScores) {
    // Every pattern gadget scores E' against a host gadget when the vectors
    // are orthogonal and E' - 1 otherwise.
    const std::size_t dim = 3;
    BitVector delta(dim + 1, 0);
    delta[0] = 1;
    for (std::uint32_t x = 0; x < 8; ++x) {
        Tree hg;
        hg.graft(hg.add_root(), logdepth_gadget_h(prefixed(1, bits_of(x, dim))));
        const std::size_t e_prime = hg.size();
        for (std::uint32_t y = 0; y < 8; ++y) {
            Tree gg;
            const NodeId r = gg.add_root();
            gg.graft(r, logdepth_gadget_g(delta));
            gg.graft(r, logdepth_gadget_g(prefixed(0, bits_of(y, dim))));
            EXPECT_EQ(lcst(hg, gg).size, orthogonal_oracle(x, y) ? e_prime : e_prime - 1) << x << ' ' << y;
        }
    }
}

TEST(Reductions, LcstConstruction) {
    for (int d = 2; d <= 3; ++d) {
        for (std::uint64_t s = 0; s < 120; ++s) {
            const OvInstance inst = random_ov(1 + s % 6, 1 + s % 4, 0.6, s + 1000 * static_cast<std::uint64_t>(d));
            const LcstInstanceBundle bundle = build_lcst_instance(inst, d);
            EXPECT_EQ(lcst_bundle_answer(bundle), ov_bruteforce(inst)) << format_ov(inst);
            std::size_t classes = 0;
            std::vector<bool> seen(inst.dim + 2, false);
            for (const auto& a : inst.a)
                if (!seen[popcount(a) + 1]) seen[popcount(a) + 1] = true, ++classes;
            EXPECT_EQ(bundle.triples.size(), classes);
            for (const LcstTriple& t : bundle.triples) {
                const std::size_t score = lcst(t.h, t.g).size;
                bool class_yes = false;
                for (const auto& a : inst.a)
                    for (const auto& b : inst.b)
                        if (popcount(a) + 1 == t.popcount && orthogonal(a, b)) class_yes = true;
                if (class_yes)
                    EXPECT_GE(score, t.threshold);
                else
                    EXPECT_EQ(score, t.threshold - 1);
            }
        }
    }
}

TEST(Reductions, LcstPopcountClassesShareGadgetSize) {
    for (std::size_t dim = 1; dim <= 6; ++dim)
        for (std::uint32_t x = 0; x < (1U << dim); ++x)
            for (std::uint32_t y = x + 1; y < (1U << dim); ++y)
                if (std::popcount(x) == std::popcount(y)) {
                    EXPECT_EQ(logdepth_gadget_h(bits_of(x, dim)).size(), logdepth_gadget_h(bits_of(y, dim)).size());
                }
}
