#pragma once

#include "subiso/rng.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace subiso {

using Rational = boost::multiprecision::cpp_rational;

/// k x l boolean biadjacency matrix. Entry (i, j) is the edge (u_i, v_j).
class Adjacency {
public:
    Adjacency(std::size_t k, std::size_t l);

    /// Row-major bit layout: bit i*l + j is entry (i, j). Needs k*l <= 64.
    static Adjacency from_mask(std::size_t k, std::size_t l, std::uint64_t mask);
    static Adjacency identity(std::size_t d);

    std::size_t rows() const noexcept { return k_; }
    std::size_t cols() const noexcept { return l_; }
    bool operator()(std::size_t i, std::size_t j) const { return bits_[i * l_ + j] != 0; }
    void set(std::size_t i, std::size_t j, bool value = true) { bits_[i * l_ + j] = value ? 1 : 0; }
    std::uint64_t mask() const;
    Adjacency transposed() const;

private:
    std::size_t k_;
    std::size_t l_;
    std::vector<unsigned char> bits_;
};

/// Non-negative integer weights, k x l.
class WeightMatrix {
public:
    WeightMatrix(std::size_t k, std::size_t l) : k_(k), l_(l), w_(k * l, 0) {}

    std::size_t rows() const noexcept { return k_; }
    std::size_t cols() const noexcept { return l_; }
    std::int64_t operator()(std::size_t i, std::size_t j) const { return w_[i * l_ + j]; }
    void set(std::size_t i, std::size_t j, std::int64_t w);

private:
    std::size_t k_;
    std::size_t l_;
    std::vector<std::int64_t> w_;
};

/// Size of a maximum matching (augmenting paths).
std::size_t max_matching_size(const Adjacency& a);
/// True iff some matching saturates every left vertex.
bool has_perfect_matching(const Adjacency& a);

struct WeightedMatching {
    std::int64_t weight = 0;
    /// assignment[i] = column matched to row i, or -1 when row i falls on a
    /// padding column (only possible when k > l).
    std::vector<int> assignment;
};

/// Maximum total weight over matchings that saturate the left side. When
/// k > l the matrix is padded with zero-weight columns. O((k+l)^3).
WeightedMatching max_weight_left_saturating(const WeightMatrix& w);

/// Query-counted access to a bipartite adjacency relation. Every call to
/// query() is counted, including repeats.
class EdgeOracle {
public:
    using QueryFn = std::function<bool(std::size_t, std::size_t)>;

    EdgeOracle(std::size_t k, std::size_t l, QueryFn fn);
    static EdgeOracle from_adjacency(Adjacency a);

    std::size_t rows() const noexcept { return k_; }
    std::size_t cols() const noexcept { return l_; }
    bool query(std::size_t i, std::size_t j);
    std::uint64_t query_count() const noexcept { return count_; }

private:
    std::size_t k_;
    std::size_t l_;
    QueryFn fn_;
    std::uint64_t count_ = 0;
};

struct ProtocolResult {
    bool answer = false;
    std::uint64_t queries = 0;

    friend bool operator==(const ProtocolResult&, const ProtocolResult&) = default;
};

// Randomized perfect-matching query protocols on a square d x d oracle.
// All of them are Las Vegas: the answer never depends on the coins.

/// Queries edges in uniformly random order and stops as soon as the positive
/// edges seen so far contain a perfect matching.
ProtocolResult yescase_protocol(EdgeOracle& o, SplitMix64& rng);
/// Swaps sides with probability 1/2, shuffles the left side, then reads
/// whole rows until the processed rows violate Hall's condition.
ProtocolResult nocase_protocol(EdgeOracle& o, SplitMix64& rng);
/// yescase with probability 1/3, nocase with probability 2/3 (d >= 3).
/// For d <= 2 falls back to random-order querying with early exit on
/// either outcome.
ProtocolResult mixed_protocol(EdgeOracle& o, SplitMix64& rng);
/// The d <= 2 fallback: random order, stop once the answer is forced.
ProtocolResult random_order_protocol(EdgeOracle& o, SplitMix64& rng);

ProtocolResult yescase_protocol(EdgeOracle& o, std::uint64_t seed);
ProtocolResult nocase_protocol(EdgeOracle& o, std::uint64_t seed);
ProtocolResult mixed_protocol(EdgeOracle& o, std::uint64_t seed);

// Exact expectations over the protocols' internal randomness.

/// E[queries] of yescase_protocol. Uses P(T > t) = #{t-subsets S : S∩E has
/// no perfect matching} / C(d^2, t), so it is exact without walking the
/// (d^2)! query orders. Needs d^2 <= 25.
Rational exact_expected_queries_yescase(const Adjacency& a);
/// E[queries] of nocase_protocol by enumerating all 2 * d! branches.
/// Throws std::invalid_argument if `a` has a perfect matching.
Rational exact_expected_queries_nocase(const Adjacency& a);
/// Same enumeration without the no-instance precondition.
Rational expected_queries_nocase_any(const Adjacency& a);
/// E[queries] of mixed_protocol (1/3 yescase + 2/3 nocase, or the d <= 2
/// fallback enumerated over all (d^2)! orders).
Rational exact_expected_queries_mixed(const Adjacency& a);
/// E[queries] of random_order_protocol by enumerating every query order.
Rational exact_expected_queries_random_order(const Adjacency& a);

/// Closed-form bounds from the query-complexity analysis.
Rational yescase_bound(int d);  // d^2 - d + 2
Rational nocase_bound(int d);   // d^2 - d/2 + 1
Rational mixed_bound(int d);    // d^2 - d/3 + 2/3

std::string to_string(const Rational& r);
double to_double(const Rational& r);

}  // namespace subiso
