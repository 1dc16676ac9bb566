#include "subiso/matching.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace subiso {
namespace {

/// Matching over a growing edge set on a d x d grid. Adding an edge or a
/// row only needs new augmenting paths, never a rebuild.
class IncrementalMatcher {
public:
    explicit IncrementalMatcher(std::size_t d)
        : d_(d), edges_(d * d, 0), match_left_(d, -1), match_right_(d, -1), seen_(d) {}

    std::size_t size() const noexcept { return size_; }

    void add_edge(std::size_t i, std::size_t j) {
        if (edges_[i * d_ + j]) return;
        edges_[i * d_ + j] = 1;
        if (size_ == d_) return;
        // A new edge can only help an augmenting path that starts at a free
        // left vertex; retry all of them.
        for (std::size_t u = 0; u < d_; ++u) {
            if (match_left_[u] >= 0) continue;
            std::fill(seen_.begin(), seen_.end(), 0);
            if (augment(u)) ++size_;
        }
    }

    /// Tries to match left vertex u (used after all its edges were added).
    bool match_row(std::size_t u) {
        if (match_left_[u] >= 0) return true;
        std::fill(seen_.begin(), seen_.end(), 0);
        if (!augment(u)) return false;
        ++size_;
        return true;
    }

private:
    bool augment(std::size_t u) {
        for (std::size_t v = 0; v < d_; ++v) {
            if (!edges_[u * d_ + v] || seen_[v]) continue;
            seen_[v] = 1;
            if (match_right_[v] < 0 || augment(static_cast<std::size_t>(match_right_[v]))) {
                match_right_[v] = static_cast<int>(u);
                match_left_[u] = static_cast<int>(v);
                return true;
            }
        }
        return false;
    }

    std::size_t d_;
    std::vector<unsigned char> edges_;
    std::vector<int> match_left_;
    std::vector<int> match_right_;
    std::vector<unsigned char> seen_;
    std::size_t size_ = 0;
};

std::size_t require_square(std::size_t k, std::size_t l, const char* who) {
    if (k != l) throw std::invalid_argument(std::string(who) + ": oracle must be square");
    return k;
}

/// Runs the no-case row scan on a fixed adjacency with a fixed row order.
/// Returns the number of queries issued.
std::uint64_t nocase_scan(const Adjacency& a, const std::vector<std::size_t>& rows) {
    const std::size_t d = a.rows();
    IncrementalMatcher m(d);
    std::uint64_t queries = 0;
    for (std::size_t u : rows) {
        for (std::size_t v = 0; v < d; ++v) {
            ++queries;
            if (a(u, v)) m.add_edge(u, v);
        }
        if (!m.match_row(u)) break;
    }
    return queries;
}

bool pm_of_mask(std::size_t d, std::uint64_t mask) {
    return has_perfect_matching(Adjacency::from_mask(d, d, mask));
}

Rational binomial(unsigned n, unsigned k) {
    Rational r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

ProtocolResult yescase_protocol(EdgeOracle& o, SplitMix64& rng) {
    const std::size_t d = require_square(o.rows(), o.cols(), "yescase_protocol");
    std::vector<std::size_t> order(d * d);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order.begin(), order.end());
    const std::uint64_t start = o.query_count();
    IncrementalMatcher m(d);
    for (std::size_t e : order) {
        if (o.query(e / d, e % d)) {
            m.add_edge(e / d, e % d);
            if (m.size() == d) return {true, o.query_count() - start};
        }
    }
    return {false, o.query_count() - start};
}

ProtocolResult nocase_protocol(EdgeOracle& o, SplitMix64& rng) {
    const std::size_t d = require_square(o.rows(), o.cols(), "nocase_protocol");
    const bool swap_sides = rng.coin();
    std::vector<std::size_t> rows(d);
    std::iota(rows.begin(), rows.end(), 0);
    rng.shuffle(rows.begin(), rows.end());
    const std::uint64_t start = o.query_count();
    IncrementalMatcher m(d);
    for (std::size_t u : rows) {
        for (std::size_t v = 0; v < d; ++v) {
            const bool edge = swap_sides ? o.query(v, u) : o.query(u, v);
            if (edge) m.add_edge(u, v);
        }
        if (!m.match_row(u)) return {false, o.query_count() - start};
    }
    return {true, o.query_count() - start};
}

ProtocolResult random_order_protocol(EdgeOracle& o, SplitMix64& rng) {
    const std::size_t d = require_square(o.rows(), o.cols(), "random_order_protocol");
    std::vector<std::size_t> order(d * d);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order.begin(), order.end());
    const std::uint64_t start = o.query_count();
    Adjacency known_yes(d, d);
    Adjacency maybe_yes(d, d);  // positives plus unqueried pairs
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) maybe_yes.set(i, j);
    for (std::size_t e : order) {
        const std::size_t i = e / d;
        const std::size_t j = e % d;
        if (o.query(i, j)) {
            known_yes.set(i, j);
            if (has_perfect_matching(known_yes)) return {true, o.query_count() - start};
        } else {
            maybe_yes.set(i, j, false);
            if (!has_perfect_matching(maybe_yes)) return {false, o.query_count() - start};
        }
    }
    return {has_perfect_matching(known_yes), o.query_count() - start};
}

ProtocolResult mixed_protocol(EdgeOracle& o, SplitMix64& rng) {
    const std::size_t d = require_square(o.rows(), o.cols(), "mixed_protocol");
    if (d <= 2) return random_order_protocol(o, rng);
    if (rng.below(3) == 0) return yescase_protocol(o, rng);
    return nocase_protocol(o, rng);
}

ProtocolResult yescase_protocol(EdgeOracle& o, std::uint64_t seed) {
    SplitMix64 rng(seed);
    return yescase_protocol(o, rng);
}

ProtocolResult nocase_protocol(EdgeOracle& o, std::uint64_t seed) {
    SplitMix64 rng(seed);
    return nocase_protocol(o, rng);
}

ProtocolResult mixed_protocol(EdgeOracle& o, std::uint64_t seed) {
    SplitMix64 rng(seed);
    return mixed_protocol(o, rng);
}

Rational exact_expected_queries_yescase(const Adjacency& a) {
    const std::size_t d = require_square(a.rows(), a.cols(), "exact_expected_queries_yescase");
    const unsigned n = static_cast<unsigned>(d * d);
    if (n > 16) throw std::invalid_argument("exact_expected_queries_yescase: d must be <= 4");
    const std::uint64_t edges = a.mask();
    std::vector<signed char> pm_cache(std::size_t{1} << n, -1);
    std::vector<std::uint64_t> no_pm_count(n + 1, 0);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
        const std::uint64_t seen = s & edges;
        if (pm_cache[seen] < 0) pm_cache[seen] = pm_of_mask(d, seen) ? 1 : 0;
        if (!pm_cache[seen]) ++no_pm_count[static_cast<unsigned>(std::popcount(s))];
    }
    // E[T] = sum_{t < n} P(T > t); the first t queries are a uniform t-subset.
    Rational expected = 0;
    for (unsigned t = 0; t < n; ++t) expected += Rational(no_pm_count[t]) / binomial(n, t);
    return expected;
}

Rational expected_queries_nocase_any(const Adjacency& a) {
    const std::size_t d = require_square(a.rows(), a.cols(), "expected_queries_nocase");
    if (d > 8) throw std::invalid_argument("expected_queries_nocase: d must be <= 8");
    std::uint64_t total = 0;
    std::uint64_t branches = 0;
    for (int swap_sides = 0; swap_sides < 2; ++swap_sides) {
        const Adjacency oriented = swap_sides ? a.transposed() : a;
        std::vector<std::size_t> rows(d);
        std::iota(rows.begin(), rows.end(), 0);
        do {
            total += nocase_scan(oriented, rows);
            ++branches;
        } while (std::next_permutation(rows.begin(), rows.end()));
    }
    return Rational(total) / branches;
}

Rational exact_expected_queries_nocase(const Adjacency& a) {
    if (has_perfect_matching(a))
        throw std::invalid_argument("exact_expected_queries_nocase: input has a perfect matching");
    return expected_queries_nocase_any(a);
}

Rational exact_expected_queries_random_order(const Adjacency& a) {
    const std::size_t d = require_square(a.rows(), a.cols(), "exact_expected_queries_random_order");
    if (d * d > 9) throw std::invalid_argument("exact_expected_queries_random_order: d must be <= 3");
    std::vector<std::size_t> order(d * d);
    std::iota(order.begin(), order.end(), 0);
    std::uint64_t total = 0;
    std::uint64_t branches = 0;
    do {
        Adjacency known_yes(d, d);
        Adjacency maybe_yes(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) maybe_yes.set(i, j);
        std::uint64_t used = 0;
        for (std::size_t e : order) {
            ++used;
            const std::size_t i = e / d;
            const std::size_t j = e % d;
            if (a(i, j)) {
                known_yes.set(i, j);
                if (has_perfect_matching(known_yes)) break;
            } else {
                maybe_yes.set(i, j, false);
                if (!has_perfect_matching(maybe_yes)) break;
            }
        }
        total += used;
        ++branches;
    } while (std::next_permutation(order.begin(), order.end()));
    return Rational(total) / branches;
}

Rational exact_expected_queries_mixed(const Adjacency& a) {
    const std::size_t d = require_square(a.rows(), a.cols(), "exact_expected_queries_mixed");
    if (d <= 2) return exact_expected_queries_random_order(a);
    return Rational(1, 3) * exact_expected_queries_yescase(a) +
           Rational(2, 3) * expected_queries_nocase_any(a);
}

Rational yescase_bound(int d) { return Rational(d) * d - d + 2; }
Rational nocase_bound(int d) { return Rational(d) * d - Rational(d, 2) + 1; }
Rational mixed_bound(int d) { return Rational(d) * d - Rational(d, 3) + Rational(2, 3); }

}  // namespace subiso
