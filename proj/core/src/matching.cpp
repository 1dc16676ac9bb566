#include "subiso/matching.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace subiso {

Adjacency::Adjacency(std::size_t k, std::size_t l) : k_(k), l_(l), bits_(k * l, 0) {
    if (k == 0 || l == 0) throw std::invalid_argument("Adjacency: dimensions must be positive");
}

Adjacency Adjacency::from_mask(std::size_t k, std::size_t l, std::uint64_t mask) {
    if (k * l > 64) throw std::invalid_argument("Adjacency::from_mask: more than 64 entries");
    Adjacency a(k, l);
    for (std::size_t b = 0; b < k * l; ++b) a.bits_[b] = (mask >> b) & 1U;
    return a;
}

Adjacency Adjacency::identity(std::size_t d) {
    Adjacency a(d, d);
    for (std::size_t i = 0; i < d; ++i) a.set(i, i);
    return a;
}

std::uint64_t Adjacency::mask() const {
    if (k_ * l_ > 64) throw std::invalid_argument("Adjacency::mask: more than 64 entries");
    std::uint64_t m = 0;
    for (std::size_t b = 0; b < bits_.size(); ++b)
        if (bits_[b]) m |= std::uint64_t{1} << b;
    return m;
}

Adjacency Adjacency::transposed() const {
    Adjacency t(l_, k_);
    for (std::size_t i = 0; i < k_; ++i)
        for (std::size_t j = 0; j < l_; ++j) t.set(j, i, (*this)(i, j));
    return t;
}

void WeightMatrix::set(std::size_t i, std::size_t j, std::int64_t w) {
    if (w < 0) throw std::invalid_argument("WeightMatrix: negative weight");
    w_.at(i * l_ + j) = w;
}

namespace {

bool try_augment(const Adjacency& a, std::size_t u, std::vector<int>& match_right,
                 std::vector<char>& seen) {
    for (std::size_t v = 0; v < a.cols(); ++v) {
        if (!a(u, v) || seen[v]) continue;
        seen[v] = 1;
        if (match_right[v] < 0 ||
            try_augment(a, static_cast<std::size_t>(match_right[v]), match_right, seen)) {
            match_right[v] = static_cast<int>(u);
            return true;
        }
    }
    return false;
}

}  // namespace

std::size_t max_matching_size(const Adjacency& a) {
    std::vector<int> match_right(a.cols(), -1);
    std::vector<char> seen(a.cols());
    std::size_t size = 0;
    for (std::size_t u = 0; u < a.rows(); ++u) {
        std::fill(seen.begin(), seen.end(), 0);
        if (try_augment(a, u, match_right, seen)) ++size;
    }
    return size;
}

bool has_perfect_matching(const Adjacency& a) {
    if (a.rows() > a.cols()) return false;
    return max_matching_size(a) == a.rows();
}

WeightedMatching max_weight_left_saturating(const WeightMatrix& w) {
    const std::size_t k = w.rows();
    const std::size_t l = std::max(w.cols(), k);
    WeightedMatching out;
    out.assignment.assign(k, -1);
    if (k == 0) return out;

    // Shortest augmenting path Hungarian method on cost = -weight, rows
    // 1..k against columns 1..l (1-based, index 0 is the virtual start).
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
    auto cost = [&](std::size_t i, std::size_t j) -> std::int64_t {
        return j <= w.cols() ? -w(i - 1, j - 1) : 0;
    };
    std::vector<std::int64_t> u(k + 1, 0), v(l + 1, 0);
    std::vector<std::size_t> p(l + 1, 0), way(l + 1, 0);
    for (std::size_t i = 1; i <= k; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<std::int64_t> minv(l + 1, kInf);
        std::vector<char> used(l + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            std::int64_t delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= l; ++j) {
                if (used[j]) continue;
                const std::int64_t cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= l; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    for (std::size_t j = 1; j <= l; ++j) {
        if (p[j] == 0) continue;
        const std::size_t row = p[j] - 1;
        if (j <= w.cols()) {
            out.assignment[row] = static_cast<int>(j - 1);
            out.weight += w(row, j - 1);
        }
    }
    return out;
}

EdgeOracle::EdgeOracle(std::size_t k, std::size_t l, QueryFn fn) : k_(k), l_(l), fn_(std::move(fn)) {
    if (k == 0 || l == 0) throw std::invalid_argument("EdgeOracle: dimensions must be positive");
}

EdgeOracle EdgeOracle::from_adjacency(Adjacency a) {
    const std::size_t k = a.rows();
    const std::size_t l = a.cols();
    return EdgeOracle(k, l, [a = std::move(a)](std::size_t i, std::size_t j) { return a(i, j); });
}

bool EdgeOracle::query(std::size_t i, std::size_t j) {
    if (i >= k_ || j >= l_) throw std::out_of_range("EdgeOracle::query");
    ++count_;
    return fn_(i, j);
}

std::string to_string(const Rational& r) {
    const auto num = boost::multiprecision::numerator(r);
    const auto den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace subiso
