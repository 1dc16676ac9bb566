#pragma once

#include <cstdint>
#include <limits>
#include <utility>

namespace subiso {

/// SplitMix64. Cheap to construct, so every recursive solver invocation
/// can own a fresh stream derived from its parent with split().
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Independent child stream; advances this stream by one step.
    SplitMix64 split() noexcept { return SplitMix64((*this)() ^ 0x6a09e667f3bcc909ULL); }

    bool coin() noexcept { return ((*this)() >> 63) != 0; }

    /// Uniform integer in [0, n), n > 0. Portable across standard libraries,
    /// unlike std::uniform_int_distribution.
    std::uint64_t below(std::uint64_t n) noexcept {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t x = (*this)();
            if (x >= threshold) return x % n;
        }
    }

    template <typename It>
    void shuffle(It first, It last) noexcept {
        const auto n = static_cast<std::uint64_t>(last - first);
        for (std::uint64_t i = n; i > 1; --i) {
            const auto j = below(i);
            using std::swap;
            swap(first[i - 1], first[j]);
        }
    }

private:
    std::uint64_t state_;
};

/// Deterministic seed for trial `index` of a run seeded with `base`.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    SplitMix64 g(base ^ (index * 0xd1b54a32d192ed03ULL));
    g();
    return g();
}

}  // namespace subiso
