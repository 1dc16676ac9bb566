#include "subiso/recurrence.hpp"
#include "subiso/subiso.hpp"

#include <array>
#include <cmath>
#include <unordered_map>
#include <utility>

namespace subiso {

double spectral_radius(double a, double b, double c, double d) {
    const double half = (a - d) / 2;
    return (a + d) / 2 + std::sqrt(half * half + b * c);
}

double RecurrenceMatrix::spectral_radius() const {
    return subiso::spectral_radius(to_double(yes_yes), to_double(yes_no), to_double(no_yes), to_double(no_no));
}

CostPair RecurrenceMatrix::power_bound(int levels) const {
    CostPair v{1, 1};
    for (int i = 0; i < levels; ++i)
        v = {yes_yes * v.yes_calls + yes_no * v.no_calls, no_yes * v.yes_calls + no_no * v.no_calls};
    return v;
}

std::string RecurrenceMatrix::to_string() const {
    return "[[" + subiso::to_string(yes_yes) + ", " + subiso::to_string(yes_no) + "], [" +
           subiso::to_string(no_yes) + ", " + subiso::to_string(no_no) + "]]";
}

RecurrenceMatrix binary_recurrence() {
    return {Rational(9, 4), Rational(1, 2), Rational(1), Rational(2)};
}

RecurrenceMatrix ternary_recurrence() {
    return {Rational(133, 36), Rational(5, 3), Rational(26, 9), Rational(37, 9)};
}

bool ConstantCheck::pass() const { return std::abs(computed - expected) <= tolerance; }

std::vector<ConstantCheck> recurrence_constants() {
    const double binary = (17 + std::sqrt(33.0)) / 8;
    const double ternary = (281 + std::sqrt(25185.0)) / 72;
    return {
        {"binary growth (17+sqrt33)/8", binary, 2.8431, 1e-4},
        {"binary matrix radius", binary_recurrence().spectral_radius(), binary, 1e-12},
        {"ternary growth (281+sqrt25185)/72", ternary, 6.107, 1e-3},
        {"ternary matrix radius", ternary_recurrence().spectral_radius(), ternary, 1e-12},
        {"binary height threshold 2log2/log(2.8431)", 2 * std::log(2.0) / std::log(2.8431), 1.3266, 1e-3},
        {"binary exponent log2(2.8431)", std::log2(2.8431), 1.5075, 1e-3},
    };
}

namespace {

class BinaryCostModel {
public:
    BinaryCostModel(const Tree& h, const Tree& g) : h_(h), g_(g) {}

    CostPair cost(NodeId hv, NodeId gv) {
        if (hv == kEmpty) return {1, 0};
        if (gv == kEmpty) return {0, 1};
        const auto key = pair_key(hv, gv);
        if (auto it = cost_.find(key); it != cost_.end()) return it->second;

        const auto hs = slots(h_, hv);
        const auto gs = slots(g_, gv);
        CostPair sum;
        for (int swap_h = 0; swap_h < 2; ++swap_h) {
            for (int swap_g = 0; swap_g < 2; ++swap_g) {
                const NodeId hl = hs[swap_h], hr = hs[1 - swap_h];
                const NodeId gl = gs[swap_g], gr = gs[1 - swap_g];
                auto step = [&](NodeId a, NodeId b) {
                    const CostPair c = cost(a, b);
                    sum.yes_calls += c.yes_calls;
                    sum.no_calls += c.no_calls;
                    return answer(a, b);
                };
                if (step(hl, gl) && step(hr, gr)) continue;
                if (!step(hl, gr)) continue;
                step(hr, gl);
            }
        }
        sum.yes_calls /= 4;
        sum.no_calls /= 4;
        cost_.emplace(key, sum);
        return sum;
    }

private:
    static std::uint64_t pair_key(NodeId a, NodeId b) { return (std::uint64_t{a} << 32) | b; }

    static std::array<NodeId, 2> slots(const Tree& t, NodeId v) {
        std::array<NodeId, 2> out{kEmpty, kEmpty};
        const auto ch = t.children(v);
        for (std::size_t i = 0; i < ch.size(); ++i) out[i] = ch[i];
        return out;
    }

    bool answer(NodeId hv, NodeId gv) {
        if (hv == kEmpty) return true;
        if (gv == kEmpty) return false;
        const auto key = pair_key(hv, gv);
        if (auto it = answer_.find(key); it != answer_.end()) return it->second;
        const auto [hl, hr] = slots(h_, hv);
        const auto [gl, gr] = slots(g_, gv);
        const bool result = (answer(hl, gl) && answer(hr, gr)) || (answer(hl, gr) && answer(hr, gl));
        answer_.emplace(key, result);
        return result;
    }

    const Tree& h_;
    const Tree& g_;
    std::unordered_map<std::uint64_t, CostPair> cost_;
    std::unordered_map<std::uint64_t, bool> answer_;
};

}  // namespace

CostPair expected_cost_exact_binary(const Tree& h, const Tree& g) {
    if (metrics(h).max_degree > 2 || metrics(g).max_degree > 2)
        throw ConstraintError("expected_cost_exact_binary: tree degree exceeds 2");
    if (h.size() * g.size() > 1'000'000)
        throw ConstraintError("expected_cost_exact_binary: |h|*|g| exceeds 10^6");
    BinaryCostModel model(h, g);
    return model.cost(h.root(), g.root());
}

}  // namespace subiso
