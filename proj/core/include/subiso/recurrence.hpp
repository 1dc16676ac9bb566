#pragma once

#include "subiso/matching.hpp"

#include <string>
#include <vector>

namespace subiso {

/// Expected numbers of recursive calls answered "yes" and "no".
struct CostPair {
    Rational yes_calls = 0;
    Rational no_calls = 0;

    Rational total() const { return yes_calls + no_calls; }
    friend bool operator==(const CostPair&, const CostPair&) = default;
};

/// Row-wise recurrence (T_yes(h), T_no(h)) <= M (T_yes(h-1), T_no(h-1)).
/// Row 0 holds the costs of a "yes" node, row 1 those of a "no" node.
struct RecurrenceMatrix {
    Rational yes_yes = 0;
    Rational yes_no = 0;
    Rational no_yes = 0;
    Rational no_no = 0;

    static RecurrenceMatrix from_rows(const CostPair& yes_row, const CostPair& no_row) {
        return {yes_row.yes_calls, yes_row.no_calls, no_row.yes_calls, no_row.no_calls};
    }

    double spectral_radius() const;
    /// M^levels (1, 1)^T, exactly.
    CostPair power_bound(int levels) const;
    std::string to_string() const;
};

/// Largest eigenvalue of a non-negative 2x2 matrix.
double spectral_radius(double a, double b, double c, double d);

/// The binary-tree recurrence [[9/4, 1/2], [1, 2]].
RecurrenceMatrix binary_recurrence();
/// The ternary recurrence [[133/36, 5/3], [26/9, 37/9]].
RecurrenceMatrix ternary_recurrence();

struct ConstantCheck {
    std::string name;
    double computed = 0;
    double expected = 0;
    double tolerance = 0;
    bool pass() const;
};

/// Closed forms behind the growth rates and the subquadratic-height
/// thresholds, each checked against its published decimal value.
std::vector<ConstantCheck> recurrence_constants();

}  // namespace subiso
