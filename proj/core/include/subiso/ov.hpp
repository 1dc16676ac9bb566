#pragma once

#include "subiso/tree.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace subiso {

/// Binary vector, one byte (0 or 1) per coordinate.
using BitVector = std::vector<std::uint8_t>;

/// Two lists of N vectors of dimension `dim`.
struct OvInstance {
    std::size_t dim = 0;
    std::vector<BitVector> a;
    std::vector<BitVector> b;

    std::size_t n() const noexcept { return a.size(); }
    /// Throws ConstraintError on unequal list sizes, wrong vector lengths or
    /// entries other than 0/1.
    void validate() const;
};

/// File format: `N D`, N lines of D characters from {0,1} (list A), a
/// blank line, then N lines (list B). Throws ParseError.
OvInstance parse_ov(std::string_view text);
std::string format_ov(const OvInstance& inst);

/// Each entry is 1 with probability `density`.
OvInstance random_ov(std::size_t n, std::size_t dim, double density, std::uint64_t seed);

bool orthogonal(const BitVector& x, const BitVector& y);
std::size_t popcount(const BitVector& x);
/// True iff some pair (alpha in A, beta in B) is orthogonal. O(N^2 D).
bool ov_bruteforce(const OvInstance& inst);

// Vector gadgets on a path u_0 .. u_{D+2}. Coordinate i (1-based) hangs a
// pendant leaf at u_i: on the pattern side when alpha[i] = 1, on the host
// side when beta[i] = 0. Pattern fits host iff the vectors are orthogonal.
Tree simple_gadget_h(const BitVector& alpha);
Tree simple_gadget_g(const BitVector& beta);

/// Path z_1 .. z_l with a pendant leaf at z_i iff bits[i] = 1.
Tree index_gadget(const std::vector<std::uint8_t>& bits);

/// Number of leaves of the complete binary tree of a log-depth gadget: the
/// smallest power of two >= dim.
std::size_t logdepth_leaves(std::size_t dim);
/// Bits per index in log-depth gadgets: ceil(log2(leaves + 1)).
std::size_t logdepth_index_length(std::size_t dim);

// Binary gadgets of logarithmic height: a complete binary tree whose leaf
// u_i carries Q(i), then Q(~i), then a tail path of 3 nodes (pattern side:
// alpha[i] = 1, host side: beta[i] = 0) or 2 nodes otherwise. Surplus
// leaves beyond dim get a 2-node tail in H and a 3-node tail in G.
Tree logdepth_gadget_h(const BitVector& alpha);
Tree logdepth_gadget_g(const BitVector& beta);

/// Pattern/host pair encoding an OV instance for the containment problem.
struct SubisoInstance {
    Tree h;
    Tree g;
    /// Lists padded to this length (bounded construction only).
    std::size_t padded_n = 0;
    /// Some alpha is all-zero, or some beta is all-zero: the OV answer is
    /// yes without search.
    bool trivial = false;
};

/// Root with the N pattern gadgets / root with the N host gadgets plus
/// N-1 all-zero host gadgets. Unbounded degree.
SubisoInstance build_simple_instance(const OvInstance& inst);

/// Degree <= d, height O(log_d N + log D). N is padded to a power of d
/// with all-ones vectors on both sides. Throws ConstraintError for d < 2.
SubisoInstance build_bounded_instance(const OvInstance& inst, int d);

/// One LCST instance per popcount class of A.
struct LcstTriple {
    Tree h;
    Tree g;
    std::size_t threshold = 0;
    std::size_t e_prime = 0;   // size of every pattern gadget in this class
    std::size_t popcount = 0;  // ones per A vector after preprocessing
    std::size_t padded_n = 0;
};

struct LcstInstanceBundle {
    std::vector<LcstTriple> triples;
    int d = 2;
};

/// Prepends 1 to every A vector and 0 to every B vector, splits A by
/// popcount, pads each class and B to a common power of d by repeating
/// vectors, and combines the gadgets under complete d-ary trees. The OV
/// answer is yes iff some triple has lcst(h, g) >= threshold.
LcstInstanceBundle build_lcst_instance(const OvInstance& inst, int d);

/// Evaluates the bundle with the LCST solver.
bool lcst_bundle_answer(const LcstInstanceBundle& bundle);

}  // namespace subiso
