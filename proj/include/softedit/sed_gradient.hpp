#pragma once
// Analytic gradient of SED / SED0 with respect to both encoding matrices.
//
// The forward tables are retained and an adjoint sweep runs back over them in
// the same significand/exponent representation. The |.| inside delta uses the
// subgradient sign(0) = 0. Gradients are of the unconstrained matrix function;
// rows are not projected back onto the simplex.

#include <cstddef>
#include <vector>

#include "softedit/alphabet.hpp"
#include "softedit/edit_metric.hpp"

namespace softedit {

struct SedGradient {
    Matrix d_x1;  // len1 x |G|
    Matrix d_x2;  // len2 x |G|
    double value = 0.0;
};

SedGradient sed_value_grad(EncodingView x1, EncodingView x2, SedParams p, bool unbiased);

// Gradient of SED(x, x) as a function of x, i.e. both argument slots summed.
struct SelfGradient {
    Matrix d_x;
    double value = 0.0;
};
SelfGradient sed_self_grad(EncodingView x, SedParams p);

// Central differences, one entry at a time, without renormalizing rows.
SedGradient finite_diff_grad(EncodingView x1, EncodingView x2, SedParams p, bool unbiased, double h);

// Entries whose central-difference stencil crosses a kink of some
// |X1[i,k] - X2[j,k]| term (the two differ by no more than `h`).
struct TieMask {
    std::vector<bool> x1;  // len1 * |G|, row-major
    std::vector<bool> x2;  // len2 * |G|
    std::size_t count = 0;
};
TieMask find_ties(EncodingView x1, EncodingView x2, bool unbiased, double h);

struct GradientCheck {
    double max_rel_error = 0.0;
    std::size_t compared = 0;
    std::size_t ties_excluded = 0;
};

// Compares analytic and finite-difference gradients entrywise, skipping tie
// entries. Relative error is |a - f| / max(|f|, kGradCheckFloor); the floor
// keeps round-off in near-zero finite differences from dominating.
inline constexpr double kGradCheckFloor = 1e-3;
GradientCheck check_gradient(EncodingView x1, EncodingView x2, SedParams p, bool unbiased, double h);

}  // namespace softedit
