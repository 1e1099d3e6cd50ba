#pragma once
// Levenshtein distance and soft edit distance (SED).
//
// SED is the Gibbs average, at temperature tau < 0, of the alignment cost
//   R(X1', X2') = sum_i delta(X1'_i, X2'_i) + (L1 - l) + (L2 - l)
// over all pairs of equal-length (l) row subsets X1' of X1 and X2' of X2,
// where delta is half the L1 distance between two rows. It is evaluated by
// a Wagner-Fischer style fill of two tables alpha (sum of R * e^{tau R}) and
// beta (sum of e^{tau R}) over prefix pairs; SED = alpha / beta at the corner.
//
// Both tables decay like e^{tau * O(L)}, so each cell stores a significand
// pair and a shared power-of-two exponent. The exponent is renormalized when
// the beta significand leaves [2^-512, 2^512]; the ratio cancels it.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "softedit/alphabet.hpp"

namespace softedit {

struct SedParams {
    static constexpr double kDefaultTau = -4.0;

    double tau = kDefaultTau;

    SedParams() = default;
    // Throws InvalidArgument unless tau is finite and strictly negative.
    explicit SedParams(double t);
};

struct SedTables {
    std::size_t len1 = 0;
    std::size_t len2 = 0;
    Matrix alpha_sig;             // (len1+1) x (len2+1)
    Matrix beta_sig;              // (len1+1) x (len2+1)
    std::vector<int> scale_exp;   // (len1+1) x (len2+1), row-major
    Matrix delta;                 // len1 x len2

    int exponent(std::size_t i, std::size_t j) const { return scale_exp[i * (len2 + 1) + j]; }
    // alpha/beta of the prefix pair (i, j): the SED between the prefixes.
    double ratio(std::size_t i, std::size_t j) const { return alpha_sig(i, j) / beta_sig(i, j); }
    double value() const { return ratio(len1, len2); }
};

std::size_t levenshtein(std::string_view s1, std::string_view s2);

// delta_{i,j} with 1-based row indices, as in the recurrences.
double mismatch_cost(EncodingView x1, EncodingView x2, std::size_t i, std::size_t j);

SedTables sed_tables(EncodingView x1, EncodingView x2, SedParams p);

// Value-only evaluation in O(len2) memory.
double sed(EncodingView x1, EncodingView x2, SedParams p);

// SED(x1,x2) - (SED(x1,x1) + SED(x2,x2)) / 2.
double sed_unbiased(EncodingView x1, EncodingView x2, SedParams p);

// Same combination from precomputed parts; every unbiased value in the
// library goes through this so that cached and direct paths agree bitwise.
inline double unbias(double cross, double self1, double self2) {
    return cross - 0.5 * (self1 + self2);
}

// Direct enumeration of all equal-length row-subset pairs. Exponential;
// throws TooLong when either length exceeds kBruteForceMaxLength.
inline constexpr std::size_t kBruteForceMaxLength = 10;
double sed_brute_force(EncodingView x1, EncodingView x2, SedParams p);

// Symmetric matrix of pairwise SED (or SED0 when unbiased, with a zero
// diagonal). Pairs are evaluated with up to `threads` workers; every cell is
// computed independently so the result does not depend on the thread count.
Matrix distance_matrix(std::span<const SequenceEncoding> xs, SedParams p, bool unbiased,
                       unsigned threads = 1);

namespace detail {
void check_alphabets(EncodingView x1, EncodingView x2);
}

}  // namespace softedit
