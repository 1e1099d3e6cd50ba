#include "softedit/edit_metric.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "sed_kernel.hpp"
#include "softedit/error.hpp"
#include "softedit/parallel.hpp"

namespace softedit {

SedParams::SedParams(double t) : tau(t) {
    if (!std::isfinite(t) || t >= 0.0) throw InvalidArgument("tau must be finite and negative");
}

namespace detail {
void check_alphabets(EncodingView x1, EncodingView x2) {
    if (x1.alphabet_size != x2.alphabet_size)
        throw AlphabetMismatch("alphabet sizes differ: " + std::to_string(x1.alphabet_size) + " vs " +
                               std::to_string(x2.alphabet_size));
}
}  // namespace detail

std::size_t levenshtein(std::string_view s1, std::string_view s2) {
    if (s1.size() < s2.size()) std::swap(s1, s2);
    std::vector<std::size_t> prev(s2.size() + 1), cur(s2.size() + 1);
    for (std::size_t j = 0; j <= s2.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= s1.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= s2.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (s1[i - 1] == s2[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[s2.size()];
}

double mismatch_cost(EncodingView x1, EncodingView x2, std::size_t i, std::size_t j) {
    detail::check_alphabets(x1, x2);
    if (i < 1 || i > x1.length || j < 1 || j > x2.length) throw InvalidArgument("mismatch_cost index out of range");
    return kernel::mismatch(x1.row(i - 1), x2.row(j - 1));
}

SedTables sed_tables(EncodingView x1, EncodingView x2, SedParams p) {
    detail::check_alphabets(x1, x2);
    const std::size_t n1 = x1.length, n2 = x2.length, w = n2 + 1;
    const kernel::Temp t(p.tau);

    SedTables tab;
    tab.len1 = n1;
    tab.len2 = n2;
    tab.alpha_sig = Matrix(n1 + 1, w);
    tab.beta_sig = Matrix(n1 + 1, w);
    tab.scale_exp.assign((n1 + 1) * w, 0);
    tab.delta = Matrix(n1, n2);

    auto load = [&](std::size_t i, std::size_t j) {
        return kernel::Cell{tab.alpha_sig(i, j), tab.beta_sig(i, j), tab.scale_exp[i * w + j]};
    };
    auto store = [&](std::size_t i, std::size_t j, const kernel::Cell& c) {
        tab.alpha_sig(i, j) = c.a;
        tab.beta_sig(i, j) = c.b;
        tab.scale_exp[i * w + j] = c.s;
    };

    for (std::size_t j = 0; j <= n2; ++j) store(0, j, kernel::boundary(p.tau, j));
    for (std::size_t i = 1; i <= n1; ++i) {
        store(i, 0, kernel::boundary(p.tau, i));
        const auto r1 = x1.row(i - 1);
        for (std::size_t j = 1; j <= n2; ++j) {
            const double d = kernel::mismatch(r1, x2.row(j - 1));
            tab.delta(i - 1, j - 1) = d;
            store(i, j, kernel::advance(load(i - 1, j), load(i, j - 1), load(i - 1, j - 1), t, kernel::Diag(t, d)));
        }
    }
    return tab;
}

double sed(EncodingView x1, EncodingView x2, SedParams p) {
    detail::check_alphabets(x1, x2);
    const std::size_t n1 = x1.length, n2 = x2.length;
    const kernel::Temp t(p.tau);
    std::vector<kernel::Cell> prev(n2 + 1), cur(n2 + 1);
    for (std::size_t j = 0; j <= n2; ++j) prev[j] = kernel::boundary(p.tau, j);
    for (std::size_t i = 1; i <= n1; ++i) {
        cur[0] = kernel::boundary(p.tau, i);
        const auto r1 = x1.row(i - 1);
        for (std::size_t j = 1; j <= n2; ++j) {
            const kernel::Diag d(t, kernel::mismatch(r1, x2.row(j - 1)));
            cur[j] = kernel::advance(prev[j], cur[j - 1], prev[j - 1], t, d);
        }
        std::swap(prev, cur);
    }
    return prev[n2].a / prev[n2].b;
}

double sed_unbiased(EncodingView x1, EncodingView x2, SedParams p) {
    return unbias(sed(x1, x2, p), sed(x1, x1, p), sed(x2, x2, p));
}

double sed_brute_force(EncodingView x1, EncodingView x2, SedParams p) {
    detail::check_alphabets(x1, x2);
    const std::size_t n1 = x1.length, n2 = x2.length;
    if (n1 > kBruteForceMaxLength || n2 > kBruteForceMaxLength)
        throw TooLong("brute-force SED is limited to length " + std::to_string(kBruteForceMaxLength));

    Matrix delta(n1, n2);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) delta(i, j) = kernel::mismatch(x1.row(i), x2.row(j));

    // Row subsets as bitmasks, bucketed by size.
    auto by_size = [](std::size_t n) {
        std::vector<std::vector<std::uint32_t>> buckets(n + 1);
        for (std::uint32_t m = 0; m < (1u << n); ++m) buckets[std::popcount(m)].push_back(m);
        return buckets;
    };
    const auto s1 = by_size(n1), s2 = by_size(n2);

    std::vector<double> costs;
    std::size_t idx1[kBruteForceMaxLength], idx2[kBruteForceMaxLength];
    for (std::size_t l = 0; l <= std::min(n1, n2); ++l) {
        const double indels = static_cast<double>(n1 - l) + static_cast<double>(n2 - l);
        for (std::uint32_t m1 : s1[l]) {
            for (std::size_t b = 0, k = 0; b < n1; ++b)
                if (m1 >> b & 1u) idx1[k++] = b;
            for (std::uint32_t m2 : s2[l]) {
                for (std::size_t b = 0, k = 0; b < n2; ++b)
                    if (m2 >> b & 1u) idx2[k++] = b;
                double r = 0.0;
                for (std::size_t k = 0; k < l; ++k) r += delta(idx1[k], idx2[k]);
                costs.push_back(r + indels);
            }
        }
    }

    const double r_min = *std::min_element(costs.begin(), costs.end());
    double num = 0.0, den = 0.0;
    for (double r : costs) {
        const double w = std::exp(p.tau * (r - r_min));
        num += r * w;
        den += w;
    }
    return num / den;
}

Matrix distance_matrix(std::span<const SequenceEncoding> xs, SedParams p, bool unbiased, unsigned threads) {
    const std::size_t n = xs.size();
    for (std::size_t i = 1; i < n; ++i) detail::check_alphabets(xs[0], xs[i]);

    std::vector<double> self(n);
    parallel_for(n, threads, [&](std::size_t i) { self[i] = sed(xs[i], xs[i], p); });

    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = unbiased ? 0.0 : self[i];

    // Upper triangle enumerated row by row; row i holds n-1-i cells.
    const std::size_t pairs = n * (n - 1) / 2;
    std::vector<std::size_t> row_start(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) row_start[i + 1] = row_start[i] + (n - 1 - i);
    parallel_for(pairs, threads, [&](std::size_t k) {
        const auto i = static_cast<std::size_t>(std::upper_bound(row_start.begin(), row_start.end(), k) -
                                                row_start.begin()) - 1;
        const std::size_t j = i + 1 + (k - row_start[i]);
        const double d = sed(xs[i], xs[j], p);
        const double v = unbiased ? unbias(d, self[i], self[j]) : d;
        out(i, j) = v;
        out(j, i) = v;
    });
    return out;
}

}  // namespace softedit
