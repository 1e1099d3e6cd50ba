#pragma once
// Helpers shared by the unit tests and the acceptance runner.

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "softedit/alphabet.hpp"

namespace testing_support {

using softedit::Alphabet;
using softedit::Matrix;
using softedit::SequenceEncoding;

inline std::string random_string(std::size_t len, const Alphabet& a, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, a.size() - 1);
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += a.symbol(pick(rng));
    return s;
}

// Rows drawn from a random positive vector mixed half and half with the
// uniform row, so every entry is bounded away from 0.
inline SequenceEncoding random_interior(std::size_t len, std::size_t g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    Matrix m(len, g);
    for (std::size_t i = 0; i < len; ++i) {
        double sum = 0.0;
        for (double& v : m.row(i)) sum += (v = u(rng));
        for (double& v : m.row(i)) v = 0.5 * v / sum + 0.5 / static_cast<double>(g);
        // exact row sum
        double total = 0.0;
        for (std::size_t k = 0; k + 1 < g; ++k) total += m(i, k);
        m(i, g - 1) = 1.0 - total;
    }
    return SequenceEncoding(std::move(m));
}

// Arbitrary row-stochastic rows, including entries near 0.
inline SequenceEncoding random_stochastic(std::size_t len, std::size_t g, std::mt19937_64& rng) {
    std::exponential_distribution<double> e(1.0);
    Matrix m(len, g);
    for (std::size_t i = 0; i < len; ++i) {
        double sum = 0.0;
        for (double& v : m.row(i)) sum += (v = e(rng));
        for (double& v : m.row(i)) v /= sum;
        double total = 0.0;
        for (std::size_t k = 0; k + 1 < g; ++k) total += m(i, k);
        m(i, g - 1) = std::max(0.0, 1.0 - total);
    }
    return SequenceEncoding(std::move(m));
}

// Unscaled alpha/beta recurrence in long double. Valid while e^{tau (L1+L2)}
// stays representable, which covers L <= 50 at tau = -4 with a wide margin.
inline long double reference_sed(const SequenceEncoding& x1, const SequenceEncoding& x2, long double tau) {
    const std::size_t n1 = x1.length(), n2 = x2.length();
    std::vector<std::vector<long double>> A(n1 + 1, std::vector<long double>(n2 + 1));
    auto B = A;
    for (std::size_t i = 0; i <= n1; ++i) {
        A[i][0] = i * std::exp(tau * i);
        B[i][0] = std::exp(tau * i);
    }
    for (std::size_t j = 0; j <= n2; ++j) {
        A[0][j] = j * std::exp(tau * j);
        B[0][j] = std::exp(tau * j);
    }
    const long double e1 = std::exp(tau), e2 = std::exp(2 * tau);
    for (std::size_t i = 1; i <= n1; ++i)
        for (std::size_t j = 1; j <= n2; ++j) {
            long double d = 0;
            for (std::size_t k = 0; k < x1.alphabet_size(); ++k)
                d += std::fabs(static_cast<long double>(x1(i - 1, k)) - x2(j - 1, k));
            d /= 2;
            const long double ed = std::exp(tau * d);
            B[i][j] = e1 * (B[i - 1][j] + B[i][j - 1]) + B[i - 1][j - 1] * (ed - e2);
            A[i][j] = e1 * (A[i - 1][j] + B[i - 1][j] + A[i][j - 1] + B[i][j - 1]) +
                      A[i - 1][j - 1] * (ed - e2) + B[i - 1][j - 1] * (d * ed - 2 * e2);
        }
    return A[n1][n2] / B[n1][n2];
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    auto dir = std::filesystem::temp_directory_path() / ("softedit_" + tag + "_" + std::to_string(rng()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testing_support
