#include "softedit/eval_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "softedit/edit_metric.hpp"
#include "softedit/error.hpp"

namespace softedit {

double r_squared(std::span<const std::pair<double, double>> pairs, RSquaredMode mode) {
    if (pairs.size() < 2) throw DegenerateInput("R^2 needs at least two pairs");
    const auto n = static_cast<double>(pairs.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [x, y] : pairs) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= n;
    mean_y /= n;

    double sxx = 0.0, syy = 0.0, sxy = 0.0, ss_res = 0.0;
    for (const auto& [x, y] : pairs) {
        sxx += (x - mean_x) * (x - mean_x);
        syy += (y - mean_y) * (y - mean_y);
        sxy += (x - mean_x) * (y - mean_y);
        ss_res += (y - x) * (y - x);
    }
    if (syy == 0.0) throw DegenerateInput("Levenshtein values have zero variance");
    if (mode == RSquaredMode::identity) return 1.0 - ss_res / syy;
    if (sxx == 0.0) return 0.0;
    return sxy * sxy / (sxx * syy);
}

std::vector<std::size_t> hungarian_min_cost(const Matrix& cost) {
    if (cost.rows != cost.cols) throw InvalidArgument("assignment cost matrix must be square");
    const std::size_t n = cost.rows;
    constexpr double inf = std::numeric_limits<double>::infinity();
    // Potentials-based shortest augmenting path; 1-based with column 0 as the
    // virtual source.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
    for (std::size_t row = 1; row <= n; ++row) {
        match[0] = row;
        std::size_t col0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[col0] = true;
            const std::size_t r0 = match[col0];
            double best = inf;
            std::size_t col1 = 0;
            for (std::size_t c = 1; c <= n; ++c) {
                if (used[c]) continue;
                const double cur = cost(r0 - 1, c - 1) - u[r0] - v[c];
                if (cur < minv[c]) {
                    minv[c] = cur;
                    way[c] = col0;
                }
                if (minv[c] < best) {
                    best = minv[c];
                    col1 = c;
                }
            }
            for (std::size_t c = 0; c <= n; ++c) {
                if (used[c]) {
                    u[match[c]] += best;
                    v[c] -= best;
                } else {
                    minv[c] -= best;
                }
            }
            col0 = col1;
        } while (match[col0] != 0);
        do {
            const std::size_t col1 = way[col0];
            match[col0] = match[col1];
            col0 = col1;
        } while (col0 != 0);
    }
    std::vector<std::size_t> assignment(n);
    for (std::size_t c = 1; c <= n; ++c) assignment[match[c] - 1] = c - 1;
    return assignment;
}

double clustering_accuracy(std::span<const std::size_t> pred, std::span<const std::size_t> truth, std::size_t k) {
    if (pred.size() != truth.size()) throw LengthMismatch("predicted and true label counts differ");
    if (pred.empty()) throw DegenerateInput("no labels to score");
    Matrix neg_counts(k, k);
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] >= k || truth[i] >= k) throw InvalidArgument("label out of range");
        neg_counts(pred[i], truth[i]) -= 1.0;
    }
    const auto assignment = hungarian_min_cost(neg_counts);
    double correct = 0.0;
    for (std::size_t p = 0; p < k; ++p) correct -= neg_counts(p, assignment[p]);
    return correct / static_cast<double>(pred.size());
}

ConsensusQuality consensus_quality(std::span<const std::string> consensuses, std::span<const std::string> bases) {
    if (consensuses.size() != bases.size()) throw CountMismatch("consensus and basis counts differ");
    const std::size_t k = bases.size();
    if (k == 0) return {0.0, 1.0};
    Matrix dist(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) dist(i, j) = static_cast<double>(levenshtein(consensuses[i], bases[j]));
    const auto assignment = hungarian_min_cost(dist);
    double total = 0.0;
    std::size_t exact = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double d = dist(i, assignment[i]);
        total += d;
        if (d == 0.0) ++exact;
    }
    return {total / static_cast<double>(k), static_cast<double>(exact) / static_cast<double>(k)};
}

}  // namespace softedit
