#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "softedit/alphabet.hpp"

namespace softedit {

struct EvalSummary {
    double r_squared = 0.0;
    double accuracy = 0.0;
    double delta_mean_consensus_error = 0.0;
    double epsilon_ideal_fraction = 0.0;
};

enum class RSquaredMode {
    // 1 - SS_res/SS_tot with the soft distance itself as the prediction.
    identity,
    // Same, after the least-squares affine fit (squared Pearson correlation).
    affine,
};

// pairs are (soft distance, Levenshtein). Throws DegenerateInput on fewer
// than two pairs or zero variance in the Levenshtein values.
double r_squared(std::span<const std::pair<double, double>> pairs, RSquaredMode mode = RSquaredMode::identity);

// Minimum-cost perfect matching on a square cost matrix. Returns
// assignment[row] = column.
std::vector<std::size_t> hungarian_min_cost(const Matrix& cost);

// Fraction of points labelled correctly under the best one-to-one mapping
// of predicted labels onto true labels.
double clustering_accuracy(std::span<const std::size_t> pred, std::span<const std::size_t> truth, std::size_t k);

struct ConsensusQuality {
    double delta = 0.0;    // mean matched Levenshtein distance
    double epsilon = 0.0;  // fraction of exact matches
};
ConsensusQuality consensus_quality(std::span<const std::string> consensuses, std::span<const std::string> bases);

}  // namespace softedit
