#pragma once
// Drivers for the synthetic benchmark protocols: the SED vs Levenshtein
// correlation study on random pairs, and clustering of noisy variants of
// random basis strings. Shared by the command line and the acceptance suite.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "softedit/alphabet.hpp"
#include "softedit/data_io.hpp"
#include "softedit/eval_metrics.hpp"
#include "softedit/kmeans.hpp"

namespace softedit {

// Independent child seeds from one user seed.
std::vector<std::uint64_t> derive_seeds(std::uint64_t seed, std::size_t count);

struct RSquaredRow {
    double tau = 0.0;
    double r2 = 0.0;         // SED0 taken directly as a predictor of Levenshtein
    double r2_affine = 0.0;  // squared correlation of SED with Levenshtein
};

// n_pairs random one-hot pairs with lengths uniform in [min_len, max_len].
// Throws DegenerateInput when n_pairs < 2.
std::vector<RSquaredRow> rsquared_study(std::size_t n_pairs, std::span<const double> taus, std::size_t min_len,
                                        std::size_t max_len, const Alphabet& a, std::uint64_t seed,
                                        unsigned threads = 1);

struct SyntheticSpec {
    std::size_t k = 2;
    std::size_t length = 10;
    std::size_t min_dist = 5;
    std::size_t per_base = 1000;
    std::size_t noise_rate = 2;
};

SyntheticDataset make_synthetic(const SyntheticSpec& spec, const Alphabet& a, std::uint64_t seed);

struct SyntheticOutcome {
    SyntheticDataset data;
    ClusterReport report;
    double accuracy = 0.0;
    ConsensusQuality quality;
};

// Generates a dataset from `seed`, clusters it with cfg (k and seed are
// overridden from spec and seed) and scores the result.
SyntheticOutcome run_synthetic(const SyntheticSpec& spec, KMeansConfig cfg, const Alphabet& a, std::uint64_t seed);

}  // namespace softedit
