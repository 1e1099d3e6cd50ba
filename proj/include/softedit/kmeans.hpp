#pragma once
// Minibatch K-means over sequences under SED0.
//
// Each round samples a minibatch, labels it by nearest centroid, and runs
// ADAM steps on every centroid using the members it was assigned. Empty
// clusters are reseeded from the batch. The loop stops once the decoded
// consensuses are unchanged for `stable_rounds` consecutive rounds. Centroids
// start from a greedy k-means++ pick of data members, and the whole procedure
// is restarted a few times to escape poor local minima.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "softedit/alphabet.hpp"
#include "softedit/centroid_optim.hpp"
#include "softedit/edit_metric.hpp"

namespace softedit {

struct KMeansConfig {
    std::size_t k = 2;
    std::optional<std::size_t> centroid_length;  // nullopt: median member length
    std::size_t max_rounds = 100;
    std::size_t stable_rounds = 3;
    std::size_t assign_batch = 256;
    // Independent seeded runs; the one with the lowest final full-data
    // objective is returned.
    std::size_t restarts = 3;
    OptimizerConfig opt;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    void validate() const;
};

struct ClusterReport {
    std::vector<std::size_t> labels;
    std::vector<std::string> consensuses;
    std::vector<SequenceEncoding> centroids;
    std::vector<double> objective_trace;  // per-round batch mean SED0 to the assigned centroid
    std::size_t rounds_run = 0;
    std::size_t centroid_length = 0;
    // Full-dataset mean SED0 to the nearest centroid, before and after.
    double initial_objective = 0.0;
    double final_objective = 0.0;
    std::size_t restart = 0;                 // index of the returned run
    std::vector<double> restart_objectives;  // final objective of every run
};

struct Assignment {
    std::vector<std::size_t> labels;
    std::vector<double> distances;
};

// Nearest centroid under SED0; ties go to the lowest centroid index.
std::vector<std::size_t> assign(std::span<const SequenceEncoding> batch, std::span<const CentroidLogits> centroids,
                                SedParams p, unsigned threads = 1);

// Same rule with precomputed self-distances of batch members and centroid
// encodings; also returns the winning distance.
Assignment assign_encoded(std::span<const SequenceEncoding* const> batch, std::span<const double> self_batch,
                          std::span<const SequenceEncoding> centroids, std::span<const double> self_centroids,
                          SedParams p, unsigned threads = 1);

ClusterReport kmeans(std::span<const SequenceEncoding> data, const KMeansConfig& cfg, const Alphabet& alphabet);

}  // namespace softedit
