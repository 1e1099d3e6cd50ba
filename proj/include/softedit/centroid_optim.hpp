#pragma once
// Gradient-based consensus search: minimize the mean SED0 between a soft
// centroid and a set of sequences. The centroid is parametrized by
// unconstrained logits whose rowwise softmax is the encoding, and is updated
// with ADAM on minibatches sampled with replacement.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "softedit/alphabet.hpp"
#include "softedit/edit_metric.hpp"

namespace softedit {

struct CentroidLogits {
    Matrix logits;  // length x |G|

    std::size_t length() const noexcept { return logits.rows; }
    SequenceEncoding encoding() const;

    // log(soften(x, eps)), entrywise.
    static CentroidLogits from_encoding(const SequenceEncoding& x, double eps);
    // Logits of w * x + (1 - w) * uniform, i.e. soften with eps = (1 - w) / |G|.
    static CentroidLogits from_seed(const SequenceEncoding& x, double seed_weight);
};

// Rowwise softmax of an arbitrary real matrix.
Matrix softmax_rows(const Matrix& logits);

struct OptimizerConfig {
    double learning_rate = 0.1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps_adam = 1e-8;
    std::size_t steps_per_update = 200;
    std::size_t batch_size = 64;
    double tau = SedParams::kDefaultTau;
    // Weight the seeding member keeps in the initial centroid; the rest is
    // spread uniformly over the alphabet.
    double init_seed_weight = 0.04;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    // Throws InvalidArgument when a field is out of range.
    void validate() const;
};

struct ConsensusResult {
    SequenceEncoding centroid;
    std::string consensus;
    std::vector<std::pair<std::size_t, double>> objective_trace;  // (step, batch mean SED0)
};

// Mean SED0(x, softmax(c)) over the batch. Throws EmptyBatch.
double consensus_objective(const CentroidLogits& c, std::span<const SequenceEncoding> batch, SedParams p);

struct ObjectiveGradient {
    double value = 0.0;
    Matrix d_logits;
};

// Objective value and its gradient with respect to the logits. self_dist[i]
// must hold SED(batch[i], batch[i]).
ObjectiveGradient consensus_objective_grad(const CentroidLogits& c, std::span<const SequenceEncoding* const> batch,
                                           std::span<const double> self_dist, SedParams p, unsigned threads = 1);

// ADAM state bound to one centroid. Moments persist across calls to step().
class ConsensusOptimizer {
public:
    ConsensusOptimizer(CentroidLogits init, const OptimizerConfig& cfg);

    const CentroidLogits& centroid() const noexcept { return centroid_; }
    std::size_t steps_taken() const noexcept { return t_; }

    // Replaces the centroid and clears the moment estimates.
    void reset(CentroidLogits init);

    // One ADAM step on the objective over batch_size members drawn with
    // replacement from `pool` (indices into data). Returns the batch
    // objective at the pre-update centroid.
    double step(std::span<const SequenceEncoding> data, std::span<const double> self_dist,
                std::span<const std::size_t> pool, std::mt19937_64& rng);

private:
    OptimizerConfig cfg_;
    SedParams params_;
    CentroidLogits centroid_;
    Matrix m_, v_;
    std::size_t t_ = 0;
};

// Initial centroid of length `length` drawn from a random member of `data`.
// Members of exactly that length are preferred; otherwise the drawn member is
// truncated or padded with uniform rows.
CentroidLogits init_centroid(std::span<const SequenceEncoding> data, std::size_t length, double seed_weight,
                             std::mt19937_64& rng);
CentroidLogits centroid_from_member(const SequenceEncoding& member, std::size_t length, double seed_weight);

std::size_t median_length(std::span<const SequenceEncoding> data);

ConsensusResult optimize_consensus(std::span<const SequenceEncoding> data, std::size_t centroid_length,
                                   const OptimizerConfig& cfg, const Alphabet& alphabet);

}  // namespace softedit
