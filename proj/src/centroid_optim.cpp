#include "softedit/centroid_optim.hpp"

#include <algorithm>
#include <cmath>

#include "softedit/error.hpp"
#include "softedit/parallel.hpp"
#include "softedit/sed_gradient.hpp"

namespace softedit {

Matrix softmax_rows(const Matrix& logits) {
    Matrix out(logits.rows, logits.cols);
    for (std::size_t i = 0; i < logits.rows; ++i) {
        const auto z = logits.row(i);
        auto p = out.row(i);
        const double zmax = *std::max_element(z.begin(), z.end());
        double sum = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            p[k] = std::exp(z[k] - zmax);
            sum += p[k];
        }
        for (double& v : p) v /= sum;
    }
    return out;
}

SequenceEncoding CentroidLogits::encoding() const { return SequenceEncoding(softmax_rows(logits)); }

CentroidLogits CentroidLogits::from_encoding(const SequenceEncoding& x, double eps) {
    Matrix m = soften(x, eps).matrix();
    for (double& v : m.data) v = std::log(v);
    return {std::move(m)};
}

CentroidLogits CentroidLogits::from_seed(const SequenceEncoding& x, double seed_weight) {
    if (!(seed_weight > 0.0 && seed_weight < 1.0)) throw InvalidArgument("seed weight must lie in (0,1)");
    return from_encoding(x, (1.0 - seed_weight) / static_cast<double>(x.alphabet_size()));
}

void OptimizerConfig::validate() const {
    if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be positive");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
        throw InvalidArgument("ADAM betas must lie in [0,1)");
    if (!(eps_adam > 0.0)) throw InvalidArgument("ADAM epsilon must be positive");
    if (!(init_seed_weight > 0.0 && init_seed_weight < 1.0)) throw InvalidArgument("seed weight must lie in (0,1)");
    if (batch_size < 1) throw InvalidArgument("batch size must be at least 1");
    if (!std::isfinite(tau) || tau >= 0.0) throw InvalidArgument("tau must be finite and negative");
}

double consensus_objective(const CentroidLogits& c, std::span<const SequenceEncoding> batch, SedParams p) {
    if (batch.empty()) throw EmptyBatch("consensus objective needs a nonempty batch");
    const SequenceEncoding enc = c.encoding();
    const double self_c = sed(enc, enc, p);
    double total = 0.0;
    for (const auto& x : batch) total += unbias(sed(x, enc, p), sed(x, x, p), self_c);
    return total / static_cast<double>(batch.size());
}

ObjectiveGradient consensus_objective_grad(const CentroidLogits& c, std::span<const SequenceEncoding* const> batch,
                                           std::span<const double> self_dist, SedParams p, unsigned threads) {
    if (batch.empty()) throw EmptyBatch("consensus objective needs a nonempty batch");
    const Matrix probs = softmax_rows(c.logits);
    const EncodingView enc(probs);
    const SelfGradient self_c = sed_self_grad(enc, p);

    std::vector<SedGradient> parts(batch.size());
    parallel_for(batch.size(), threads, [&](std::size_t i) { parts[i] = sed_value_grad(*batch[i], enc, p, false); });

    const double inv_n = 1.0 / static_cast<double>(batch.size());
    ObjectiveGradient out{0.0, Matrix(probs.rows, probs.cols)};
    Matrix d_probs(probs.rows, probs.cols);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out.value += unbias(parts[i].value, self_dist[i], self_c.value);
        for (std::size_t e = 0; e < d_probs.data.size(); ++e) d_probs.data[e] += parts[i].d_x2.data[e];
    }
    out.value *= inv_n;
    for (std::size_t e = 0; e < d_probs.data.size(); ++e)
        d_probs.data[e] = d_probs.data[e] * inv_n - 0.5 * self_c.d_x.data[e];

    // Softmax Jacobian, row by row: dz_k = p_k (g_k - <p, g>).
    for (std::size_t i = 0; i < probs.rows; ++i) {
        const auto pr = probs.row(i);
        const auto g = d_probs.row(i);
        double dot = 0.0;
        for (std::size_t k = 0; k < pr.size(); ++k) dot += pr[k] * g[k];
        auto dz = out.d_logits.row(i);
        for (std::size_t k = 0; k < pr.size(); ++k) dz[k] = pr[k] * (g[k] - dot);
    }
    return out;
}

ConsensusOptimizer::ConsensusOptimizer(CentroidLogits init, const OptimizerConfig& cfg)
    : cfg_(cfg), params_(cfg.tau) {
    cfg_.validate();
    reset(std::move(init));
}

void ConsensusOptimizer::reset(CentroidLogits init) {
    centroid_ = std::move(init);
    m_ = Matrix(centroid_.logits.rows, centroid_.logits.cols);
    v_ = m_;
    t_ = 0;
}

double ConsensusOptimizer::step(std::span<const SequenceEncoding> data, std::span<const double> self_dist,
                                std::span<const std::size_t> pool, std::mt19937_64& rng) {
    if (pool.empty()) throw EmptyBatch("cannot take an optimizer step on an empty pool");
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::vector<const SequenceEncoding*> batch(cfg_.batch_size);
    std::vector<double> self(cfg_.batch_size);
    for (std::size_t b = 0; b < cfg_.batch_size; ++b) {
        const std::size_t idx = pool[pick(rng)];
        batch[b] = &data[idx];
        self[b] = self_dist[idx];
    }

    const ObjectiveGradient og = consensus_objective_grad(centroid_, batch, self, params_, cfg_.threads);

    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    auto& z = centroid_.logits.data;
    for (std::size_t e = 0; e < z.size(); ++e) {
        const double g = og.d_logits.data[e];
        m_.data[e] = cfg_.beta1 * m_.data[e] + (1.0 - cfg_.beta1) * g;
        v_.data[e] = cfg_.beta2 * v_.data[e] + (1.0 - cfg_.beta2) * g * g;
        z[e] -= cfg_.learning_rate * (m_.data[e] / bc1) / (std::sqrt(v_.data[e] / bc2) + cfg_.eps_adam);
    }
    return og.value;
}

CentroidLogits centroid_from_member(const SequenceEncoding& member, std::size_t length, double seed_weight) {
    const std::size_t g = member.alphabet_size();
    Matrix m(length, g, 1.0 / static_cast<double>(g));
    for (std::size_t i = 0; i < std::min(length, member.length()); ++i)
        std::copy(member.row(i).begin(), member.row(i).end(), m.row(i).begin());
    return CentroidLogits::from_seed(SequenceEncoding(std::move(m)), seed_weight);
}

CentroidLogits init_centroid(std::span<const SequenceEncoding> data, std::size_t length, double seed_weight,
                             std::mt19937_64& rng) {
    if (data.empty()) throw EmptyDataset("cannot initialize a centroid from an empty dataset");
    std::vector<std::size_t> fitting;
    for (std::size_t i = 0; i < data.size(); ++i)
        if (data[i].length() == length) fitting.push_back(i);
    if (fitting.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
        return centroid_from_member(data[pick(rng)], length, seed_weight);
    }
    std::uniform_int_distribution<std::size_t> pick(0, fitting.size() - 1);
    return centroid_from_member(data[fitting[pick(rng)]], length, seed_weight);
}

std::size_t median_length(std::span<const SequenceEncoding> data) {
    if (data.empty()) throw EmptyDataset("median length of an empty dataset");
    std::vector<std::size_t> lens;
    lens.reserve(data.size());
    for (const auto& x : data) lens.push_back(x.length());
    // Lower median, so the result is always an observed length.
    const auto mid = lens.begin() + static_cast<std::ptrdiff_t>((lens.size() - 1) / 2);
    std::nth_element(lens.begin(), mid, lens.end());
    return *mid;
}

ConsensusResult optimize_consensus(std::span<const SequenceEncoding> data, std::size_t centroid_length,
                                   const OptimizerConfig& cfg, const Alphabet& alphabet) {
    if (data.empty()) throw EmptyDataset("consensus search needs at least one sequence");
    if (centroid_length < 1) throw InvalidArgument("centroid length must be at least 1");
    cfg.validate();
    for (const auto& x : data) detail::check_alphabets(x, data.front());
    if (data.front().alphabet_size() != alphabet.size()) throw AlphabetMismatch("data and alphabet sizes differ");

    const SedParams p(cfg.tau);
    std::vector<double> self(data.size());
    parallel_for(data.size(), cfg.threads, [&](std::size_t i) { self[i] = sed(data[i], data[i], p); });

    std::mt19937_64 rng(cfg.seed);
    ConsensusOptimizer opt(init_centroid(data, centroid_length, cfg.init_seed_weight, rng), cfg);
    std::vector<std::size_t> pool(data.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;

    ConsensusResult out;
    out.objective_trace.reserve(cfg.steps_per_update);
    for (std::size_t s = 0; s < cfg.steps_per_update; ++s)
        out.objective_trace.emplace_back(s, opt.step(data, self, pool, rng));
    out.centroid = opt.centroid().encoding();
    out.consensus = decode_argmax(out.centroid, alphabet);
    return out;
}

}  // namespace softedit
