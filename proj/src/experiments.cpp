#include "softedit/experiments.hpp"

#include <random>
#include <string>

#include "softedit/edit_metric.hpp"
#include "softedit/error.hpp"
#include "softedit/parallel.hpp"

namespace softedit {

std::vector<std::uint64_t> derive_seeds(std::uint64_t seed, std::size_t count) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    std::vector<std::uint32_t> words(2 * count);
    seq.generate(words.begin(), words.end());
    std::vector<std::uint64_t> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = (std::uint64_t{words[2 * i]} << 32) | words[2 * i + 1];
    return out;
}

std::vector<RSquaredRow> rsquared_study(std::size_t n_pairs, std::span<const double> taus, std::size_t min_len,
                                        std::size_t max_len, const Alphabet& a, std::uint64_t seed,
                                        unsigned threads) {
    if (n_pairs < 2) throw DegenerateInput("R^2 needs at least 2 pairs");
    if (min_len < 1) throw InvalidArgument("minimum length must be at least 1");
    std::vector<SedParams> params;
    for (double t : taus) params.emplace_back(t);

    const auto strings = random_strings(2 * n_pairs, min_len, max_len, a, seed);
    const auto enc = encode_all(strings, a);
    std::vector<double> lev(n_pairs);
    // cross, self1, self2 per (tau, pair)
    std::vector<double> cross(params.size() * n_pairs), s1(cross.size()), s2(cross.size());
    parallel_for(n_pairs, threads, [&](std::size_t i) {
        const auto& x = enc[2 * i];
        const auto& y = enc[2 * i + 1];
        lev[i] = static_cast<double>(levenshtein(strings[2 * i], strings[2 * i + 1]));
        for (std::size_t t = 0; t < params.size(); ++t) {
            const std::size_t slot = t * n_pairs + i;
            cross[slot] = sed(x, y, params[t]);
            s1[slot] = sed(x, x, params[t]);
            s2[slot] = sed(y, y, params[t]);
        }
    });

    std::vector<RSquaredRow> rows;
    for (std::size_t t = 0; t < params.size(); ++t) {
        std::vector<std::pair<double, double>> unbiased(n_pairs), raw(n_pairs);
        for (std::size_t i = 0; i < n_pairs; ++i) {
            const std::size_t slot = t * n_pairs + i;
            unbiased[i] = {unbias(cross[slot], s1[slot], s2[slot]), lev[i]};
            raw[i] = {cross[slot], lev[i]};
        }
        rows.push_back({params[t].tau, r_squared(unbiased, RSquaredMode::identity),
                        r_squared(raw, RSquaredMode::affine)});
    }
    return rows;
}

SyntheticDataset make_synthetic(const SyntheticSpec& spec, const Alphabet& a, std::uint64_t seed) {
    const auto seeds = derive_seeds(seed, 2);
    const auto bases = gen_bases(spec.k, spec.length, spec.min_dist, a, seeds[0]);
    NoiseSpec noise;
    noise.rate = spec.noise_rate;
    noise.seed = seeds[1];
    return gen_noisy(bases, spec.per_base, noise, a);
}

SyntheticOutcome run_synthetic(const SyntheticSpec& spec, KMeansConfig cfg, const Alphabet& a, std::uint64_t seed) {
    SyntheticOutcome out;
    out.data = make_synthetic(spec, a, seed);
    cfg.k = spec.k;
    cfg.seed = derive_seeds(seed, 3)[2];
    const auto enc = encode_all(out.data.strings, a);
    out.report = kmeans(enc, cfg, a);
    out.accuracy = clustering_accuracy(out.report.labels, out.data.true_labels, spec.k);
    out.quality = consensus_quality(out.report.consensuses, out.data.bases);
    return out;
}

}  // namespace softedit
