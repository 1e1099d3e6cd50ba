#include "softedit/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <map>

#include "softedit/error.hpp"
#include "softedit/parallel.hpp"

namespace softedit {

void KMeansConfig::validate() const {
    if (k < 1) throw InvalidArgument("k must be at least 1");
    if (max_rounds < 1) throw InvalidArgument("max_rounds must be at least 1");
    if (stable_rounds < 1) throw InvalidArgument("stable_rounds must be at least 1");
    if (restarts < 1) throw InvalidArgument("restarts must be at least 1");
    if (assign_batch < k) throw InvalidArgument("assign_batch must be at least k");
    if (centroid_length && *centroid_length < 1) throw InvalidArgument("centroid length must be at least 1");
    opt.validate();
}

Assignment assign_encoded(std::span<const SequenceEncoding* const> batch, std::span<const double> self_batch,
                          std::span<const SequenceEncoding> centroids, std::span<const double> self_centroids,
                          SedParams p, unsigned threads) {
    if (centroids.empty()) throw InvalidArgument("assignment needs at least one centroid");
    Assignment out{std::vector<std::size_t>(batch.size(), 0), std::vector<double>(batch.size(), 0.0)};
    parallel_for(batch.size(), threads, [&](std::size_t i) {
        std::size_t best = 0;
        double best_d = 0.0;
        for (std::size_t c = 0; c < centroids.size(); ++c) {
            const double d = unbias(sed(*batch[i], centroids[c], p), self_batch[i], self_centroids[c]);
            if (c == 0 || d < best_d) {
                best = c;
                best_d = d;
            }
        }
        out.labels[i] = best;
        out.distances[i] = best_d;
    });
    return out;
}

namespace {

constexpr std::size_t kSeedSample = 4096;

std::vector<double> self_distances(std::span<const SequenceEncoding> xs, SedParams p, unsigned threads) {
    std::vector<double> out(xs.size());
    parallel_for(xs.size(), threads, [&](std::size_t i) { out[i] = sed(xs[i], xs[i], p); });
    return out;
}

std::vector<const SequenceEncoding*> pointers(std::span<const SequenceEncoding> xs) {
    std::vector<const SequenceEncoding*> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = &xs[i];
    return out;
}

double mean(std::span<const double> v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}


// Greedy k-means++ under SED0 on a bounded sample of the data. The sample is
// collapsed to distinct strings carrying their multiplicity, so repeated
// strings weigh in as they would in the full data. Members of the centroid
// length are preferred. Each new seed is the best of a few D^2-sampled
// candidates by total sample potential.
std::vector<std::size_t> choose_seeds(std::span<const SequenceEncoding> data, std::span<const double> self_data,
                                      std::span<const std::size_t> order, std::size_t length, std::size_t k,
                                      SedParams p, const Alphabet& alphabet, std::mt19937_64& rng,
                                      unsigned threads) {
    const std::size_t sample = std::min(order.size(), kSeedSample);
    std::map<std::string, std::size_t> slot;
    std::vector<std::size_t> distinct;
    std::vector<double> count;
    for (std::size_t s = 0; s < sample; ++s) {
        const std::size_t idx = order[s];
        const auto [it, fresh] = slot.emplace(decode_argmax(data[idx], alphabet), distinct.size());
        if (fresh) {
            distinct.push_back(idx);
            count.push_back(0.0);
        }
        count[it->second] += 1.0;
    }
    std::vector<std::size_t> pool;
    std::vector<double> mass;
    for (bool exact_only : {true, false}) {
        for (std::size_t d = 0; d < distinct.size(); ++d)
            if ((data[distinct[d]].length() == length) == exact_only) {
                pool.push_back(distinct[d]);
                mass.push_back(count[d]);
            }
        if (pool.size() >= k) break;
    }
    // Duplicated strings only when there are fewer than k distinct ones.
    for (std::size_t idx : order) {
        if (pool.size() >= k) break;
        if (std::find(pool.begin(), pool.end(), idx) == pool.end()) {
            pool.push_back(idx);
            mass.push_back(1.0);
        }
    }
    const std::size_t m = pool.size();

    auto distances_to = [&](std::size_t seed) {
        std::vector<double> d(m);
        parallel_for(m, threads, [&](std::size_t i) {
            d[i] = std::max(0.0, unbias(sed(data[pool[i]], data[seed], p), self_data[pool[i]], self_data[seed]));
        });
        return d;
    };

    std::vector<std::size_t> seeds;
    std::vector<bool> used(m, false);
    std::discrete_distribution<std::size_t> first(mass.begin(), mass.end());
    const std::size_t f = first(rng);
    used[f] = true;
    seeds.push_back(pool[f]);
    std::vector<double> nearest = distances_to(pool[f]);

    const std::size_t trials = 2 + static_cast<std::size_t>(std::log(static_cast<double>(k)));
    while (seeds.size() < k) {
        std::vector<double> weight(m);
        for (std::size_t i = 0; i < m; ++i) weight[i] = used[i] ? 0.0 : mass[i] * nearest[i] * nearest[i];
        const bool degenerate = std::all_of(weight.begin(), weight.end(), [](double w) { return w == 0.0; });
        if (degenerate)
            for (std::size_t i = 0; i < m; ++i) weight[i] = used[i] ? 0.0 : mass[i];
        std::discrete_distribution<std::size_t> draw(weight.begin(), weight.end());

        std::size_t best = m;
        double best_potential = 0.0;
        std::vector<double> best_nearest;
        for (std::size_t t = 0; t < trials; ++t) {
            const std::size_t cand = draw(rng);
            auto d = distances_to(pool[cand]);
            double potential = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                d[i] = std::min(d[i], nearest[i]);
                potential += mass[i] * d[i] * d[i];
            }
            if (best == m || potential < best_potential) {
                best = cand;
                best_potential = potential;
                best_nearest = std::move(d);
            }
        }
        used[best] = true;
        seeds.push_back(pool[best]);
        nearest = std::move(best_nearest);
    }
    return seeds;
}

}  // namespace

std::vector<std::size_t> assign(std::span<const SequenceEncoding> batch, std::span<const CentroidLogits> centroids,
                                SedParams p, unsigned threads) {
    std::vector<SequenceEncoding> enc;
    enc.reserve(centroids.size());
    for (const auto& c : centroids) enc.push_back(c.encoding());
    const auto self_b = self_distances(batch, p, threads);
    const auto self_c = self_distances(enc, p, threads);
    return assign_encoded(pointers(batch), self_b, enc, self_c, p, threads).labels;
}

namespace {

// One seeded k-means run; `length` and the member self-distances are shared
// across restarts.
ClusterReport kmeans_once(std::span<const SequenceEncoding> data, const KMeansConfig& cfg, const Alphabet& alphabet,
                          std::span<const double> self_data, std::size_t length, std::uint64_t seed) {
    const SedParams p(cfg.opt.tau);
    const std::size_t n = data.size(), k = cfg.k;
    const auto all_ptrs = pointers(data);

    std::mt19937_64 rng(seed);
    // The optimizer parallelizes across clusters here, not within a batch.
    OptimizerConfig opt_cfg = cfg.opt;
    opt_cfg.threads = 1;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const auto seeds = choose_seeds(data, self_data, order, length, k, p, alphabet, rng, cfg.threads);
    std::vector<ConsensusOptimizer> opts;
    opts.reserve(k);
    for (std::size_t idx : seeds) opts.emplace_back(centroid_from_member(data[idx], length, opt_cfg.init_seed_weight), opt_cfg);

    auto encodings = [&] {
        std::vector<SequenceEncoding> enc;
        enc.reserve(k);
        for (const auto& o : opts) enc.push_back(o.centroid().encoding());
        return enc;
    };
    auto decoded = [&](std::span<const SequenceEncoding> enc) {
        std::vector<std::string> out;
        for (const auto& e : enc) out.push_back(decode_argmax(e, alphabet));
        return out;
    };

    ClusterReport report;
    report.centroid_length = length;
    {
        const auto enc = encodings();
        const auto full = assign_encoded(all_ptrs, self_data, enc, self_distances(enc, p, cfg.threads), p, cfg.threads);
        report.initial_objective = mean(full.distances);
    }

    std::vector<std::string> previous = decoded(encodings());
    std::size_t stable = 0;
    const std::size_t batch_n = std::min(cfg.assign_batch, n);
    for (std::size_t round = 0; round < cfg.max_rounds; ++round) {
        std::vector<std::size_t> batch;
        batch.reserve(batch_n);
        std::sample(order.begin(), order.end(), std::back_inserter(batch), static_cast<std::ptrdiff_t>(batch_n), rng);

        std::vector<const SequenceEncoding*> batch_ptrs(batch_n);
        std::vector<double> batch_self(batch_n);
        for (std::size_t b = 0; b < batch_n; ++b) {
            batch_ptrs[b] = &data[batch[b]];
            batch_self[b] = self_data[batch[b]];
        }
        const auto enc = encodings();
        Assignment a = assign_encoded(batch_ptrs, batch_self, enc, self_distances(enc, p, cfg.threads), p, cfg.threads);
        report.objective_trace.push_back(mean(a.distances));

        std::vector<std::vector<std::size_t>> members(k);
        for (std::size_t b = 0; b < batch_n; ++b) members[a.labels[b]].push_back(batch[b]);

        // Reseed empty clusters from members of clusters that can spare one.
        for (std::size_t c = 0; c < k; ++c) {
            if (!members[c].empty()) continue;
            std::vector<std::size_t> donors;
            for (std::size_t d = 0; d < k; ++d)
                if (members[d].size() >= 2) donors.push_back(d);
            std::uniform_int_distribution<std::size_t> pick_donor(0, donors.size() - 1);
            auto& from = members[donors[pick_donor(rng)]];
            std::uniform_int_distribution<std::size_t> pick_member(0, from.size() - 1);
            const std::size_t pos = pick_member(rng);
            const std::size_t idx = from[pos];
            from.erase(from.begin() + static_cast<std::ptrdiff_t>(pos));
            members[c].push_back(idx);
            opts[c].reset(centroid_from_member(data[idx], length, opt_cfg.init_seed_weight));
        }

        std::vector<std::uint64_t> cluster_seeds(k);
        for (auto& s : cluster_seeds) s = rng();
        parallel_for(k, cfg.threads, [&](std::size_t c) {
            std::mt19937_64 local(cluster_seeds[c]);
            for (std::size_t s = 0; s < opt_cfg.steps_per_update; ++s) opts[c].step(data, self_data, members[c], local);
        });

        ++report.rounds_run;
        auto current = decoded(encodings());
        stable = (current == previous) ? stable + 1 : 0;
        previous = std::move(current);
        if (stable >= cfg.stable_rounds) break;
    }

    report.centroids = encodings();
    report.consensuses = decoded(report.centroids);
    const auto full = assign_encoded(all_ptrs, self_data, report.centroids,
                                     self_distances(report.centroids, p, cfg.threads), p, cfg.threads);
    report.labels = full.labels;
    report.final_objective = mean(full.distances);
    return report;
}

}  // namespace

ClusterReport kmeans(std::span<const SequenceEncoding> data, const KMeansConfig& cfg, const Alphabet& alphabet) {
    cfg.validate();
    if (data.size() < cfg.k)
        throw TooFewSequences("k-means needs at least k=" + std::to_string(cfg.k) + " sequences");
    for (const auto& x : data) detail::check_alphabets(x, data.front());
    if (data.front().alphabet_size() != alphabet.size()) throw AlphabetMismatch("data and alphabet sizes differ");

    const std::size_t length = cfg.centroid_length.value_or(median_length(data));
    const auto self_data = self_distances(data, SedParams(cfg.opt.tau), cfg.threads);

    std::mt19937_64 seeder(cfg.seed);
    ClusterReport best;
    std::vector<double> finals;
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
        ClusterReport rep = kmeans_once(data, cfg, alphabet, self_data, length, seeder());
        finals.push_back(rep.final_objective);
        // Strict comparison: ties keep the earlier restart.
        if (r == 0 || rep.final_objective < best.final_objective) {
            best = std::move(rep);
            best.restart = r;
        }
    }
    best.restart_objectives = std::move(finals);
    return best;
}

}  // namespace softedit
