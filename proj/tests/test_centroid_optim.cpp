#include <cmath>
#include <numeric>

#include "doctest.h"
#include "softedit/centroid_optim.hpp"
#include "softedit/data_io.hpp"
#include "softedit/error.hpp"
#include "support.hpp"

using namespace softedit;

namespace {

const Alphabet kDna = Alphabet::dna();

CentroidLogits logits_of(const SequenceEncoding& x) {
    Matrix m = x.matrix();
    for (double& v : m.data) v = std::log(v);
    return {m};
}

double objective_of(const CentroidLogits& c, std::span<const SequenceEncoding> batch, SedParams p) {
    std::vector<const SequenceEncoding*> ptrs;
    std::vector<double> self;
    for (const auto& x : batch) {
        ptrs.push_back(&x);
        self.push_back(sed(x, x, p));
    }
    return consensus_objective_grad(c, ptrs, self, p).value;
}

}  // namespace

TEST_SUITE("centroid_optim") {

TEST_CASE("softmax rows") {
    Matrix z(2, 3);
    z.data = {0.0, 0.0, 0.0, 1000.0, 0.0, -1000.0};
    const auto p = softmax_rows(z);
    CHECK(p(0, 0) == doctest::Approx(1.0 / 3));
    CHECK(p(1, 0) == doctest::Approx(1.0));
    CHECK(std::isfinite(p(1, 2)));

    const auto seeded = CentroidLogits::from_seed(encode_one_hot("AC", kDna), 0.6);
    const auto enc = seeded.encoding();
    CHECK(enc(0, 0) == doctest::Approx(0.7));
    CHECK(enc(0, 1) == doctest::Approx(0.1));
    CHECK(decode_argmax(enc, kDna) == "AC");
    CHECK_THROWS_AS(CentroidLogits::from_seed(encode_one_hot("AC", kDna), 1.0), InvalidArgument);
}

TEST_CASE("objective worked values") {
    const SedParams p(-1.0);
    std::mt19937_64 rng(71);
    const auto x = testing_support::random_interior(4, 4, rng);
    const std::vector<SequenceEncoding> single{x};
    CHECK(std::abs(consensus_objective(logits_of(x), single, p)) <= 1e-12);

    const auto s = CentroidLogits::from_encoding(encode_one_hot("ACGT", kDna), 1e-9);
    const std::vector<SequenceEncoding> twins{s.encoding(), s.encoding()};
    CHECK(std::abs(consensus_objective(s, twins, p)) <= 1e-12);

    // One-hot "A" as a centroid is the limit of ever sharper logits.
    const std::vector<SequenceEncoding> ac{encode_one_hot("A", kDna), encode_one_hot("C", kDna)};
    const auto sharp = CentroidLogits::from_encoding(encode_one_hot("A", kDna), 1e-13);
    CHECK(consensus_objective(sharp, ac, p) == doctest::Approx(0.515268).epsilon(1e-6));
    CHECK(objective_of(sharp, ac, p) == doctest::Approx(consensus_objective(sharp, ac, p)).epsilon(1e-14));

    CHECK_THROWS_AS(consensus_objective(sharp, std::vector<SequenceEncoding>{}, p), EmptyBatch);
}

TEST_CASE("gradient through the softmax matches finite differences on logits") {
    std::mt19937_64 rng(73);
    const SedParams p(-2.0);
    std::vector<SequenceEncoding> batch;
    for (int i = 0; i < 3; ++i) batch.push_back(testing_support::random_interior(3 + i, 4, rng));
    std::normal_distribution<double> n(0.0, 1.0);
    CentroidLogits c{Matrix(4, 4)};
    for (double& v : c.logits.data) v = n(rng);

    std::vector<const SequenceEncoding*> ptrs;
    std::vector<double> self;
    for (const auto& x : batch) {
        ptrs.push_back(&x);
        self.push_back(sed(x, x, p));
    }
    const auto og = consensus_objective_grad(c, ptrs, self, p);
    CHECK(og.value == doctest::Approx(consensus_objective(c, batch, p)).epsilon(1e-13));

    const double h = 1e-5;
    for (std::size_t e = 0; e < c.logits.data.size(); ++e) {
        CentroidLogits up = c, down = c;
        up.logits.data[e] += h;
        down.logits.data[e] -= h;
        const double fd = (consensus_objective(up, batch, p) - consensus_objective(down, batch, p)) / (2 * h);
        CHECK(std::abs(og.d_logits.data[e] - fd) / std::max(std::abs(fd), 1e-3) <= 1e-4);
    }
    // Each logit row's gradient sums to zero: the softmax ignores row shifts.
    for (std::size_t i = 0; i < 4; ++i) {
        const auto r = og.d_logits.row(i);
        CHECK(std::abs(std::accumulate(r.begin(), r.end(), 0.0)) <= 1e-12);
    }
}

TEST_CASE("row shifts leave the decoded consensus unchanged") {
    std::mt19937_64 rng(79);
    std::normal_distribution<double> n(0.0, 2.0);
    CentroidLogits c{Matrix(6, 4)};
    for (double& v : c.logits.data) v = n(rng);
    const auto before = decode_argmax(c.encoding(), kDna);
    for (std::size_t i = 0; i < 6; ++i)
        for (double& v : c.logits.row(i)) v += 10.0 * static_cast<double>(i) - 25.0;
    CHECK(decode_argmax(c.encoding(), kDna) == before);
}

TEST_CASE("a tiny learning rate barely moves the objective") {
    std::mt19937_64 rng(83);
    const auto ds = gen_noisy(std::vector<std::string>{"ACGTTGCA"}, 20, NoiseSpec{2, {EditKind::substitution}, 5}, kDna);
    const auto data = encode_all(ds.strings, kDna);
    std::vector<double> self;
    for (const auto& x : data) self.push_back(sed(x, x, SedParams{}));
    std::vector<std::size_t> pool(data.size());
    std::iota(pool.begin(), pool.end(), 0);

    for (double lr : {1e-3, 1e-5}) {
        OptimizerConfig cfg;
        cfg.learning_rate = lr;
        cfg.batch_size = data.size();
        const auto init = CentroidLogits::from_seed(encode_one_hot("ACGTAGCA", kDna), 0.5);
        ConsensusOptimizer opt(init, cfg);
        const double before = consensus_objective(init, data, SedParams{});
        std::mt19937_64 r(1);
        opt.step(data, self, pool, r);
        CHECK(opt.steps_taken() == 1);
        const double after = consensus_objective(opt.centroid(), data, SedParams{});
        // An ADAM step moves each logit by about lr; the objective changes at most proportionally.
        CHECK(std::abs(after - before) <= 50 * lr);
    }
}

TEST_CASE("a step reports the objective before its update") {
    const auto data = encode_all(std::vector<std::string>{"ACGT", "AGGT"}, kDna);
    const std::vector<double> self{sed(data[0], data[0], SedParams{}), sed(data[1], data[1], SedParams{})};
    const std::vector<std::size_t> pool{1};
    const auto init = CentroidLogits::from_seed(encode_one_hot("ACGT", kDna), 0.5);
    ConsensusOptimizer opt(init, OptimizerConfig{});
    std::mt19937_64 r(2);
    const std::vector<SequenceEncoding> member{data[1]};
    CHECK(opt.step(data, self, pool, r) == doctest::Approx(consensus_objective(init, member, SedParams{})).epsilon(1e-13));
    const double current = consensus_objective(opt.centroid(), member, SedParams{});
    CHECK(opt.step(data, self, pool, r) == doctest::Approx(current).epsilon(1e-13));
    opt.reset(init);
    CHECK(opt.steps_taken() == 0);
}

TEST_CASE("configuration validation") {
    OptimizerConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    auto bad = cfg;
    bad.learning_rate = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = cfg;
    bad.beta1 = 1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = cfg;
    bad.batch_size = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = cfg;
    bad.tau = 0.5;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("median length and initialization") {
    const std::vector<std::string> s{"A", "ACG", "ACGT", "AC"};
    const auto enc = encode_all(s, kDna);
    CHECK(median_length(enc) == 2);
    CHECK_THROWS_AS(median_length(std::vector<SequenceEncoding>{}), EmptyDataset);

    const auto padded = centroid_from_member(encode_one_hot("AC", kDna), 4, 0.5).encoding();
    CHECK(padded.length() == 4);
    CHECK(padded(3, 0) == doctest::Approx(0.25));
    CHECK(decode_argmax(centroid_from_member(encode_one_hot("GTCA", kDna), 2, 0.5).encoding(), kDna) == "GT");

    std::mt19937_64 rng(3);
    // Only one member has the requested length, so it is the one used.
    CHECK(decode_argmax(init_centroid(enc, 3, 0.5, rng).encoding(), kDna) == "ACG");
}

TEST_CASE("zero-noise data is its own consensus") {
    const std::vector<std::string> copies(50, "ACGTACGTAC");
    const auto data = encode_all(copies, kDna);
    OptimizerConfig cfg;
    cfg.seed = 4;
    const auto res = optimize_consensus(data, 10, cfg, kDna);
    CHECK(res.consensus == "ACGTACGTAC");
    CHECK(res.objective_trace.size() == 200);
    CHECK(decode_argmax(res.centroid, kDna) == res.consensus);
    for (const auto& [step, v] : res.objective_trace) {
        CHECK(std::isfinite(v));
        CHECK(v >= -1e-6);
    }
    CHECK_THROWS_AS(optimize_consensus(std::vector<SequenceEncoding>{}, 10, cfg, kDna), EmptyDataset);
    CHECK_THROWS_AS(optimize_consensus(data, 0, cfg, kDna), InvalidArgument);
}

TEST_CASE("noisy variants of one basis") {
    int close = 0;
    for (std::uint64_t run = 0; run < 10; ++run) {
        const auto basis = gen_bases(1, 10, 0, kDna, 100 + run);
        NoiseSpec noise;
        noise.rate = 2;
        noise.seed = 200 + run;
        const auto ds = gen_noisy(basis, 500, noise, kDna);
        const auto data = encode_all(ds.strings, kDna);
        OptimizerConfig cfg;
        cfg.seed = 300 + run;
        const auto res = optimize_consensus(data, 10, cfg, kDna);
        if (levenshtein(res.consensus, basis[0]) <= 1) ++close;

        if (run == 0) {
            // Mean of consecutive 100-step windows does not increase.
            double first = 0, second = 0;
            for (std::size_t s = 0; s < 100; ++s) first += res.objective_trace[s].second;
            for (std::size_t s = 100; s < 200; ++s) second += res.objective_trace[s].second;
            CHECK(second <= first);
        }
    }
    CHECK(close >= 9);
}

}
