#include "softedit/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "softedit/alphabet.hpp"
#include "softedit/centroid_optim.hpp"
#include "softedit/data_io.hpp"
#include "softedit/edit_metric.hpp"
#include "softedit/error.hpp"
#include "softedit/eval_metrics.hpp"
#include "softedit/experiments.hpp"
#include "softedit/kmeans.hpp"
#include "softedit/parallel.hpp"

namespace softedit {
namespace {

using nlohmann::json;

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s(buf);
    if (s == "-0.000000") s.erase(0, 1);
    return s;
}

unsigned parse_threads(const std::string& text) {
    if (text == "auto") return hardware_threads();
    unsigned n = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec != std::errc() || ptr != text.data() + text.size() || n == 0)
        throw InvalidArgument("--threads expects a positive integer or 'auto', got '" + text + "'");
    return n;
}

SeqFormat parse_format(const std::string& name, const std::filesystem::path& path) {
    if (name == "fasta") return SeqFormat::fasta;
    if (name == "lines") return SeqFormat::lines;
    // auto: FASTA if the first non-blank line is a header.
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        return line[pos] == '>' ? SeqFormat::fasta : SeqFormat::lines;
    }
    return SeqFormat::lines;
}

// Options shared by subcommands that read or produce sequences.
struct Common {
    std::string threads = "auto";
    std::string alphabet = "dna";
    bool infer_alphabet = false;
    std::uint64_t seed = 0;
    double tau = SedParams::kDefaultTau;

    unsigned thread_count() const { return parse_threads(threads); }
    void check_tau() const { SedParams{tau}; }

    Alphabet resolve(std::span<const std::string> data) const {
        if (infer_alphabet) return Alphabet::infer(data);
        if (auto preset = Alphabet::preset(alphabet)) return *preset;
        return Alphabet(alphabet);
    }
};

void add_common(CLI::App* cmd, Common& c, bool with_tau) {
    cmd->add_option("--threads", c.threads, "Worker threads: a positive integer or 'auto'")
        ->envname(kThreadsEnv)
        ->capture_default_str();
    cmd->add_option("--alphabet", c.alphabet, "'dna', 'protein', or the literal symbol set")->capture_default_str();
    cmd->add_flag("--infer-alphabet", c.infer_alphabet, "Use the sorted set of symbols found in the input");
    cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    if (with_tau) cmd->add_option("--tau", c.tau, "Softmin temperature (negative)")->capture_default_str();
}

struct OptFlags {
    double lr = OptimizerConfig{}.learning_rate;
    std::size_t steps = OptimizerConfig{}.steps_per_update;
    std::size_t batch = OptimizerConfig{}.batch_size;
    double seed_weight = OptimizerConfig{}.init_seed_weight;

    OptimizerConfig config(const Common& c) const {
        OptimizerConfig cfg;
        cfg.learning_rate = lr;
        cfg.steps_per_update = steps;
        cfg.batch_size = batch;
        cfg.init_seed_weight = seed_weight;
        cfg.tau = c.tau;
        cfg.seed = c.seed;
        cfg.threads = c.thread_count();
        cfg.validate();
        return cfg;
    }
    json echo() const {
        return {{"learning_rate", lr}, {"steps_per_update", steps}, {"batch_size", batch}, {"init_seed_weight", seed_weight}};
    }
};

void add_opt_flags(CLI::App* cmd, OptFlags& o) {
    cmd->add_option("--lr", o.lr, "ADAM learning rate")->capture_default_str();
    cmd->add_option("--steps", o.steps, "ADAM steps per centroid update")->capture_default_str();
    cmd->add_option("--batch", o.batch, "Sequences per ADAM minibatch")->capture_default_str();
    cmd->add_option("--seed-weight", o.seed_weight, "Weight of the seeding member in an initial centroid")
        ->capture_default_str();
}

std::vector<std::string> dedupe(const std::vector<std::string>& xs) {
    std::vector<std::string> out;
    std::map<std::string, bool> seen;
    for (const auto& x : xs)
        if (seen.emplace(x, true).second) out.push_back(x);
    return out;
}

std::vector<std::pair<std::string, std::string>> read_pairs(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::vector<std::string> f;
        for (std::string w; fields >> w;) f.push_back(w);
        if (f.empty() || f.front().front() == '#') continue;
        if (f.size() != 2) throw ParseError(line_no, "expected two sequences separated by whitespace");
        pairs.emplace_back(f[0], f[1]);
    }
    return pairs;
}

SequenceSet load(const std::string& path, const std::string& format) {
    return read_sequences(path, parse_format(format, path));
}

// ---- dist -------------------------------------------------------------------

struct DistArgs {
    Common c;
    std::vector<std::string> seqs;
    std::string pairs, in, format = "auto", matrix;
    bool unbiased = false, with_ed = false;
};

int cmd_dist(const DistArgs& a, std::ostream& out) {
    a.c.check_tau();
    const unsigned threads = a.c.thread_count();
    const int sources = !a.seqs.empty() + !a.pairs.empty() + !a.in.empty();
    if (sources != 1) throw InvalidArgument("dist takes exactly one of: two sequences, --pairs, --in");
    if (!a.seqs.empty() && a.seqs.size() != 2) throw InvalidArgument("dist takes exactly two sequences");
    if (!a.in.empty() && a.matrix.empty()) throw InvalidArgument("--in is only used with --matrix");
    const SedParams p(a.c.tau);

    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<std::string> names, flat;
    if (!a.seqs.empty()) {
        pairs.emplace_back(a.seqs[0], a.seqs[1]);
    } else if (!a.pairs.empty()) {
        pairs = read_pairs(a.pairs);
        if (pairs.empty()) throw EmptyDataset("no pairs in " + a.pairs);
    } else {
        auto set = load(a.in, a.format);
        if (set.size() == 0) throw EmptyDataset("no sequences in " + a.in);
        names = std::move(set.names);
        flat = std::move(set.sequences);
    }
    if (flat.empty())
        for (const auto& [x, y] : pairs) {
            flat.push_back(x);
            flat.push_back(y);
        }
    const Alphabet alphabet = a.c.resolve(flat);
    if (!names.empty()) validate_sequences({names, flat}, alphabet);

    if (!a.matrix.empty()) {
        const auto seqs = a.in.empty() ? dedupe(flat) : flat;
        const auto enc = encode_all(seqs, alphabet);
        write_matrix_csv(a.matrix, distance_matrix(enc, p, a.unbiased, threads));
        out << "matrix " << seqs.size() << 'x' << seqs.size() << " written to " << a.matrix << '\n';
        return 0;
    }

    std::vector<double> values(pairs.size());
    std::vector<SequenceEncoding> enc1, enc2;
    for (const auto& [x, y] : pairs) {
        enc1.push_back(encode_one_hot(x, alphabet));
        enc2.push_back(encode_one_hot(y, alphabet));
    }
    parallel_for(pairs.size(), threads, [&](std::size_t i) {
        values[i] = a.unbiased ? sed_unbiased(enc1[i], enc2[i], p) : sed(enc1[i], enc2[i], p);
    });
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        out << fixed6(values[i]);
        if (a.with_ed) out << '\t' << levenshtein(pairs[i].first, pairs[i].second);
        out << '\n';
    }
    return 0;
}

// ---- gen --------------------------------------------------------------------

struct GenArgs {
    Common c;
    SyntheticSpec spec;
    std::string out_dir;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
    const Alphabet alphabet = a.c.resolve({});
    const auto ds = make_synthetic(a.spec, alphabet, a.c.seed);

    std::filesystem::create_directories(a.out_dir);
    const std::filesystem::path dir(a.out_dir);
    std::vector<std::string> names, base_names;
    for (std::size_t i = 0; i < ds.strings.size(); ++i) names.push_back("seq_" + std::to_string(i));
    for (std::size_t b = 0; b < ds.bases.size(); ++b) base_names.push_back("base_" + std::to_string(b));
    write_fasta(dir / "sequences.fasta", names, ds.strings);
    write_fasta(dir / "bases.fasta", base_names, ds.bases);
    write_labels(dir / "labels.tsv", names, ds.true_labels);

    std::vector<std::size_t> counts(ds.bases.size(), 0);
    for (std::size_t l : ds.true_labels) ++counts[l];
    const json summary = {
        {"config",
         {{"k", a.spec.k}, {"length", a.spec.length}, {"min_dist", a.spec.min_dist}, {"per_base", a.spec.per_base},
          {"noise_rate", a.spec.noise_rate}, {"alphabet", alphabet.symbols()}, {"seed", a.c.seed}}},
        {"sequences", ds.strings.size()},
        {"label_counts", counts},
        {"bases", ds.bases}};
    write_text_file(dir / "summary.json", summary.dump(2) + "\n");

    out << "sequences " << ds.strings.size() << '\n';
    for (std::size_t b = 0; b < ds.bases.size(); ++b)
        out << "base_" << b << '\t' << ds.bases[b] << '\t' << counts[b] << '\n';
    return 0;
}

// ---- consensus --------------------------------------------------------------

struct ConsensusArgs {
    Common c;
    OptFlags opt;
    std::string in, format = "auto", out_dir;
    std::size_t length = 0;
};

int cmd_consensus(const ConsensusArgs& a, std::ostream& out) {
    a.c.check_tau();
    const OptimizerConfig cfg = a.opt.config(a.c);
    const auto set = load(a.in, a.format);
    if (set.size() == 0) throw EmptyDataset("no sequences in " + a.in);
    const Alphabet alphabet = a.c.resolve(set.sequences);
    validate_sequences(set, alphabet);
    const auto enc = encode_all(set.sequences, alphabet);
    const std::size_t length = a.length ? a.length : median_length(enc);

    const auto res = optimize_consensus(enc, length, cfg, alphabet);
    const SedParams p(cfg.tau);
    const double self_c = sed(res.centroid, res.centroid, p);
    std::vector<double> d(enc.size());
    parallel_for(enc.size(), cfg.threads,
                 [&](std::size_t i) { d[i] = unbias(sed(enc[i], res.centroid, p), sed(enc[i], enc[i], p), self_c); });
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= static_cast<double>(d.size());

    out << res.consensus << '\n';
    out << "length\t" << length << '\n';
    out << "mean_sed0\t" << fixed6(mean) << '\n';

    if (!a.out_dir.empty()) {
        std::filesystem::create_directories(a.out_dir);
        const std::filesystem::path dir(a.out_dir);
        write_fasta(dir / "consensus.fasta", std::vector<std::string>{"consensus"}, std::vector{res.consensus});
        json trace = json::array();
        for (const auto& [step, v] : res.objective_trace) trace.push_back({step, v});
        json cfg_echo = a.opt.echo();
        cfg_echo.update({{"tau", cfg.tau}, {"length", length}, {"seed", a.c.seed}, {"alphabet", alphabet.symbols()}});
        const json summary = {{"config", cfg_echo},
                              {"sequences", enc.size()},
                              {"consensus", res.consensus},
                              {"mean_sed0", mean},
                              {"objective_trace", trace}};
        write_text_file(dir / "summary.json", summary.dump(2) + "\n");
    }
    return 0;
}

// ---- cluster ----------------------------------------------------------------

struct ClusterArgs {
    Common c;
    OptFlags opt;
    KMeansConfig km;
    std::string in, format = "auto", out_dir, truth, bases;
    std::size_t length = 0;
    bool matrix = false;
};

int cmd_cluster(const ClusterArgs& a, std::ostream& out) {
    a.c.check_tau();
    KMeansConfig cfg = a.km;
    cfg.opt = a.opt.config(a.c);
    cfg.seed = a.c.seed;
    cfg.threads = a.c.thread_count();
    if (a.length) cfg.centroid_length = a.length;
    cfg.validate();

    const auto set = load(a.in, a.format);
    if (set.size() == 0) throw EmptyDataset("no sequences in " + a.in);
    const Alphabet alphabet = a.c.resolve(set.sequences);
    validate_sequences(set, alphabet);
    std::optional<LabelTable> truth;
    if (!a.truth.empty()) {
        truth = read_labels(a.truth);
        if (truth->labels.size() != set.size())
            throw LengthMismatch("truth has " + std::to_string(truth->labels.size()) + " labels for " +
                                 std::to_string(set.size()) + " sequences");
        for (std::size_t l : truth->labels)
            if (l >= cfg.k) throw InvalidArgument("truth label " + std::to_string(l) + " is not below k");
    }
    std::optional<SequenceSet> bases;
    if (!a.bases.empty()) {
        bases = load(a.bases, "auto");
        if (bases->size() != cfg.k)
            throw CountMismatch("expected " + std::to_string(cfg.k) + " bases, found " + std::to_string(bases->size()));
    }

    const auto enc = encode_all(set.sequences, alphabet);
    const ClusterReport report = kmeans(enc, cfg, alphabet);

    json metrics = json::object();
    out << "rounds\t" << report.rounds_run << '\n';
    out << "centroid_length\t" << report.centroid_length << '\n';
    for (std::size_t c = 0; c < report.consensuses.size(); ++c)
        out << "centroid_" << c << '\t' << report.consensuses[c] << '\n';
    out << "objective\t" << fixed6(report.final_objective) << '\n';
    if (truth) {
        const double acc = clustering_accuracy(report.labels, truth->labels, cfg.k);
        metrics["accuracy"] = acc;
        out << "accuracy\t" << fixed6(acc) << '\n';
    }
    if (bases) {
        const auto q = consensus_quality(report.consensuses, bases->sequences);
        metrics["delta"] = q.delta;
        metrics["epsilon"] = q.epsilon;
        out << "delta\t" << fixed6(q.delta) << '\n' << "epsilon\t" << fixed6(q.epsilon) << '\n';
    }

    std::optional<Matrix> dist;
    if (a.matrix) {
        // Row per sequence: SED0 to every centroid.
        const SedParams p(cfg.opt.tau);
        dist.emplace(enc.size(), cfg.k);
        std::vector<double> self_c(cfg.k);
        for (std::size_t c = 0; c < cfg.k; ++c) self_c[c] = sed(report.centroids[c], report.centroids[c], p);
        parallel_for(enc.size(), cfg.threads, [&](std::size_t i) {
            const double self_x = sed(enc[i], enc[i], p);
            for (std::size_t c = 0; c < cfg.k; ++c)
                (*dist)(i, c) = unbias(sed(enc[i], report.centroids[c], p), self_x, self_c[c]);
        });
    }

    json cfg_echo = a.opt.echo();
    cfg_echo.update({{"k", cfg.k},
                     {"tau", cfg.opt.tau},
                     {"centroid_length", report.centroid_length},
                     {"max_rounds", cfg.max_rounds},
                     {"stable_rounds", cfg.stable_rounds},
                     {"assign_batch", cfg.assign_batch},
                     {"restarts", cfg.restarts},
                     {"seed", a.c.seed},
                     {"alphabet", alphabet.symbols()}});
    const json summary = {{"config", cfg_echo}, {"sequences", enc.size()}, {"metrics", metrics}};
    write_report(report, set.names, a.out_dir, summary, dist ? &*dist : nullptr);
    return 0;
}

// ---- table1 -----------------------------------------------------------------

struct Table1Args {
    Common c;
    std::size_t n_pairs = 10000, min_len = 1, max_len = 20;
    std::vector<double> taus{-1.0, -2.0, -3.0, -4.0};
};

int cmd_table1(const Table1Args& a, std::ostream& out) {
    for (double t : a.taus) SedParams{t};
    const unsigned threads = a.c.thread_count();
    if (a.n_pairs < 2) throw DegenerateInput("--n-pairs must be at least 2 for R^2 to be defined");
    const Alphabet alphabet = a.c.resolve({});
    const auto rows = rsquared_study(a.n_pairs, a.taus, a.min_len, a.max_len, alphabet, a.c.seed, threads);
    out << "tau\tr2\tr2_affine\n";
    for (const auto& r : rows) out << fixed6(r.tau) << '\t' << fixed6(r.r2) << '\t' << fixed6(r.r2_affine) << '\n';
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Soft edit distance: distances, consensus search and clustering of symbol sequences", "softedit"};
    app.require_subcommand(1);

    DistArgs dist;
    auto* d = app.add_subcommand("dist", "SED between sequence pairs, or a pairwise matrix");
    add_common(d, dist.c, true);
    d->add_option("sequences", dist.seqs, "Two sequences");
    d->add_option("--pairs", dist.pairs, "File with two whitespace-separated sequences per line");
    d->add_option("--in", dist.in, "Sequence file for --matrix");
    d->add_option("--format", dist.format, "Input format")->check(CLI::IsMember({"auto", "fasta", "lines"}));
    d->add_option("--matrix", dist.matrix, "Write the pairwise matrix to this CSV file");
    d->add_flag("--unbiased", dist.unbiased, "Report SED0 (zero self-distance)");
    d->add_flag("--with-ed", dist.with_ed, "Also print the Levenshtein distance");

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Generate noisy variants of random basis strings");
    add_common(g, gen.c, false);
    g->add_option("--k", gen.spec.k, "Number of basis strings")->capture_default_str();
    g->add_option("--length", gen.spec.length, "Basis length")->capture_default_str();
    g->add_option("--min-dist", gen.spec.min_dist, "Minimum pairwise basis edit distance")->capture_default_str();
    g->add_option("--per-base", gen.spec.per_base, "Variants per basis")->capture_default_str();
    g->add_option("--noise-rate", gen.spec.noise_rate, "Maximum edits per variant")->capture_default_str();
    g->add_option("--out", gen.out_dir, "Output directory")->required();

    ConsensusArgs cons;
    auto* c = app.add_subcommand("consensus", "Consensus string of a sequence set");
    add_common(c, cons.c, true);
    add_opt_flags(c, cons.opt);
    c->add_option("--in", cons.in, "Sequence file")->required();
    c->add_option("--format", cons.format, "Input format")->check(CLI::IsMember({"auto", "fasta", "lines"}));
    c->add_option("--length", cons.length, "Consensus length (default: median input length)");
    c->add_option("--out", cons.out_dir, "Directory for consensus.fasta and summary.json");

    ClusterArgs cl;
    auto* k = app.add_subcommand("cluster", "Minibatch k-means under SED0");
    add_common(k, cl.c, true);
    add_opt_flags(k, cl.opt);
    k->add_option("--in", cl.in, "Sequence file")->required();
    k->add_option("--format", cl.format, "Input format")->check(CLI::IsMember({"auto", "fasta", "lines"}));
    k->add_option("--k", cl.km.k, "Number of clusters")->capture_default_str();
    k->add_option("--length", cl.length, "Centroid length (default: median input length)");
    k->add_option("--max-rounds", cl.km.max_rounds, "Round limit")->capture_default_str();
    k->add_option("--stable-rounds", cl.km.stable_rounds, "Stop after this many unchanged rounds")
        ->capture_default_str();
    k->add_option("--assign-batch", cl.km.assign_batch, "Sequences assigned per round")->capture_default_str();
    k->add_option("--restarts", cl.km.restarts, "Independent runs; the lowest objective wins")->capture_default_str();
    k->add_option("--truth", cl.truth, "labels.tsv with true labels; prints accuracy");
    k->add_option("--bases", cl.bases, "True basis strings; prints delta and epsilon");
    k->add_flag("--matrix", cl.matrix, "Also write matrix.csv of SED0 to every centroid");
    k->add_option("--out", cl.out_dir, "Output directory")->required();

    Table1Args t1;
    auto* t = app.add_subcommand("table1", "R^2 between SED and Levenshtein on random pairs");
    add_common(t, t1.c, false);
    t->add_option("--n-pairs", t1.n_pairs, "Number of random pairs")->capture_default_str();
    t->add_option("--taus", t1.taus, "Temperatures")->delimiter(',')->capture_default_str();
    t->add_option("--min-len", t1.min_len, "Minimum string length")->capture_default_str();
    t->add_option("--max-len", t1.max_len, "Maximum string length")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (d->parsed()) return cmd_dist(dist, out);
        if (g->parsed()) return cmd_gen(gen, out);
        if (c->parsed()) return cmd_consensus(cons, out);
        if (k->parsed()) return cmd_cluster(cl, out);
        if (t->parsed()) return cmd_table1(t1, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace softedit
