#include "softedit/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

#include "softedit/edit_metric.hpp"
#include "softedit/error.hpp"

namespace softedit {
namespace {

char random_symbol(const Alphabet& a, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, a.size() - 1);
    return a.symbol(pick(rng));
}

std::string random_string(std::size_t length, const Alphabet& a, std::mt19937_64& rng) {
    std::string s(length, ' ');
    for (char& c : s) c = random_symbol(a, rng);
    return s;
}

void apply_edit(std::string& s, EditKind kind, const Alphabet& a, std::mt19937_64& rng) {
    switch (kind) {
        case EditKind::insertion: {
            std::uniform_int_distribution<std::size_t> pos(0, s.size());
            const std::size_t at = pos(rng);
            s.insert(s.begin() + static_cast<std::ptrdiff_t>(at), random_symbol(a, rng));
            break;
        }
        case EditKind::deletion: {
            std::uniform_int_distribution<std::size_t> pos(0, s.size() - 1);
            s.erase(pos(rng), 1);
            break;
        }
        case EditKind::substitution: {
            std::uniform_int_distribution<std::size_t> pos(0, s.size() - 1);
            const std::size_t at = pos(rng);
            // Draw from the other |G|-1 symbols.
            std::uniform_int_distribution<std::size_t> pick(0, a.size() - 2);
            const std::size_t current = *a.index(s[at]);
            std::size_t repl = pick(rng);
            if (repl >= current) ++repl;
            s[at] = a.symbol(repl);
            break;
        }
    }
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::vector<std::string> gen_bases(std::size_t k, std::size_t length, std::size_t min_dist, const Alphabet& a,
                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> bases;
    if (k == 0) return bases;
    // Two equal-length strings are never more than `length` edits apart.
    if (k > 1 && min_dist > length)
        throw Unsatisfiable("min distance " + std::to_string(min_dist) + " exceeds basis length " +
                            std::to_string(length));
    for (std::size_t attempt = 0; attempt < kBaseAttempts && bases.size() < k; ++attempt) {
        std::string cand = random_string(length, a, rng);
        const bool ok = std::all_of(bases.begin(), bases.end(),
                                    [&](const std::string& b) { return levenshtein(b, cand) >= min_dist; });
        if (ok) bases.push_back(std::move(cand));
    }
    if (bases.size() < k)
        throw Unsatisfiable("could not place " + std::to_string(k) + " bases at distance >= " +
                            std::to_string(min_dist) + " within the attempt budget");
    return bases;
}

SyntheticDataset gen_noisy(std::span<const std::string> bases, std::size_t per_base, const NoiseSpec& noise,
                           const Alphabet& a) {
    if (noise.ops.empty() && noise.rate > 0) throw InvalidArgument("noise needs at least one edit kind");
    std::mt19937_64 rng(noise.seed);
    std::uniform_int_distribution<std::size_t> count(0, noise.rate);
    SyntheticDataset ds;
    ds.bases.assign(bases.begin(), bases.end());
    ds.strings.reserve(bases.size() * per_base);
    ds.true_labels.reserve(bases.size() * per_base);
    for (std::size_t b = 0; b < bases.size(); ++b) {
        for (std::size_t r = 0; r < per_base; ++r) {
            std::string s = bases[b];
            const std::size_t edits = count(rng);
            for (std::size_t e = 0; e < edits; ++e) {
                std::vector<EditKind> usable;
                for (EditKind kind : noise.ops)
                    if (kind == EditKind::insertion || !s.empty()) usable.push_back(kind);
                if (usable.empty()) break;
                std::uniform_int_distribution<std::size_t> pick(0, usable.size() - 1);
                apply_edit(s, usable[pick(rng)], a, rng);
            }
            ds.strings.push_back(std::move(s));
            ds.true_labels.push_back(b);
        }
    }
    return ds;
}

std::vector<std::string> random_strings(std::size_t n, std::size_t min_len, std::size_t max_len, const Alphabet& a,
                                        std::uint64_t seed) {
    if (min_len > max_len) throw InvalidArgument("min length exceeds max length");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> len(min_len, max_len);
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(random_string(len(rng), a, rng));
    return out;
}

SequenceSet parse_sequences(std::istream& in, SeqFormat format) {
    SequenceSet set;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (format == SeqFormat::lines) {
            if (line.empty()) continue;
            set.names.push_back("seq_" + std::to_string(set.sequences.size()));
            set.sequences.push_back(std::move(line));
            continue;
        }
        if (line.empty()) continue;
        if (line.front() == '>') {
            std::string name = trim(std::string_view(line).substr(1));
            if (name.empty()) throw ParseError(line_no, "FASTA header without a name");
            set.names.push_back(std::move(name));
            set.sequences.emplace_back();
            continue;
        }
        if (set.sequences.empty()) throw ParseError(line_no, "sequence data before the first FASTA header");
        if (line.find_first_of(" \t") != std::string::npos) throw ParseError(line_no, "whitespace inside sequence");
        set.sequences.back() += line;
    }
    if (in.bad()) throw IoError("read failure");
    return set;
}

void validate_sequences(const SequenceSet& set, const Alphabet& a) {
    for (std::size_t r = 0; r < set.size(); ++r) {
        const auto& s = set.sequences[r];
        for (std::size_t i = 0; i < s.size(); ++i)
            if (!a.contains(s[i])) throw UnknownSymbol(set.names[r], i, s[i]);
    }
}

SequenceSet read_sequences(const std::filesystem::path& path, SeqFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_sequences(in, format);
}

SequenceSet read_sequences(const std::filesystem::path& path, SeqFormat format, const Alphabet& a) {
    SequenceSet set = read_sequences(path, format);
    validate_sequences(set, a);
    return set;
}

void write_fasta(std::ostream& out, std::span<const std::string> names, std::span<const std::string> seqs) {
    if (names.size() != seqs.size()) throw CountMismatch("FASTA names and sequences differ in count");
    for (std::size_t r = 0; r < seqs.size(); ++r) {
        out << '>' << names[r] << '\n';
        const std::string& s = seqs[r];
        for (std::size_t pos = 0; pos < s.size(); pos += kFastaWidth) out << s.substr(pos, kFastaWidth) << '\n';
    }
}

void write_fasta(const std::filesystem::path& path, std::span<const std::string> names,
                 std::span<const std::string> seqs) {
    auto out = open_out(path);
    write_fasta(out, names, seqs);
    finish(out, path);
}

void write_labels(const std::filesystem::path& path, std::span<const std::string> names,
                  std::span<const std::size_t> labels) {
    if (names.size() != labels.size()) throw CountMismatch("label and name counts differ");
    auto out = open_out(path);
    out << "name\tlabel\n";
    for (std::size_t i = 0; i < names.size(); ++i) out << names[i] << '\t' << labels[i] << '\n';
    finish(out, path);
}

LabelTable read_labels(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    LabelTable t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line == "name\tlabel") continue;
        const auto tab = line.rfind('\t');
        if (tab == std::string::npos) throw ParseError(line_no, "expected name<TAB>label");
        std::size_t label = 0;
        const std::string_view field = std::string_view(line).substr(tab + 1);
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), label);
        if (ec != std::errc() || ptr != field.data() + field.size()) throw ParseError(line_no, "label is not a count");
        t.names.push_back(line.substr(0, tab));
        t.labels.push_back(label);
    }
    return t;
}

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    auto out = open_out(path);
    out << contents;
    finish(out, path);
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
    std::ostringstream os;
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            if (j) os << ',';
            os << format_double(m(i, j));
        }
        os << '\n';
    }
    write_text_file(path, os.str());
}

void write_report(const ClusterReport& report, std::span<const std::string> names,
                  const std::filesystem::path& out_dir, const nlohmann::json& summary, const Matrix* matrix) {
    if (names.size() != report.labels.size()) throw CountMismatch("report labels and names differ in count");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    write_labels(out_dir / "labels.tsv", names, report.labels);

    std::vector<std::string> centroid_names;
    for (std::size_t c = 0; c < report.consensuses.size(); ++c) centroid_names.push_back("centroid_" + std::to_string(c));
    write_fasta(out_dir / "consensus.fasta", centroid_names, report.consensuses);

    if (matrix) write_matrix_csv(out_dir / "matrix.csv", *matrix);

    nlohmann::json doc = summary;
    doc["rounds_run"] = report.rounds_run;
    doc["centroid_length"] = report.centroid_length;
    doc["consensuses"] = report.consensuses;
    doc["objective_trace"] = report.objective_trace;
    doc["initial_objective"] = report.initial_objective;
    doc["final_objective"] = report.final_objective;
    doc["restart"] = report.restart;
    doc["restart_objectives"] = report.restart_objectives;
    write_text_file(out_dir / "summary.json", doc.dump(2) + "\n");
}

}  // namespace softedit
