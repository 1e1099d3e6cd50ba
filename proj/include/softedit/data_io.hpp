#pragma once
// Synthetic data generation, sequence file ingestion and result export.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "softedit/alphabet.hpp"
#include "softedit/kmeans.hpp"

namespace softedit {

enum class EditKind { insertion, deletion, substitution };

struct NoiseSpec {
    std::size_t rate = 0;  // maximum number of edits per generated string
    std::vector<EditKind> ops{EditKind::insertion, EditKind::deletion, EditKind::substitution};
    std::uint64_t seed = 0;
};

struct SyntheticDataset {
    std::vector<std::string> strings;
    std::vector<std::size_t> true_labels;
    std::vector<std::string> bases;
};

// k uniform random strings with pairwise Levenshtein distance >= min_dist.
// Throws Unsatisfiable if rejection sampling exhausts kBaseAttempts.
inline constexpr std::size_t kBaseAttempts = 100000;
std::vector<std::string> gen_bases(std::size_t k, std::size_t length, std::size_t min_dist, const Alphabet& a,
                                   std::uint64_t seed);

// per_base variants of every base, each with a uniform {0..rate} number of
// edits applied one after another at uniform positions. Substitutions always
// change the symbol.
SyntheticDataset gen_noisy(std::span<const std::string> bases, std::size_t per_base, const NoiseSpec& noise,
                           const Alphabet& a);

// n uniform random strings with lengths uniform in [min_len, max_len].
std::vector<std::string> random_strings(std::size_t n, std::size_t min_len, std::size_t max_len, const Alphabet& a,
                                        std::uint64_t seed);

enum class SeqFormat { fasta, lines };

struct SequenceSet {
    std::vector<std::string> names;
    std::vector<std::string> sequences;

    std::size_t size() const noexcept { return sequences.size(); }
};

// FASTA: '>' headers (the header text is the name), sequence lines may wrap.
// lines: one sequence per line, blank lines skipped, named seq_<index>.
SequenceSet parse_sequences(std::istream& in, SeqFormat format);
// Throws UnknownSymbol(record, position) for symbols outside the alphabet.
void validate_sequences(const SequenceSet& set, const Alphabet& a);
SequenceSet read_sequences(const std::filesystem::path& path, SeqFormat format);
SequenceSet read_sequences(const std::filesystem::path& path, SeqFormat format, const Alphabet& a);

inline constexpr std::size_t kFastaWidth = 70;
void write_fasta(std::ostream& out, std::span<const std::string> names, std::span<const std::string> seqs);
void write_fasta(const std::filesystem::path& path, std::span<const std::string> names,
                 std::span<const std::string> seqs);

// labels.tsv: header "name\tlabel", then one row per sequence.
void write_labels(const std::filesystem::path& path, std::span<const std::string> names,
                  std::span<const std::size_t> labels);
struct LabelTable {
    std::vector<std::string> names;
    std::vector<std::size_t> labels;
};
LabelTable read_labels(const std::filesystem::path& path);

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

// Writes labels.tsv, consensus.fasta, summary.json and, when given, matrix.csv
// into out_dir. `summary` is merged into the run summary document.
void write_report(const ClusterReport& report, std::span<const std::string> names,
                  const std::filesystem::path& out_dir, const nlohmann::json& summary, const Matrix* matrix = nullptr);

// Text serializations shared by the writers; full precision, locale-free.
std::string format_double(double v);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace softedit
