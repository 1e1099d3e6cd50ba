#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "softedit/data_io.hpp"
#include "softedit/edit_metric.hpp"
#include "softedit/error.hpp"
#include "support.hpp"

using namespace softedit;

namespace {

const Alphabet kDna = Alphabet::dna();

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

SequenceSet parse(const std::string& text, SeqFormat f) {
    std::istringstream in(text);
    return parse_sequences(in, f);
}

}  // namespace

TEST_SUITE("data_io") {

TEST_CASE("basis generation") {
    const auto one = gen_bases(1, 12, 99, kDna, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].size() == 12);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto two = gen_bases(2, 10, 5, kDna, seed);
        REQUIRE(two.size() == 2);
        CHECK(levenshtein(two[0], two[1]) >= 5);
    }
    const auto five = gen_bases(5, 10, 5, kDna, 3);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j) CHECK(levenshtein(five[i], five[j]) >= 5);

    CHECK_THROWS_AS(gen_bases(2, 3, 10, kDna, 1), Unsatisfiable);
    // Only 16 strings of length 2 exist over ACGT.
    CHECK_THROWS_AS(gen_bases(17, 2, 1, kDna, 1), Unsatisfiable);
    CHECK(gen_bases(2, 10, 5, kDna, 7) == gen_bases(2, 10, 5, kDna, 7));
}

TEST_CASE("noisy variants") {
    const auto bases = gen_bases(2, 10, 5, kDna, 11);
    SUBCASE("zero noise copies the bases") {
        const auto ds = gen_noisy(bases, 30, NoiseSpec{0, {}, 1}, kDna);
        for (std::size_t i = 0; i < ds.strings.size(); ++i) CHECK(ds.strings[i] == bases[ds.true_labels[i]]);
    }
    SUBCASE("edits are bounded by the rate and labels are balanced") {
        NoiseSpec noise;
        noise.rate = 2;
        noise.seed = 5;
        const auto ds = gen_noisy(bases, 1000, noise, kDna);
        CHECK(ds.strings.size() == 2000);
        CHECK(ds.bases == bases);
        std::map<std::size_t, std::size_t> hist;
        std::size_t changed = 0;
        for (std::size_t i = 0; i < ds.strings.size(); ++i) {
            ++hist[ds.true_labels[i]];
            const auto d = levenshtein(ds.strings[i], bases[ds.true_labels[i]]);
            CHECK(d <= 2);
            changed += d > 0;
        }
        CHECK(hist[0] == 1000);
        CHECK(hist[1] == 1000);
        CHECK(changed > 1000);
        CHECK(gen_noisy(bases, 1000, noise, kDna).strings == ds.strings);
    }
    SUBCASE("restricted edit kinds") {
        const auto subs = gen_noisy(bases, 200, NoiseSpec{3, {EditKind::substitution}, 2}, kDna);
        for (const auto& s : subs.strings) CHECK(s.size() == 10);
        const auto ins = gen_noisy(bases, 200, NoiseSpec{3, {EditKind::insertion}, 2}, kDna);
        for (const auto& s : ins.strings) CHECK(s.size() >= 10);
        const auto del = gen_noisy(std::vector<std::string>{"AC"}, 50, NoiseSpec{5, {EditKind::deletion}, 2}, kDna);
        for (const auto& s : del.strings) CHECK(s.size() <= 2);
        CHECK_THROWS_AS(gen_noisy(bases, 2, NoiseSpec{1, {}, 2}, kDna), InvalidArgument);
    }
}

TEST_CASE("random strings") {
    const auto xs = random_strings(500, 1, 20, kDna, 4);
    CHECK(xs.size() == 500);
    std::size_t shortest = 100, longest = 0;
    for (const auto& s : xs) {
        shortest = std::min(shortest, s.size());
        longest = std::max(longest, s.size());
    }
    CHECK(shortest == 1);
    CHECK(longest == 20);
    CHECK_THROWS_AS(random_strings(3, 5, 4, kDna, 1), InvalidArgument);
}

TEST_CASE("parsing") {
    auto f = parse(">r1\nACGT\n", SeqFormat::fasta);
    CHECK(f.sequences == std::vector<std::string>{"ACGT"});
    CHECK(f.names == std::vector<std::string>{"r1"});

    auto wrapped = parse(">first record\r\nAC\nGT\n\n>second\nTT\n", SeqFormat::fasta);
    CHECK(wrapped.names == std::vector<std::string>{"first record", "second"});
    CHECK(wrapped.sequences == std::vector<std::string>{"ACGT", "TT"});

    auto lines = parse("ACGT\n\nGGTA\n", SeqFormat::lines);
    CHECK(lines.sequences == std::vector<std::string>{"ACGT", "GGTA"});
    CHECK(lines.names == std::vector<std::string>{"seq_0", "seq_1"});

    try {
        validate_sequences(parse(">r1\nACZT\n", SeqFormat::fasta), kDna);
        FAIL("expected UnknownSymbol");
    } catch (const UnknownSymbol& e) {
        CHECK(e.record() == "r1");
        CHECK(e.position() == 2);
    }
    try {
        parse("\nACGT\n>r\n", SeqFormat::fasta);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse(">\nAC\n", SeqFormat::fasta), ParseError);
    CHECK(parse("", SeqFormat::fasta).size() == 0);
    CHECK_THROWS_AS(read_sequences("/nonexistent/file.fa", SeqFormat::fasta), IoError);
}

TEST_CASE("FASTA round trip with wrapping") {
    const auto dir = testing_support::scratch_dir("fasta");
    std::mt19937_64 rng(3);
    std::vector<std::string> names{"a", "b c", "long"}, seqs{"ACGT", "", testing_support::random_string(200, kDna, rng)};
    write_fasta(dir / "x.fasta", names, seqs);
    const auto text = slurp(dir / "x.fasta");
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) CHECK(line.size() <= kFastaWidth);
    const auto back = read_sequences(dir / "x.fasta", SeqFormat::fasta, kDna);
    CHECK(back.names == names);
    CHECK(back.sequences == seqs);
    std::filesystem::remove_all(dir);
}

TEST_CASE("labels file") {
    const auto dir = testing_support::scratch_dir("labels");
    const std::vector<std::string> names{"x", "y", "z"};
    const std::vector<std::size_t> labels{1, 0, 1};
    write_labels(dir / "labels.tsv", names, labels);
    CHECK(slurp(dir / "labels.tsv") == "name\tlabel\nx\t1\ny\t0\nz\t1\n");
    const auto t = read_labels(dir / "labels.tsv");
    CHECK(t.names == names);
    CHECK(t.labels == labels);

    write_text_file(dir / "bad.tsv", "name\tlabel\nx\tone\n");
    CHECK_THROWS_AS(read_labels(dir / "bad.tsv"), ParseError);
    CHECK_THROWS_AS(write_labels(dir / "l.tsv", names, std::vector<std::size_t>{1}), CountMismatch);
    std::filesystem::remove_all(dir);
}

TEST_CASE("report export") {
    const auto dir = testing_support::scratch_dir("report");
    ClusterReport rep;
    rep.labels = {0, 1, 1};
    rep.consensuses = {"ACGT", "TTGA"};
    rep.objective_trace = {2.5, 1.25};
    rep.rounds_run = 2;
    rep.centroid_length = 4;
    Matrix m(3, 2);
    m.data = {0.1, 1.0 / 3.0, 2, 0, 1e-300, -0.5};
    const std::vector<std::string> names{"s0", "s1", "s2"};
    write_report(rep, names, dir / "out", nlohmann::json{{"config", {{"k", 2}}}}, &m);

    const auto consensus = read_sequences(dir / "out" / "consensus.fasta", SeqFormat::fasta);
    CHECK(consensus.names == std::vector<std::string>{"centroid_0", "centroid_1"});
    CHECK(consensus.sequences == rep.consensuses);
    CHECK(read_labels(dir / "out" / "labels.tsv").labels == rep.labels);

    const auto csv = slurp(dir / "out" / "matrix.csv");
    std::istringstream rows(csv);
    std::vector<double> values;
    std::size_t row_count = 0;
    for (std::string row; std::getline(rows, row); ++row_count) {
        std::istringstream cells(row);
        for (std::string cell; std::getline(cells, cell, ',');) values.push_back(std::stod(cell));
    }
    CHECK(row_count == 3);
    CHECK(values == m.data);

    const auto doc = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
    CHECK(doc["config"]["k"] == 2);
    CHECK(doc["rounds_run"] == 2);
    CHECK(doc["objective_trace"].size() == 2);

    CHECK_THROWS_AS(write_report(rep, std::vector<std::string>{"s0"}, dir / "out2", nlohmann::json::object()),
                    CountMismatch);
    std::filesystem::remove_all(dir);
}

}
