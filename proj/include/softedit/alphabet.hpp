#pragma once
// Alphabets and the L x |G| matrix representation of (soft) sequences.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace softedit {

class Alphabet {
public:
    // Throws InvalidArgument on duplicate, non-printable symbols or size < 2.
    explicit Alphabet(std::string_view symbols);

    static Alphabet dna();
    static Alphabet protein();
    // "dna" or "protein"; nullopt for anything else.
    static std::optional<Alphabet> preset(std::string_view name);
    // Sorted set of distinct characters seen in the input strings.
    static Alphabet infer(std::span<const std::string> strings);

    std::size_t size() const noexcept { return symbols_.size(); }
    const std::string& symbols() const noexcept { return symbols_; }
    char symbol(std::size_t index) const { return symbols_.at(index); }
    std::optional<std::size_t> index(char c) const noexcept {
        const int idx = lookup_[static_cast<unsigned char>(c)];
        if (idx < 0) return std::nullopt;
        return static_cast<std::size_t>(idx);
    }
    bool contains(char c) const noexcept { return index(c).has_value(); }

    bool operator==(const Alphabet& other) const noexcept { return symbols_ == other.symbols_; }

private:
    std::string symbols_;
    std::array<int, 256> lookup_{};
};

// Dense row-major real matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }

    bool operator==(const Matrix&) const = default;
};

// Non-owning view used by the distance kernels. Rows need not be stochastic
// here: gradient validation perturbs entries without renormalizing.
struct EncodingView {
    std::span<const double> data;
    std::size_t length = 0;
    std::size_t alphabet_size = 0;

    EncodingView() = default;
    EncodingView(std::span<const double> d, std::size_t l, std::size_t a)
        : data(d), length(l), alphabet_size(a) {}
    EncodingView(const Matrix& m) : data(m.data), length(m.rows), alphabet_size(m.cols) {}  // NOLINT

    std::span<const double> row(std::size_t i) const { return data.subspan(i * alphabet_size, alphabet_size); }
};

// L x |G| row-stochastic matrix. Immutable once built.
class SequenceEncoding {
public:
    static constexpr double kRowSumTolerance = 1e-9;

    SequenceEncoding() = default;
    // Throws InvalidArgument unless every entry is in [0,1] and every row sums to 1.
    explicit SequenceEncoding(Matrix m);

    std::size_t length() const noexcept { return m_.rows; }
    std::size_t alphabet_size() const noexcept { return m_.cols; }
    const Matrix& matrix() const noexcept { return m_; }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    std::span<const double> row(std::size_t i) const { return m_.row(i); }

    operator EncodingView() const { return EncodingView(m_); }  // NOLINT

    bool operator==(const SequenceEncoding&) const = default;

private:
    Matrix m_;
};

SequenceEncoding encode_one_hot(std::string_view s, const Alphabet& a);
std::string decode_argmax(const SequenceEncoding& x, const Alphabet& a);
std::string decode_argmax(EncodingView x, const Alphabet& a);
// (1 - eps*|G|) * x + eps, entrywise. Requires 0 < eps < 1/|G|.
SequenceEncoding soften(const SequenceEncoding& x, double eps);

std::vector<SequenceEncoding> encode_all(std::span<const std::string> strings, const Alphabet& a);

}  // namespace softedit
