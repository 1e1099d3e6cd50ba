#include "softedit/alphabet.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "softedit/error.hpp"

namespace softedit {

Alphabet::Alphabet(std::string_view symbols) : symbols_(symbols) {
    lookup_.fill(-1);
    if (symbols_.size() < 2) throw InvalidArgument("alphabet needs at least two symbols");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        const auto c = static_cast<unsigned char>(symbols_[i]);
        if (!std::isgraph(c)) throw InvalidArgument("alphabet symbols must be printable");
        if (lookup_[c] >= 0) throw InvalidArgument(std::string("duplicate alphabet symbol '") + symbols_[i] + "'");
        lookup_[c] = static_cast<int>(i);
    }
}

Alphabet Alphabet::dna() { return Alphabet("ACGT"); }

Alphabet Alphabet::protein() { return Alphabet("ACDEFGHIKLMNPQRSTVWY"); }

std::optional<Alphabet> Alphabet::preset(std::string_view name) {
    if (name == "dna") return dna();
    if (name == "protein") return protein();
    return std::nullopt;
}

Alphabet Alphabet::infer(std::span<const std::string> strings) {
    std::set<char> seen;
    for (const auto& s : strings) seen.insert(s.begin(), s.end());
    return Alphabet(std::string(seen.begin(), seen.end()));
}

SequenceEncoding::SequenceEncoding(Matrix m) : m_(std::move(m)) {
    for (std::size_t i = 0; i < m_.rows; ++i) {
        double sum = 0.0;
        for (double v : m_.row(i)) {
            if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("encoding entries must lie in [0,1]");
            sum += v;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance)
            throw InvalidArgument("encoding row " + std::to_string(i) + " does not sum to 1");
    }
}

SequenceEncoding encode_one_hot(std::string_view s, const Alphabet& a) {
    Matrix m(s.size(), a.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto idx = a.index(s[i]);
        if (!idx) throw UnknownSymbol(i, s[i]);
        m(i, *idx) = 1.0;
    }
    return SequenceEncoding(std::move(m));
}

std::string decode_argmax(EncodingView x, const Alphabet& a) {
    std::string out;
    out.reserve(x.length);
    for (std::size_t i = 0; i < x.length; ++i) {
        auto r = x.row(i);
        // max_element returns the first maximum, which is the tie rule we want.
        auto best = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
        out.push_back(a.symbol(best));
    }
    return out;
}

std::string decode_argmax(const SequenceEncoding& x, const Alphabet& a) {
    return decode_argmax(EncodingView(x), a);
}

SequenceEncoding soften(const SequenceEncoding& x, double eps) {
    const auto g = static_cast<double>(x.alphabet_size());
    if (!(eps > 0.0 && eps * g < 1.0)) throw InvalidArgument("soften requires 0 < eps < 1/|G|");
    Matrix m = x.matrix();
    const double keep = 1.0 - eps * g;
    for (double& v : m.data) v = keep * v + eps;
    return SequenceEncoding(std::move(m));
}

std::vector<SequenceEncoding> encode_all(std::span<const std::string> strings, const Alphabet& a) {
    std::vector<SequenceEncoding> out;
    out.reserve(strings.size());
    for (const auto& s : strings) out.push_back(encode_one_hot(s, a));
    return out;
}

}  // namespace softedit
