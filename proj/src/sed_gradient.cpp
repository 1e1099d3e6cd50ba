#include "softedit/sed_gradient.hpp"

#include <algorithm>
#include <cmath>

#include "sed_kernel.hpp"
#include "softedit/error.hpp"

namespace softedit {
namespace {

// Adds weight * d(alpha/beta at the corner)/dX into g1 (rows of x1) and g2
// (rows of x2). g1 and g2 may refer to the same matrix when x1 is x2.
void accumulate(EncodingView x1, EncodingView x2, const SedTables& tab, double tau, double weight, Matrix& g1,
                Matrix& g2) {
    const std::size_t n1 = tab.len1, n2 = tab.len2, w = n2 + 1, na = x1.alphabet_size;
    if (n1 == 0 || n2 == 0) return;
    const kernel::Temp t(tau);

    // Adjoints are kept relative to each cell's exponent:
    //   adj_sig(i,j) = d(out)/d(alpha_{i,j}) * 2^{scale_exp(i,j)}.
    std::vector<double> cur_a(w, 0.0), cur_b(w, 0.0), prev_a(w, 0.0), prev_b(w, 0.0);
    const double corner_b = tab.beta_sig(n1, n2);
    cur_a[n2] = weight / corner_b;
    cur_b[n2] = -weight * tab.value() / corner_b;

    for (std::size_t i = n1; i >= 1; --i) {
        std::fill(prev_a.begin(), prev_a.end(), 0.0);
        std::fill(prev_b.begin(), prev_b.end(), 0.0);
        const auto r1 = x1.row(i - 1);
        for (std::size_t j = n2; j >= 1; --j) {
            const double adj_a = cur_a[j], adj_b = cur_b[j];
            if (adj_a == 0.0 && adj_b == 0.0) continue;
            const int sc = tab.scale_exp[i * w + j];
            const double gu = kernel::pow2(tab.scale_exp[(i - 1) * w + j] - sc);
            const double gl = kernel::pow2(tab.scale_exp[i * w + j - 1] - sc);
            const double gd = kernel::pow2(tab.scale_exp[(i - 1) * w + j - 1] - sc);
            const double ab = adj_a + adj_b;

            prev_a[j] += t.e1 * adj_a * gu;
            prev_b[j] += t.e1 * ab * gu;
            cur_a[j - 1] += t.e1 * adj_a * gl;
            cur_b[j - 1] += t.e1 * ab * gl;

            const kernel::Diag dg(t, tab.delta(i - 1, j - 1));
            prev_a[j - 1] += dg.coef_b * adj_a * gd;
            prev_b[j - 1] += (dg.coef_a * adj_a + dg.coef_b * adj_b) * gd;

            const double ad = tab.alpha_sig(i - 1, j - 1), bd = tab.beta_sig(i - 1, j - 1);
            const double d_delta =
                gd * dg.ed * (adj_a * (ad * t.tau + bd * (1.0 + t.tau * dg.delta)) + adj_b * bd * t.tau);
            if (d_delta == 0.0) continue;

            const auto r2 = x2.row(j - 1);
            const double half = 0.5 * d_delta;
            for (std::size_t k = 0; k < na; ++k) {
                const double diff = r1[k] - r2[k];
                if (diff > 0.0) {
                    g1(i - 1, k) += half;
                    g2(j - 1, k) -= half;
                } else if (diff < 0.0) {
                    g1(i - 1, k) -= half;
                    g2(j - 1, k) += half;
                }
            }
        }
        std::swap(cur_a, prev_a);
        std::swap(cur_b, prev_b);
    }
}

}  // namespace

SelfGradient sed_self_grad(EncodingView x, SedParams p) {
    const SedTables tab = sed_tables(x, x, p);
    SelfGradient out{Matrix(x.length, x.alphabet_size), tab.value()};
    accumulate(x, x, tab, p.tau, 1.0, out.d_x, out.d_x);
    return out;
}

SedGradient sed_value_grad(EncodingView x1, EncodingView x2, SedParams p, bool unbiased) {
    const SedTables tab = sed_tables(x1, x2, p);
    SedGradient out{Matrix(x1.length, x1.alphabet_size), Matrix(x2.length, x2.alphabet_size), tab.value()};
    accumulate(x1, x2, tab, p.tau, 1.0, out.d_x1, out.d_x2);
    if (unbiased) {
        const SedTables t11 = sed_tables(x1, x1, p);
        const SedTables t22 = sed_tables(x2, x2, p);
        accumulate(x1, x1, t11, p.tau, -0.5, out.d_x1, out.d_x1);
        accumulate(x2, x2, t22, p.tau, -0.5, out.d_x2, out.d_x2);
        out.value = unbias(tab.value(), t11.value(), t22.value());
    }
    return out;
}

SedGradient finite_diff_grad(EncodingView x1, EncodingView x2, SedParams p, bool unbiased, double h) {
    detail::check_alphabets(x1, x2);
    if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
    auto f = [&](EncodingView a, EncodingView b) { return unbiased ? sed_unbiased(a, b, p) : sed(a, b, p); };

    std::vector<double> w1(x1.data.begin(), x1.data.end()), w2(x2.data.begin(), x2.data.end());
    const EncodingView v1(w1, x1.length, x1.alphabet_size), v2(w2, x2.length, x2.alphabet_size);

    SedGradient out{Matrix(x1.length, x1.alphabet_size), Matrix(x2.length, x2.alphabet_size), f(x1, x2)};
    auto sweep = [&](std::vector<double>& w, Matrix& g) {
        for (std::size_t e = 0; e < w.size(); ++e) {
            const double orig = w[e];
            w[e] = orig + h;
            const double plus = f(v1, v2);
            w[e] = orig - h;
            const double minus = f(v1, v2);
            w[e] = orig;
            g.data[e] = (plus - minus) / (2.0 * h);
        }
    };
    sweep(w1, out.d_x1);
    sweep(w2, out.d_x2);
    return out;
}

TieMask find_ties(EncodingView x1, EncodingView x2, bool unbiased, double h) {
    const std::size_t na = x1.alphabet_size;
    TieMask m{std::vector<bool>(x1.data.size(), false), std::vector<bool>(x2.data.size(), false), 0};
    auto close = [h](double a, double b) { return std::abs(a - b) <= h; };
    for (std::size_t i = 0; i < x1.length; ++i)
        for (std::size_t j = 0; j < x2.length; ++j)
            for (std::size_t k = 0; k < na; ++k)
                if (close(x1.row(i)[k], x2.row(j)[k])) {
                    m.x1[i * na + k] = true;
                    m.x2[j * na + k] = true;
                }
    if (unbiased) {
        auto self = [&](EncodingView x, std::vector<bool>& mask) {
            for (std::size_t i = 0; i < x.length; ++i)
                for (std::size_t j = 0; j < x.length; ++j)
                    for (std::size_t k = 0; k < na; ++k)
                        if (i != j && close(x.row(i)[k], x.row(j)[k])) mask[i * na + k] = true;
        };
        self(x1, m.x1);
        self(x2, m.x2);
    }
    m.count = static_cast<std::size_t>(std::count(m.x1.begin(), m.x1.end(), true) +
                                       std::count(m.x2.begin(), m.x2.end(), true));
    return m;
}

GradientCheck check_gradient(EncodingView x1, EncodingView x2, SedParams p, bool unbiased, double h) {
    const SedGradient analytic = sed_value_grad(x1, x2, p, unbiased);
    const SedGradient numeric = finite_diff_grad(x1, x2, p, unbiased, h);
    const TieMask ties = find_ties(x1, x2, unbiased, h);

    GradientCheck out;
    out.ties_excluded = ties.count;
    auto compare = [&](const Matrix& a, const Matrix& f, const std::vector<bool>& skip) {
        for (std::size_t e = 0; e < a.data.size(); ++e) {
            if (skip[e]) continue;
            const double err = std::abs(a.data[e] - f.data[e]) / std::max(std::abs(f.data[e]), kGradCheckFloor);
            out.max_rel_error = std::max(out.max_rel_error, err);
            ++out.compared;
        }
    };
    compare(analytic.d_x1, numeric.d_x1, ties.x1);
    compare(analytic.d_x2, numeric.d_x2, ties.x2);
    return out;
}

}  // namespace softedit
