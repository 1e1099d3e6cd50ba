#pragma once
// Per-cell arithmetic shared by the forward fill and the adjoint sweep.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

namespace softedit::kernel {

inline constexpr double kLowSig = 0x1p-512;
inline constexpr double kHighSig = 0x1p+512;

struct Cell {
    double a = 0.0;  // alpha significand
    double b = 1.0;  // beta significand
    int s = 0;       // shared exponent
};

inline double pow2(int d) { return d == 0 ? 1.0 : std::ldexp(1.0, d); }

inline double mismatch(std::span<const double> r1, std::span<const double> r2) {
    double acc = 0.0;
    for (std::size_t k = 0; k < r1.size(); ++k) acc += std::abs(r1[k] - r2[k]);
    return 0.5 * acc;
}

// Temperature-only constants.
struct Temp {
    double tau;
    double e1;  // e^tau
    double e2;  // e^{2 tau}

    explicit Temp(double t) : tau(t), e1(std::exp(t)), e2(std::exp(2.0 * t)) {}
};

// Diagonal-move coefficients for one delta.
struct Diag {
    double delta;
    double ed;     // e^{tau delta}
    double coef_b; // e^{tau delta} - e^{2 tau}, multiplies beta_{i-1,j-1} in both tables
    double coef_a; // delta e^{tau delta} - 2 e^{2 tau}, multiplies beta_{i-1,j-1} in alpha

    Diag(const Temp& t, double d) : delta(d) {
        coef_b = t.e2 * std::expm1(t.tau * (d - 2.0));
        ed = coef_b + t.e2;
        coef_a = d * ed - 2.0 * t.e2;
    }
};

// alpha_{n,0} = n e^{tau n}, beta_{n,0} = e^{tau n}.
inline Cell boundary(double tau, std::size_t n) {
    const double t = tau * static_cast<double>(n);
    const double e = std::floor(t / std::numbers::ln2);
    const double sig = std::exp(t - e * std::numbers::ln2);
    return {static_cast<double>(n) * sig, sig, static_cast<int>(e)};
}

inline Cell advance(const Cell& up, const Cell& left, const Cell& diag, const Temp& t, const Diag& d) {
    Cell c;
    c.s = std::max({up.s, left.s, diag.s});
    const double fu = pow2(up.s - c.s);
    const double fl = pow2(left.s - c.s);
    const double fd = pow2(diag.s - c.s);
    const double bd = diag.b * fd;
    c.b = t.e1 * (up.b * fu + left.b * fl) + bd * d.coef_b;
    c.a = t.e1 * ((up.a + up.b) * fu + (left.a + left.b) * fl) + diag.a * fd * d.coef_b + bd * d.coef_a;
    // alpha is a sum of nonnegative terms; the subtraction can only undershoot by rounding.
    c.a = std::max(c.a, 0.0);
    if (c.b < kLowSig || c.b > kHighSig) {
        int e = 0;
        c.b = std::frexp(c.b, &e);
        c.a = std::ldexp(c.a, -e);
        c.s += e;
    }
    return c;
}

}  // namespace softedit::kernel
