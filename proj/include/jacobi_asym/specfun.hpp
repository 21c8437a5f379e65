// specfun.hpp - Laguerre polynomials and functions, integer-order Bessel J,
// and log-gamma, evaluated from scratch in double precision.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace jacobi_asym {

/// Degree/order pair of L_n^{(s)} and omega_n^{(s)}. Orders may be negative;
/// when n + s < 0 the function is taken to be zero.
struct LaguerreOrder {
    int n = 0;
    int s = 0;

    constexpr bool vanishes() const noexcept { return n < 0 || n + s < 0; }
};

/// ln Gamma(z) for z > 0 (Lanczos, g = 7, nine terms).
/// Absolute error near the zeros at z = 1, 2 is ~1e-15; relative ~1e-15 elsewhere.
inline double log_gamma(double z) {
    if (!(z > 0.0) || !std::isfinite(z))
        throw std::domain_error("log_gamma: argument must be positive and finite");
    if (z < 0.5) return log_gamma(z + 1.0) - std::log(z);

    static constexpr std::array<double, 9> c = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    const double x = z - 1.0;
    double a = c[0];
    for (int k = 1; k < 9; ++k) a += c[k] / (x + k);
    const double t = x + 7.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

/// ln(n!) for n >= 0; exact table for small n.
inline double log_factorial(int n) {
    if (n < 0) throw std::domain_error("log_factorial: negative argument");
    static const std::array<double, 21> table = [] {
        std::array<double, 21> t{};
        double f = 1.0;
        for (int k = 0; k <= 20; ++k) {
            if (k > 0) f *= k;
            t[k] = std::log(f);
        }
        return t;
    }();
    if (n <= 20) return table[n];
    return log_gamma(n + 1.0);
}

/// Generalized Laguerre polynomial L_n^{(s)}(x).
///
/// Non-negative orders use the three-term recurrence
///   (k+1) L_{k+1} = (2k+1+s-x) L_k - (k+s) L_{k-1}.
/// Negative orders use L_n^{(-r)}(x) = (-x)^r (n-r)!/n! L_{n-r}^{(r)}(x) and
/// return 0 when n < r.
inline double laguerre_polynomial(int n, int s, double x) {
    if (n < 0) throw std::domain_error("laguerre_polynomial: negative degree");
    if (s < 0) {
        const int r = -s;
        if (n < r) return 0.0;
        double factor = 1.0;
        for (int k = n - r + 1; k <= n; ++k) factor *= -x / k;
        return factor * laguerre_polynomial(n - r, r, x);
    }
    double prev = 0.0;
    double cur = 1.0;
    for (int k = 0; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + s - x) * cur - (k + s) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Forward recurrence for omega_n^{(s)}(x), s >= 0, advancing one degree at a
/// time. Values are carried as mantissa * 2^exponent so that neither the
/// starting value sqrt(1/s!) e^{-x/2} x^{s/2} nor intermediate growth leaves
/// the double range.
class NormalizedLaguerre {
public:
    NormalizedLaguerre(int s, double x) : s_(s), x_(x) {
        if (s < 0) throw std::domain_error("NormalizedLaguerre: order must be non-negative");
        if (!(x > 0.0) || !std::isfinite(x))
            throw std::domain_error("laguerre_function: argument must be positive");
        const double log0 = -0.5 * x + 0.5 * s * std::log(x) - 0.5 * log_factorial(s);
        if (log0 > -600.0 && log0 < 600.0) {
            cur_ = std::exp(log0);
        } else {
            const double e2 = std::floor(log0 / std::numbers::ln2);
            exponent_ = static_cast<int>(e2);
            cur_ = std::exp(log0 - e2 * std::numbers::ln2);
        }
    }

    int degree() const noexcept { return n_; }

    double value() const noexcept { return exponent_ == 0 ? cur_ : std::ldexp(cur_, exponent_); }

    void advance() noexcept {
        const double n = n_;
        const double next = ((2.0 * n + s_ + 1.0 - x_) * cur_ - std::sqrt(n * (n + s_)) * prev_) /
                            std::sqrt((n + 1.0) * (n + s_ + 1.0));
        prev_ = cur_;
        cur_ = next;
        ++n_;
        if (std::abs(cur_) > 0x1p300) {
            cur_ = std::ldexp(cur_, -300);
            prev_ = std::ldexp(prev_, -300);
            exponent_ += 300;
        }
    }

private:
    int s_;
    double x_;
    int n_ = 0;
    int exponent_ = 0;
    double prev_ = 0.0;
    double cur_ = 1.0;
};

/// omega_n^{(s)}(x) for n = 0..n_max at a fixed order s >= 0.
inline std::vector<double> laguerre_function_sequence(int n_max, int s, double x) {
    if (n_max < 0) return {};
    NormalizedLaguerre rec(s, x);
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
    out[0] = rec.value();
    for (int n = 1; n <= n_max; ++n) {
        rec.advance();
        out[n] = rec.value();
    }
    return out;
}

/// Normalized Laguerre function
///   omega_n^{(s)}(x) = sqrt(n!/(n+s)!) e^{-x/2} x^{s/2} L_n^{(s)}(x),  x > 0.
/// Negative orders use omega_n^{(-r)} = (-1)^r omega_{n-r}^{(r)}; the value
/// is 0 when n + s < 0.
inline double laguerre_function(int n, int s, double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error("laguerre_function: argument must be positive");
    if (n < 0) throw std::domain_error("laguerre_function: negative degree");
    if (n + s < 0) return 0.0;
    if (s < 0) {
        const int r = -s;
        const double v = laguerre_function(n - r, r, x);
        return (r % 2 == 0) ? v : -v;
    }
    NormalizedLaguerre rec(s, x);
    for (int k = 0; k < n; ++k) rec.advance();
    return rec.value();
}

inline double laguerre_function(LaguerreOrder o, double x) { return laguerre_function(o.n, o.s, x); }

namespace detail {

inline double bessel_j_series(int s, double x) {
    const double h = 0.5 * x;
    double term = std::exp(s * std::log(h) - log_factorial(s));
    double sum = term;
    const double h2 = h * h;
    for (int k = 0; k < 500; ++k) {
        term *= -h2 / ((k + 1.0) * (k + 1.0 + s));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum) && k > h) break;
    }
    return sum;
}

// Miller's downward recurrence J_{k-1} = (2k/x) J_k - J_{k+1}, normalized by
// J_0 + 2 sum_{k>=1} J_{2k} = 1.
inline double bessel_j_miller(int s, double x) {
    const double top = std::max<double>(s, x);
    int start = static_cast<int>(top + 20.0 + 14.0 * std::cbrt(top));
    start += start % 2;
    double next = 0.0;  // J_{k+1}
    double cur = 1e-30; // J_k
    double norm = 0.0;
    double result = 0.0;
    for (int k = start; k >= 1; --k) {
        const double prev = (2.0 * k / x) * cur - next;
        next = cur;
        cur = prev; // now J_{k-1}
        if (k - 1 == s) result = cur;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
        if (std::abs(cur) > 1e250) {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            result *= 1e-250;
        }
    }
    norm += cur; // J_0
    return result / norm;
}

} // namespace detail

/// Bessel function of the first kind J_s(x) for integer s >= 0 and x >= 0.
/// Ascending series for x <= 12, normalized Miller recurrence above.
inline double bessel_j(int s, double x) {
    if (s < 0) throw std::domain_error("bessel_j: order must be non-negative");
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("bessel_j: argument must be >= 0");
    if (x == 0.0) return s == 0 ? 1.0 : 0.0;
    if (x <= 12.0) return detail::bessel_j_series(s, x);
    return detail::bessel_j_miller(s, x);
}

} // namespace jacobi_asym
