// oracles.hpp - Reference computations used only by the tests. Each one takes
// a route independent of the library code it checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "jacobi_asym/model.hpp"

namespace oracle {

/// L_n^{(s)}(x) from the explicit finite sum
///   (n+s)!/n! sum_i C(n,i) (-1)^i x^i / (i+s)!,  s >= 0,
/// in long double, with each term obtained from the previous one by its exact
/// rational ratio. Cancellation limits it to moderate n x.
inline long double laguerre_explicit(int n, int s, long double x) {
    long double term = 1.0L; // C(n+s, n)
    for (int i = 1; i <= n; ++i) term = term * (s + i) / i;
    long double sum = term;
    for (int i = 1; i <= n; ++i) {
        term *= -x * (n - i + 1) / (static_cast<long double>(i) * (i + s));
        sum += term;
    }
    return sum;
}

/// J_s(x) by the ascending series in long double; reliable for moderate x.
inline long double bessel_series(int s, long double x) {
    const long double h = x / 2.0L;
    long double term = std::pow(h, static_cast<long double>(s)) / std::tgamma(static_cast<long double>(s + 1));
    long double sum = term;
    for (int k = 0; k < 400; ++k) {
        term *= -h * h / ((k + 1.0L) * (k + 1.0L + s));
        sum += term;
        if (std::abs(term) < 1e-30L) break;
    }
    return sum;
}

/// Roots of [[a, b], [b, c]] in ascending order.
inline std::pair<double, double> sym2x2_roots(double a, double b, double c) {
    const double mean = 0.5 * (a + c);
    const double rad = std::hypot(0.5 * (a - c), b);
    return {mean - rad, mean + rad};
}

/// s_n^2 by summing every k <= 4n + 64, k != n, through scalar r_tilde calls.
inline double remainder_sq_brute(int n, double g) {
    double sum = 0.0;
    for (int k = 0; k <= 4 * n + 64; ++k) {
        if (k == n) continue;
        const double r = jacobi_asym::r_tilde(k, n, g);
        sum += r * r / (static_cast<double>(n - k) * (n - k));
    }
    return sum;
}

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20261018);
    return gen;
}

inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }
inline double uniform_real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

} // namespace oracle
