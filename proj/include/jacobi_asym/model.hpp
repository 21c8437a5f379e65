// model.hpp - The perturbed oscillator Jacobi matrix A(g, c1, c2), its exactly
// solvable part A0, the parity matrix R, the Laguerre-function eigenbasis U of
// A0, and the perturbation R~ = U^T R U expressed in that basis.
//
// Every closed form here has an independent oracle alongside it: U via a
// contour integral, R~ via the defining series and via a finite alternating
// sum.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "jacobi_asym/matrix.hpp"
#include "jacobi_asym/parallel.hpp"
#include "jacobi_asym/specfun.hpp"

namespace jacobi_asym {

struct ModelParams {
    double g = 0.0;  // coupling
    double c1 = 0.0; // shift on even diagonal entries
    double c2 = 0.0; // shift on odd diagonal entries

    void validate() const {
        if (!std::isfinite(g) || !std::isfinite(c1) || !std::isfinite(c2))
            throw std::invalid_argument("ModelParams: parameters must be finite");
    }

    double mean_shift() const noexcept { return 0.5 * (c1 + c2); }
    double half_split() const noexcept { return 0.5 * (c1 - c2); }
};

/// N x N section of A: diag k + c1 (k even) or k + c2 (k odd), off g sqrt(k+1).
inline Tridiagonal build_A(const ModelParams& p, int N) {
    p.validate();
    if (N < 2) throw std::invalid_argument("build_A: truncation size must be at least 2");
    std::vector<double> d(N), e(N - 1);
    for (int k = 0; k < N; ++k) d[k] = k + (k % 2 == 0 ? p.c1 : p.c2);
    for (int k = 0; k + 1 < N; ++k) e[k] = p.g * std::sqrt(k + 1.0);
    return {std::move(d), std::move(e)};
}

/// Shifted oscillator a^+a + g(a + a^+): build_A with c1 = c2 = 0.
inline Tridiagonal build_A0(double g, int N) { return build_A({g, 0.0, 0.0}, N); }

/// Diagonal of R: (-1)^k.
inline std::vector<double> parity_diag(int N) {
    if (N < 1) throw std::invalid_argument("parity_diag: size must be positive");
    std::vector<double> r(N);
    for (int k = 0; k < N; ++k) r[k] = (k % 2 == 0) ? 1.0 : -1.0;
    return r;
}

namespace detail {

inline double parity(int k) noexcept { return (k % 2 == 0) ? 1.0 : -1.0; }

// g^{j} / |g|^{j}: the sign the closed forms pick up for negative coupling.
inline double coupling_sign(double g, int j) noexcept {
    return (g < 0.0 && (j % 2 != 0)) ? -1.0 : 1.0;
}

} // namespace detail

/// U_{n,m} = omega_n^{(m-n)}(g^2): component n of the m-th normalized
/// eigenvector of A0 (eigenvalue m - g^2). For g < 0 the factor g^{m-n} keeps
/// its sign; at g = 0, U is the identity.
inline double u_element(int n, int m, double g) {
    if (n < 0 || m < 0) throw std::domain_error("u_element: negative index");
    if (g == 0.0) return n == m ? 1.0 : 0.0;
    return detail::coupling_sign(g, m - n) * laguerre_function(n, m - n, g * g);
}

/// U_{n,m} from its contour-integral representation
///   e^{-g^2/2} sqrt(m!/n!) g^{n-m} (1/2 pi i) oint x^{m-1} (1/x - 1)^n e^{g^2/x} dx
/// by the M-point trapezoid rule. The integrand is analytic away from the
/// origin, so the circle radius is free; it is placed at the minimum of the
/// integrand's modulus bound to keep cancellation at round-off.
inline double u_element_contour(int n, int m, double g, int M = 256) {
    if (n < 0 || m < 0) throw std::domain_error("u_element_contour: negative index");
    if (n > 30 || m > 30) throw std::domain_error("u_element_contour: indices above 30");
    if (M < 64) throw std::domain_error("u_element_contour: need at least 64 points");
    if (g == 0.0) return n == m ? 1.0 : 0.0;

    const double x2 = g * g;
    // log of the modulus bound on |x| = e^t; convex in t.
    auto bound = [&](double t) {
        return m * t + n * std::log1p(std::exp(-t)) + x2 * std::exp(-t);
    };
    double lo = -40.0, hi = 10.0;
    for (int it = 0; it < 200; ++it) {
        const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
        if (bound(a) < bound(b)) hi = b; else lo = a;
    }
    const double t = 0.5 * (lo + hi);
    const double r = std::exp(t);
    const double phi = bound(t);

    std::complex<double> acc{0.0, 0.0};
    for (int j = 0; j < M; ++j) {
        const double theta = 2.0 * std::numbers::pi * (j + 0.5) / M;
        const std::complex<double> x = std::polar(r, theta);
        const std::complex<double> w = 1.0 / x - 1.0;
        if (n > 0 && std::abs(w) == 0.0) continue;
        std::complex<double> logf = static_cast<double>(m) * std::log(x) + x2 / x - phi;
        if (n > 0) logf += static_cast<double>(n) * std::log(w);
        acc += std::exp(logf);
    }
    acc /= static_cast<double>(M);

    const double log_pref = -0.5 * x2 + 0.5 * (log_factorial(m) - log_factorial(n)) +
                            (n - m) * std::log(std::abs(g)) + phi;
    const double scale = detail::coupling_sign(g, n - m) * std::exp(log_pref);
    const double imag = scale * acc.imag();
    if (std::abs(imag) > 1e-8)
        throw std::runtime_error("u_element_contour: imaginary residue " + std::to_string(imag));
    return scale * acc.real();
}

/// R~_{k,m} = (-1)^k omega_k^{(m-k)}(4 g^2). Symmetric in (k, m) through the
/// negative-order identity; at g = 0 it reduces to R itself.
inline double r_tilde(int k, int m, double g) {
    if (k < 0 || m < 0) throw std::domain_error("r_tilde: negative index");
    if (g == 0.0) return k == m ? detail::parity(k) : 0.0;
    return detail::parity(k) * detail::coupling_sign(g, m - k) *
           laguerre_function(k, m - k, 4.0 * g * g);
}

/// Smallest K >= col with 1 - sum_{n<=K} U_{n,col}^2 <= tail. By Cauchy-Schwarz
/// the discarded part of any sum_n c_n U_{n,col} U_{n,other} with |c_n| <= 1
/// is then at most sqrt(tail).
///
/// The summed mass only reaches 1 to round-off (a few 1e-15), so the loop also
/// stops once the column has decayed below tail * 1e-6 for 8 consecutive rows.
inline int u_column_cutoff(int col, double g, double tail = 1e-14, int max_extra = 200000) {
    if (g == 0.0) return col;
    double mass = 0.0;
    int quiet = 0;
    for (int n = 0; n <= col + max_extra; ++n) {
        const double u = u_element(n, col, g);
        mass += u * u;
        if (n < col) continue;
        if (1.0 - mass <= tail) return n;
        quiet = (u * u < tail * 1e-6) ? quiet + 1 : 0;
        if (quiet >= 8) return n;
    }
    throw std::runtime_error("u_column_cutoff: column mass did not reach 1 - tail");
}

/// sum_{n=0}^{K} (-1)^n U_{n,k} U_{n,m}: the defining series of R~ truncated at K.
inline double r_tilde_oracle_sum(int k, int m, double g, int K) {
    if (k < 0 || m < 0 || K < 0) throw std::domain_error("r_tilde_oracle_sum: negative index");
    double sum = 0.0;
    for (int n = 0; n <= K; ++n) sum += detail::parity(n) * u_element(n, k, g) * u_element(n, m, g);
    return sum;
}

/// Same series with K chosen so that both columns carry mass >= 1 - 1e-14.
inline double r_tilde_oracle_sum(int k, int m, double g) {
    const int K = std::max(u_column_cutoff(k, g), u_column_cutoff(m, g));
    return r_tilde_oracle_sum(k, m, g, K);
}

/// Residue-evaluated form
///   (-1)^k e^{-2g^2} sqrt(m!/k!) (2g)^{m-k} sum_i C(k,i) (-1)^i (4g^2)^i / (i+m-k)!
/// with terms of negative factorial argument dropped. Summed in extended
/// precision; valid for k, m <= 40.
inline double r_tilde_oracle_finite_sum(int k, int m, double g) {
    if (k < 0 || m < 0) throw std::domain_error("r_tilde_oracle_finite_sum: negative index");
    if (k > 40 || m > 40) throw std::domain_error("r_tilde_oracle_finite_sum: indices above 40");
    if (g == 0.0) return k == m ? detail::parity(k) : 0.0;

    using ld = long double;
    const ld x = 4.0L * static_cast<ld>(g) * static_cast<ld>(g);
    const ld log_pref = -2.0L * static_cast<ld>(g) * static_cast<ld>(g) +
                        0.5L * (std::lgamma(static_cast<ld>(m) + 1) - std::lgamma(static_cast<ld>(k) + 1)) +
                        (m - k) * std::log(2.0L * std::abs(static_cast<ld>(g)));
    ld sum = 0.0L;
    for (int i = std::max(0, k - m); i <= k; ++i) {
        const ld lt = std::lgamma(static_cast<ld>(k) + 1) - std::lgamma(static_cast<ld>(i) + 1) -
                      std::lgamma(static_cast<ld>(k - i) + 1) + i * std::log(x) -
                      std::lgamma(static_cast<ld>(i + m - k) + 1) + log_pref;
        const ld term = std::exp(lt);
        sum += (i % 2 == 0) ? term : -term;
    }
    return static_cast<double>(detail::parity(k) * detail::coupling_sign(g, m - k) * sum);
}

namespace detail {

// Fills a dense N x N matrix whose (n, n+s) entry is upper(n, s) * omega_n^{(s)}(x)
// and whose (n+s, n) entry is lower(n, s) * omega_n^{(s)}(x), one recurrence
// per order s. Entries match the scalar element functions bit for bit.
template <class Upper, class Lower>
DenseMatrix laguerre_band_fill(int N, double x, Upper upper, Lower lower) {
    DenseMatrix out(N);
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t si) {
        const int s = static_cast<int>(si);
        const auto seq = laguerre_function_sequence(N - 1 - s, s, x);
        for (int n = 0; n + s < N; ++n) {
            out(n, n + s) = upper(n, s) * seq[n];
            if (s > 0) out(n + s, n) = lower(n, s) * seq[n];
        }
    });
    return out;
}

} // namespace detail

/// N x N section of U.
inline DenseMatrix build_dense_u(int N, double g) {
    if (N < 1) throw std::invalid_argument("build_dense_u: size must be positive");
    if (g == 0.0) return DenseMatrix::identity(N);
    return detail::laguerre_band_fill(
        N, g * g,
        [g](int, int s) { return detail::coupling_sign(g, s); },
        [g](int, int s) { return detail::coupling_sign(g, -s) * detail::parity(s); });
}

/// N x N section of R~.
inline DenseMatrix build_dense_rtilde(int N, double g) {
    if (N < 1) throw std::invalid_argument("build_dense_rtilde: size must be positive");
    if (g == 0.0) return DenseMatrix::diagonal(parity_diag(N));
    return detail::laguerre_band_fill(
        N, 4.0 * g * g,
        [g](int n, int s) { return detail::parity(n) * detail::coupling_sign(g, s); },
        [g](int n, int s) {
            // (-1)^{n+s} (-1)^s omega_n^{(s)} from the negative-order identity
            return detail::parity(n + s) * detail::coupling_sign(g, -s) * detail::parity(s);
        });
}

} // namespace jacobi_asym
