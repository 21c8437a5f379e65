// eigensolve.hpp - Index-addressed eigenvalues of symmetric tridiagonal
// matrices by Sturm-sequence bisection, and truncation-converged spectra of
// the Jacobi operator A(g, c1, c2).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "jacobi_asym/matrix.hpp"
#include "jacobi_asym/model.hpp"
#include "jacobi_asym/parallel.hpp"

namespace jacobi_asym {

/// Gershgorin enclosure [lo, hi] of the spectrum.
inline std::pair<double, double> gershgorin_bounds(const Tridiagonal& t) {
    const std::size_t n = t.size();
    if (n == 0) throw std::invalid_argument("gershgorin_bounds: empty matrix");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(t.off[i - 1]);
        if (i + 1 < n) r += std::abs(t.off[i]);
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
    }
    return {lo, hi};
}

/// Number of eigenvalues strictly below x.
///
/// Pivots q_0 = d_0 - x, q_i = d_i - x - e_{i-1}^2 / q_{i-1}; the count is the
/// number of negative pivots. A pivot smaller in magnitude than
/// eps * scale is replaced by +-(eps * scale), with exact zero taken as
/// positive.
inline int sturm_count(const Tridiagonal& t, double x) {
    const std::size_t n = t.size();
    if (n == 0) return 0;
    double scale = std::abs(x);
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(t.diag[i]));
    for (std::size_t i = 0; i + 1 < n; ++i) scale = std::max(scale, std::abs(t.off[i]));
    const double pivmin = std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);

    int count = 0;
    double q = t.diag[0] - x;
    for (std::size_t i = 0;; ++i) {
        if (std::abs(q) < pivmin) q = (q < 0.0) ? -pivmin : pivmin;
        if (q < 0.0) ++count;
        if (i + 1 == n) break;
        q = (t.diag[i + 1] - x) - t.off[i] * t.off[i] / q;
    }
    return count;
}

/// Eigenvalue number n (0-based, ascending) by bisection until the bracket
/// is narrower than tol or can no longer be split in double precision.
/// A diagonal matrix returns its n-th smallest entry exactly.
inline double eigenvalue_by_index(const Tridiagonal& t, int n, double tol) {
    if (n < 0 || static_cast<std::size_t>(n) >= t.size())
        throw std::out_of_range("eigenvalue_by_index: index out of range");
    if (!(tol > 0.0)) throw std::invalid_argument("eigenvalue_by_index: tol must be positive");
    if (std::all_of(t.off.begin(), t.off.end(), [](double e) { return e == 0.0; })) {
        std::vector<double> d = t.diag;
        std::nth_element(d.begin(), d.begin() + n, d.end());
        return d[n];
    }
    auto [lo, hi] = gershgorin_bounds(t);
    // widen slightly so that count(lo) == 0 and count(hi) == N hold strictly
    const double pad = 2.0 * std::numeric_limits<double>::epsilon() * std::max({std::abs(lo), std::abs(hi), 1.0});
    lo -= pad;
    hi += pad;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(t, mid) <= n) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// All eigenvalues in index order, each to bracket width tol.
inline std::vector<double> eigenvalues(const Tridiagonal& t, double tol) {
    std::vector<double> out(t.size());
    parallel_for(t.size(), [&](std::size_t i) { out[i] = eigenvalue_by_index(t, static_cast<int>(i), tol); });
    return out;
}

struct SpectralRequest {
    int n_lo = 0;
    int n_hi = 0;
    double tol = 1e-8; // absolute eigenvalue tolerance

    void validate() const {
        if (n_lo < 0 || n_hi < n_lo) throw std::invalid_argument("SpectralRequest: need 0 <= n_lo <= n_hi");
        if (n_hi - n_lo > 100000) throw std::invalid_argument("SpectralRequest: at most 1e5 indices");
        if (!(tol >= 1e-12)) throw std::invalid_argument("SpectralRequest: tol must be >= 1e-12");
    }
};

struct SpectrumSlice {
    int n_lo = 0;
    int n_hi = 0;
    std::vector<double> values;   // lambda_n for n = n_lo..n_hi
    std::vector<int> truncation;  // section size whose value is reported
    std::vector<bool> converged;
    std::vector<double> est_error; // |lambda_n(N) - lambda_n(N/2)|

    std::size_t size() const noexcept { return values.size(); }
    bool all_converged() const noexcept {
        return std::all_of(converged.begin(), converged.end(), [](bool c) { return c; });
    }
    int max_truncation() const noexcept {
        return truncation.empty() ? 0 : *std::max_element(truncation.begin(), truncation.end());
    }
};

inline constexpr int kMaxTruncation = 1 << 21;

/// lambda_n(A) for n in [n_lo, n_hi]. Sections start at max(2 n_hi + 64, 256)
/// and double until consecutive sections agree to req.tol for every index;
/// indices still moving at kMaxTruncation are reported unconverged.
inline SpectrumSlice converged_spectrum(const ModelParams& p, const SpectralRequest& req,
                                        int max_truncation = kMaxTruncation) {
    p.validate();
    req.validate();
    const std::size_t count = static_cast<std::size_t>(req.n_hi - req.n_lo + 1);
    const double solve_tol = std::max(req.tol * 0.05, 1e-14);

    SpectrumSlice out;
    out.n_lo = req.n_lo;
    out.n_hi = req.n_hi;
    out.values.assign(count, 0.0);
    out.truncation.assign(count, 0);
    out.converged.assign(count, false);
    out.est_error.assign(count, std::numeric_limits<double>::infinity());

    int N = std::max(2 * req.n_hi + 64, 256);
    std::vector<double> previous(count);
    {
        const Tridiagonal t = build_A(p, N);
        parallel_for(count, [&](std::size_t i) {
            previous[i] = eigenvalue_by_index(t, req.n_lo + static_cast<int>(i), solve_tol);
        });
        out.values = previous;
        out.truncation.assign(count, N);
    }

    std::vector<std::size_t> pending(count);
    for (std::size_t i = 0; i < count; ++i) pending[i] = i;
    while (!pending.empty() && 2 * static_cast<long>(N) <= max_truncation) {
        N *= 2;
        const Tridiagonal t = build_A(p, N);
        std::vector<double> current(pending.size());
        parallel_for(pending.size(), [&](std::size_t j) {
            current[j] = eigenvalue_by_index(t, req.n_lo + static_cast<int>(pending[j]), solve_tol);
        });
        std::vector<std::size_t> still;
        for (std::size_t j = 0; j < pending.size(); ++j) {
            const std::size_t i = pending[j];
            const double diff = std::abs(current[j] - previous[i]);
            out.values[i] = current[j];
            out.truncation[i] = N;
            out.est_error[i] = diff;
            if (diff < req.tol) {
                out.converged[i] = true;
            } else {
                previous[i] = current[j];
                still.push_back(i);
            }
        }
        pending = std::move(still);
    }
    return out;
}

} // namespace jacobi_asym
