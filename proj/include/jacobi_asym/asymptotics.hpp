// asymptotics.hpp - First-order eigenvalue asymptote, the diagonal correction
// from the transformed perturbation, remainder sums s_n with certified tails,
// residual tables and power-law decay fits.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "jacobi_asym/eigensolve.hpp"
#include "jacobi_asym/model.hpp"
#include "jacobi_asym/specfun.hpp"

namespace jacobi_asym {

/// n - g^2 + (c1 + c2)/2.
inline double first_order(int n, const ModelParams& p) {
    if (n < 0) throw std::domain_error("first_order: negative index");
    return n - p.g * p.g + p.mean_shift();
}

/// ((c1 - c2)/2) R~_{n,n} = ((c1 - c2)/2) (-1)^n omega_n^{(0)}(4 g^2).
inline double diagonal_correction(int n, const ModelParams& p) {
    if (n < 0) throw std::domain_error("diagonal_correction: negative index");
    if (p.c1 == p.c2) return 0.0;
    return p.half_split() * r_tilde(n, n, p.g);
}

struct RemainderSum {
    int n = 0;
    double s_n = 0.0;        // sqrt of the summed part
    double tail_bound = 0.0; // true s_n lies in [s_n, s_n + tail_bound]
    int orders = 0;          // |k - n| <= orders were summed
};

/// s_n = sqrt( sum_{k != n} R~_{k,n}^2 / (n-k)^2 ) for n in [n_lo, n_hi].
///
/// Terms are grouped by offset j = |k - n|: the k = n + j term is
/// omega_n^{(j)}(4g^2)^2 and the k = n - j term is omega_{n-j}^{(j)}(4g^2)^2, so
/// one order-j recurrence serves every n. Since column n of R~ has unit norm,
/// the terms with offset > J add at most (1 - summed mass)/(J+1)^2; offsets are
/// added until that bound is below eps_tail^2 for every n.
inline std::vector<RemainderSum> remainder_s_range(int n_lo, int n_hi, double g, double eps_tail = 1e-6) {
    if (n_lo < 0 || n_hi < n_lo) throw std::invalid_argument("remainder_s_range: need 0 <= n_lo <= n_hi");
    if (!(eps_tail > 0.0)) throw std::invalid_argument("remainder_s_range: eps_tail must be positive");
    const std::size_t count = static_cast<std::size_t>(n_hi - n_lo + 1);
    std::vector<RemainderSum> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i].n = n_lo + static_cast<int>(i);
    if (g == 0.0) return out;

    const double x = 4.0 * g * g;
    const double target = eps_tail * eps_tail;
    std::vector<double> sum(count, 0.0), mass(count, 0.0);
    std::vector<bool> done(count, false);
    {
        const auto diag = laguerre_function_sequence(n_hi, 0, x);
        for (std::size_t i = 0; i < count; ++i) mass[i] = diag[n_lo + i] * diag[n_lo + i];
    }
    std::size_t remaining = count;
    for (int j = 1; remaining > 0; ++j) {
        const auto seq = laguerre_function_sequence(n_hi, j, x);
        const double inv_j2 = 1.0 / (static_cast<double>(j) * j);
        const double next_j2 = (j + 1.0) * (j + 1.0);
        for (std::size_t i = 0; i < count; ++i) {
            if (done[i]) continue;
            const int n = n_lo + static_cast<int>(i);
            double terms = seq[n] * seq[n];
            if (j <= n) terms += seq[n - j] * seq[n - j];
            sum[i] += terms * inv_j2;
            mass[i] += terms;
            const double missing = std::max(0.0, 1.0 - mass[i]) / next_j2;
            if (missing < target) {
                done[i] = true;
                --remaining;
                out[i].s_n = std::sqrt(sum[i]);
                out[i].tail_bound = std::sqrt(missing);
                out[i].orders = j;
            }
        }
    }
    return out;
}

inline RemainderSum remainder_s(int n, double g, double eps_tail = 1e-6) {
    return remainder_s_range(n, n, g, eps_tail).front();
}

struct AsymptoticRow {
    int n = 0;
    double lambda = 0.0;
    double first_order = 0.0;
    double diag_corr = 0.0;
    double r1 = 0.0; // lambda - first_order
    double r2 = 0.0; // r1 - diag_corr
    double s_n = 0.0;
    double s_n_tail_bound = 0.0;
    bool converged = false;
};

/// Rows for n in [n_lo, n_hi] comparing converged eigenvalues with the
/// asymptotic formula. g = 0 is allowed; the remainder is then identically 0.
inline std::vector<AsymptoticRow> residual_table(const ModelParams& p, int n_lo, int n_hi, double tol,
                                                 double eps_tail = 1e-6) {
    const SpectrumSlice slice = converged_spectrum(p, {n_lo, n_hi, tol});
    const auto rem = remainder_s_range(n_lo, n_hi, p.g, eps_tail);
    std::vector<AsymptoticRow> rows(slice.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        AsymptoticRow& r = rows[i];
        r.n = n_lo + static_cast<int>(i);
        r.lambda = slice.values[i];
        r.converged = slice.converged[i];
        r.first_order = first_order(r.n, p);
        r.diag_corr = diagonal_correction(r.n, p);
        r.r1 = r.lambda - r.first_order;
        r.r2 = r.r1 - r.diag_corr;
        r.s_n = rem[i].s_n;
        r.s_n_tail_bound = rem[i].tail_bound;
    }
    return rows;
}

struct DecayFit {
    double C = 0.0;
    double alpha = 0.0; // value ~ C n^{-alpha}
    double residual_rms = 0.0;
    int n_first = 0;
    int n_last = 0;
    int points = 0;
    int dropped = 0; // non-positive or below-floor values left out
};

/// Least squares of ln(value) against ln(n). Values <= floor are dropped.
inline DecayFit fit_decay(const std::vector<std::pair<int, double>>& samples, double floor = 0.0) {
    std::vector<std::pair<double, double>> pts;
    DecayFit fit;
    for (const auto& [n, v] : samples) {
        if (n <= 0 || !(v > floor) || !std::isfinite(v)) {
            ++fit.dropped;
            continue;
        }
        pts.emplace_back(std::log(static_cast<double>(n)), std::log(v));
        if (fit.points == 0) fit.n_first = n;
        fit.n_last = n;
        ++fit.points;
    }
    if (pts.size() < 8) throw std::invalid_argument("fit_decay: fewer than 8 usable points");

    double mx = 0.0, my = 0.0;
    for (const auto& [lx, ly] : pts) {
        mx += lx;
        my += ly;
    }
    mx /= pts.size();
    my /= pts.size();
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [lx, ly] : pts) {
        sxx += (lx - mx) * (lx - mx);
        sxy += (lx - mx) * (ly - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_decay: all points share one n");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    fit.alpha = -slope;
    fit.C = std::exp(intercept);
    double ss = 0.0;
    for (const auto& [lx, ly] : pts) {
        const double r = ly - (intercept + slope * lx);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / pts.size());
    return fit;
}

struct BlockMax {
    int level = 0; // block [2^level, 2^{level+1})
    double max = 0.0;
    int count = 0;
};

/// Maxima of |value| over dyadic blocks [2^j, 2^{j+1}), in increasing j.
inline std::vector<BlockMax> dyadic_block_maxima(const std::vector<std::pair<int, double>>& samples) {
    std::map<int, BlockMax> blocks;
    for (const auto& [n, v] : samples) {
        if (n <= 0) continue;
        const int level = static_cast<int>(std::floor(std::log2(static_cast<double>(n))));
        BlockMax& b = blocks[level];
        b.level = level;
        b.max = std::max(b.max, std::abs(v));
        ++b.count;
    }
    std::vector<BlockMax> out;
    for (auto& [level, b] : blocks) out.push_back(b);
    return out;
}

/// True when block maxima are non-increasing (or strictly decreasing) over
/// levels [from_level, to_level]; blocks outside the range are ignored.
inline bool block_maxima_decrease(const std::vector<BlockMax>& blocks, int from_level, int to_level,
                                  bool strict = false) {
    const BlockMax* prev = nullptr;
    for (const auto& b : blocks) {
        if (b.level < from_level || b.level > to_level) continue;
        if (prev && (strict ? !(b.max < prev->max) : b.max > prev->max)) return false;
        prev = &b;
    }
    return true;
}

/// Smallest index n0 in the slice such that converged values are strictly
/// increasing from n0 to the end (simple spectrum from n0 on).
inline int simplicity_onset(const SpectrumSlice& slice) {
    int onset = slice.n_hi;
    for (int i = static_cast<int>(slice.size()) - 1; i > 0; --i) {
        if (!(slice.values[i - 1] < slice.values[i]) || !slice.converged[i - 1]) break;
        onset = slice.n_lo + i - 1;
    }
    return onset;
}

} // namespace jacobi_asym
