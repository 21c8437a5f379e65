// diagonalize.hpp - Finite sections of the successive-diagonalization
// construction for T = D + R~ with D = diag(n):
//
//   D1 = D + diag(R~_{nn}),  R1 = R~ - diag(R~_{nn}),
//   K_{ij} = R~_{ij} / (i - j)  (i != j),  K_{ii} = 0,
//   B = K R~ - diag(R~_{nn}) K,
//
// so that (I+K)T - D1(I+K) = R1 - [D,K] + K R~ - diag(R~_{nn}) K, together with
// numerical checks of the Bessel and Laguerre-function inequalities and of the
// decay of the fixed-offset diagonals of R~.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "jacobi_asym/asymptotics.hpp"
#include "jacobi_asym/matrix.hpp"
#include "jacobi_asym/model.hpp"
#include "jacobi_asym/specfun.hpp"

namespace jacobi_asym {

inline constexpr int kMaxBundleSize = 2048;

struct DiagonalizationBundle {
    int N = 0;
    double g = 0.0;
    std::vector<double> D;  // n
    std::vector<double> D1; // n + R~_{nn}
    DenseMatrix Rt;         // R~ section, off-diagonals within one ulp of build_dense_rtilde
    DenseMatrix R1;
    DenseMatrix K;
    DenseMatrix B;

    DenseMatrix dense_D() const { return DenseMatrix::diagonal(D); }
    DenseMatrix dense_D1() const { return DenseMatrix::diagonal(D1); }
};

namespace detail {

// a / b, nudged by at most one ulp so that the product with b rounds back to a
// whenever such a neighbour exists.
inline double exact_quotient(double a, double b) {
    const double q = a / b;
    if (q * b == a) return q;
    for (double cand : {std::nextafter(q, std::numeric_limits<double>::infinity()),
                        std::nextafter(q, -std::numeric_limits<double>::infinity())})
        if (cand * b == a) return cand;
    return q;
}

} // namespace detail

inline DiagonalizationBundle build_bundle(double g, int N) {
    if (N < 2) throw std::invalid_argument("build_bundle: N must be at least 2");
    if (N > kMaxBundleSize) throw std::invalid_argument("build_bundle: N above " + std::to_string(kMaxBundleSize));
    DiagonalizationBundle b;
    b.N = N;
    b.g = g;
    b.Rt = build_dense_rtilde(N, g);
    b.D.resize(N);
    b.D1.resize(N);
    b.R1 = b.Rt;
    b.K = DenseMatrix(N);
    for (int i = 0; i < N; ++i) {
        b.D[i] = i;
        b.D1[i] = i + b.Rt(i, i);
        b.R1(i, i) = 0.0;
    }
    // When no double q has fl(q (i-j)) == R1_ij, the off-diagonal entry is
    // replaced by fl(K_ij (i-j)), a change of at most one ulp, so that
    // [D, K] = R1 holds exactly on the section.
    for (int i = 0; i < N; ++i) {
        for (int j = i + 1; j < N; ++j) {
            const double diff = static_cast<double>(i - j);
            const double k = detail::exact_quotient(b.R1(i, j), diff);
            const double snapped = k * diff;
            b.K(i, j) = k;
            b.K(j, i) = -k;
            b.R1(i, j) = b.R1(j, i) = snapped;
            b.Rt(i, j) = b.Rt(j, i) = snapped;
        }
    }
    b.B = b.K * b.Rt;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) b.B(i, j) -= b.Rt(i, i) * b.K(i, j);
    return b;
}

struct SimilarityReport {
    double max_abs_defect = 0.0;   // |(I+K)T - D1(I+K) - rhs| on the interior block
    double b_defect = 0.0;         // |(I+K)T - D1(I+K) - B| on the interior block
    double commutator_defect = 0.0; // max |K_ij (i-j) - R1_ij| over all entries
    double antisymmetry_defect = 0.0; // max |K_ij + K_ji|
    int interior = 0;
};

/// Evaluates both sides of the similarity identity on the block i, j < N/2;
/// the trailing rows and columns carry truncation effects of the products.
inline SimilarityReport verify_similarity(const DiagonalizationBundle& b) {
    const int N = b.N;
    SimilarityReport rep;
    rep.interior = N / 2;

    DenseMatrix T = b.Rt;
    for (int i = 0; i < N; ++i) T(i, i) += b.D[i];
    const DenseMatrix IK = DenseMatrix::identity(N) + b.K;

    DenseMatrix lhs = IK * T;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) lhs(i, j) -= b.D1[i] * IK(i, j);

    DenseMatrix rhs = b.K * b.Rt;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            rhs(i, j) += b.R1(i, j) - (b.D[i] * b.K(i, j) - b.K(i, j) * b.D[j]) - b.Rt(i, i) * b.K(i, j);

    rep.max_abs_defect = max_abs_diff(lhs, rhs, rep.interior);
    rep.b_defect = max_abs_diff(lhs, b.B, rep.interior);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            rep.commutator_defect = std::max(rep.commutator_defect,
                                             std::abs(b.K(i, j) * static_cast<double>(i - j) - b.R1(i, j)));
            rep.antisymmetry_defect = std::max(rep.antisymmetry_defect, std::abs(b.K(i, j) + b.K(j, i)));
        }
    }
    return rep;
}

/// Euclidean norm of column n of the K section; equals the remainder sum s_n
/// up to the rows k >= N cut off by the truncation.
inline double s_n_as_k_column(const DiagonalizationBundle& b, int n) {
    if (n < 0 || n >= b.N / 2) throw std::out_of_range("s_n_as_k_column: index outside interior block");
    double sum = 0.0;
    for (int k = 0; k < b.N; ++k) sum += b.K(k, n) * b.K(k, n);
    return std::sqrt(sum);
}

enum class LemmaId { bessel_bound, laguerre_bound, offset_decay };

inline const char* to_string(LemmaId id) {
    switch (id) {
    case LemmaId::bessel_bound: return "bessel_bound";
    case LemmaId::laguerre_bound: return "laguerre_bound";
    case LemmaId::offset_decay: return "offset_decay";
    }
    return "unknown";
}

struct Violation {
    int order = 0;      // s for the Bessel/Laguerre bounds, p for offset decay
    double where = 0.0; // x, n or block level
    double ratio = 0.0;
};

/// Per-order summary for the Laguerre-function bound.
struct SeriesSummary {
    int order = 0;
    double sup = 0.0;       // max of (n+1)^{1/4} |omega_n^{(s)}(x)|
    long argmax = 0;
    double head_max = 0.0;  // max over admissible n < n_max/10
    double tail_max = 0.0;  // max over n_max/10 <= n <= n_max
};

struct BoundCheckReport {
    LemmaId lemma = LemmaId::bessel_bound;
    bool applicable = true;
    long grid_size = 0;
    double max_ratio = 0.0;
    std::vector<Violation> violations;
    std::vector<SeriesSummary> series;

    bool passed() const noexcept { return applicable && violations.empty(); }
};

/// |J_s(x)| <= 2 sqrt(2/(pi x)) (1 + s/x)^s for s = 0..s_max over the grid.
/// bound_scale multiplies the right side; values other than 1 exist to
/// exercise the harness.
inline BoundCheckReport check_bessel_bound(int s_max, const std::vector<double>& x_grid, double bound_scale = 1.0) {
    if (s_max < 0) throw std::invalid_argument("check_bessel_bound: s_max must be >= 0");
    BoundCheckReport rep;
    rep.lemma = LemmaId::bessel_bound;
    for (double x : x_grid) {
        if (!(x > 0.0)) throw std::invalid_argument("check_bessel_bound: grid points must be positive");
        for (int s = 0; s <= s_max; ++s) {
            const double log_bound = std::log(2.0) + 0.5 * std::log(2.0 / (std::numbers::pi * x)) +
                                     s * std::log1p(s / x);
            const double bound = bound_scale * std::exp(log_bound);
            const double value = std::abs(bessel_j(s, x));
            const double ratio = value / bound;
            ++rep.grid_size;
            rep.max_ratio = std::max(rep.max_ratio, ratio);
            if (!(value <= bound)) rep.violations.push_back({s, x, ratio});
        }
    }
    return rep;
}

/// q(n) = (n+1)^{1/4} |omega_n^{(s)}(x)| over admissible n (n >= s^16, n <= n_max).
/// A violation is a point of the last decade [n_max/10, n_max] where q exceeds
/// every earlier value; max_ratio is the largest tail_max / head_max.
inline BoundCheckReport check_laguerre_bound(double x, const std::vector<int>& s_list, long n_max) {
    if (!(x > 0.0)) throw std::invalid_argument("check_laguerre_bound: x must be positive");
    if (n_max < 10) throw std::invalid_argument("check_laguerre_bound: n_max must be at least 10");
    BoundCheckReport rep;
    rep.lemma = LemmaId::laguerre_bound;
    const long split = n_max / 10;
    for (int s : s_list) {
        if (s < 0) throw std::invalid_argument("check_laguerre_bound: orders must be >= 0");
        const long double first = std::pow(static_cast<long double>(s), 16);
        if (first > static_cast<long double>(split - 1))
            throw std::invalid_argument("check_laguerre_bound: no admissible n below n_max/10 for s = " +
                                        std::to_string(s));
        const long n_first = static_cast<long>(first);

        SeriesSummary sum;
        sum.order = s;
        NormalizedLaguerre rec(s, x);
        for (long n = 0; n <= n_max; ++n) {
            if (n > 0) rec.advance();
            if (n < n_first) continue;
            const double q = std::pow(n + 1.0, 0.25) * std::abs(rec.value());
            ++rep.grid_size;
            if (n < split) {
                sum.head_max = std::max(sum.head_max, q);
            } else {
                if (q > sum.head_max && q > sum.tail_max) rep.violations.push_back({s, static_cast<double>(n), q / sum.head_max});
                sum.tail_max = std::max(sum.tail_max, q);
            }
            if (q > sum.sup) {
                sum.sup = q;
                sum.argmax = n;
            }
        }
        rep.max_ratio = std::max(rep.max_ratio, sum.tail_max / sum.head_max);
        rep.series.push_back(sum);
    }
    return rep;
}

/// Dyadic-block maxima of |R~_{n,n+p}| for |p| <= p_max over the n_blocks
/// blocks ending at [2^top_level, 2^{top_level+1}). Each successive ratio
/// block_{j+1}/block_j is a grid point; a violation is a ratio above 1
/// (at or above 1 when strict).
inline BoundCheckReport check_offset_decay(double g, int p_max, int n_blocks, int top_level = 10,
                                           bool strict = false) {
    if (p_max < 1) throw std::invalid_argument("check_offset_decay: p_max must be >= 1");
    if (n_blocks < 2) throw std::invalid_argument("check_offset_decay: need at least 2 blocks");
    const int first_level = top_level - n_blocks + 1;
    if (first_level < 0 || top_level > 26) throw std::invalid_argument("check_offset_decay: bad block range");
    BoundCheckReport rep;
    rep.lemma = LemmaId::offset_decay;
    if (g == 0.0) {
        rep.applicable = false;
        return rep;
    }
    const double x = 4.0 * g * g;
    const int n_lo = 1 << first_level;
    const int n_hi = (1 << (top_level + 1)) - 1;
    for (int p = -p_max; p <= p_max; ++p) {
        const int order = std::abs(p);
        const auto seq = laguerre_function_sequence(n_hi + order, order, x);
        std::vector<std::pair<int, double>> samples;
        for (int n = n_lo; n <= n_hi; ++n) {
            // |R~_{n,n+p}| = |omega_{min(n, n+p)}^{(|p|)}(4g^2)|
            const int degree = p >= 0 ? n : n + p;
            samples.emplace_back(n, std::abs(seq[degree]));
        }
        const auto blocks = dyadic_block_maxima(samples);
        for (std::size_t j = 1; j < blocks.size(); ++j) {
            const double ratio = blocks[j].max / blocks[j - 1].max;
            ++rep.grid_size;
            rep.max_ratio = std::max(rep.max_ratio, ratio);
            if (strict ? !(ratio < 1.0) : ratio > 1.0) rep.violations.push_back({p, static_cast<double>(blocks[j].level), ratio});
        }
    }
    return rep;
}

} // namespace jacobi_asym
