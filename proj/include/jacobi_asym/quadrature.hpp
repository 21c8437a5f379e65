// quadrature.hpp - Generalized Gauss-Laguerre rules for the weight x^alpha e^{-x}.

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "jacobi_asym/eigensolve.hpp"
#include "jacobi_asym/specfun.hpp"

namespace jacobi_asym {

struct QuadratureRule {
    int order = 0;
    double alpha = 0.0;
    std::vector<double> nodes;   // strictly increasing, > 0
    std::vector<double> weights; // > 0, summing to Gamma(alpha + 1)

    /// sum_i w_i f(x_i), approximating int_0^inf x^alpha e^{-x} f(x) dx.
    template <class F>
    double integrate(F&& f) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

namespace detail {

// L_n^{(alpha)}(x) for real alpha by the three-term recurrence.
inline double laguerre_real_order(int n, double alpha, double x) {
    double prev = 0.0, cur = 1.0;
    for (int k = 0; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

} // namespace detail

/// Nodes are the eigenvalues of the Golub-Welsch Jacobi matrix
/// (diag 2k+alpha+1, off sqrt(k(k+alpha))), found by bisection to full
/// precision. Weights use
///   w_i = Gamma(n+alpha+1) x_i / (n! (n+alpha)^2 L_{n-1}^{(alpha)}(x_i)^2).
inline QuadratureRule gauss_laguerre(int order, double alpha = 0.0) {
    if (order < 1) throw std::invalid_argument("gauss_laguerre: order must be positive");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("gauss_laguerre: alpha must be >= 0");

    std::vector<double> d(order), e(order > 0 ? order - 1 : 0);
    for (int k = 0; k < order; ++k) d[k] = 2.0 * k + alpha + 1.0;
    for (int k = 1; k < order; ++k) e[k - 1] = std::sqrt(k * (k + alpha));
    const Tridiagonal jacobi(std::move(d), std::move(e));

    QuadratureRule rule;
    rule.order = order;
    rule.alpha = alpha;
    rule.nodes = eigenvalues(jacobi, std::numeric_limits<double>::min());
    rule.weights.resize(order);
    const double log_norm = log_gamma(order + alpha + 1.0) - log_gamma(order + 1.0) -
                            2.0 * std::log(order + alpha);
    for (int i = 0; i < order; ++i) {
        const double x = rule.nodes[i];
        const double prev = detail::laguerre_real_order(order - 1, alpha, x);
        rule.weights[i] = std::exp(log_norm + std::log(x) - 2.0 * std::log(std::abs(prev)));
    }
    return rule;
}

} // namespace jacobi_asym
