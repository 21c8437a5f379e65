// matrix.hpp - Symmetric tridiagonal and small dense matrix containers.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace jacobi_asym {

/// Symmetric tridiagonal matrix stored as its diagonal and one off-diagonal.
/// Indexing is 0-based; off[k] couples rows k and k+1.
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    Tridiagonal() = default;
    Tridiagonal(std::vector<double> d, std::vector<double> e)
        : diag(std::move(d)), off(std::move(e)) {
        if (!diag.empty() && off.size() + 1 != diag.size())
            throw std::invalid_argument("Tridiagonal: off-diagonal must have length N-1");
        if (diag.empty() && !off.empty())
            throw std::invalid_argument("Tridiagonal: off-diagonal without diagonal");
    }

    std::size_t size() const noexcept { return diag.size(); }

    /// Leading principal n x n section.
    Tridiagonal leading(std::size_t n) const {
        if (n > size()) throw std::out_of_range("Tridiagonal::leading");
        if (n == 0) return {};
        return {std::vector<double>(diag.begin(), diag.begin() + n),
                std::vector<double>(off.begin(), off.begin() + (n - 1))};
    }
};

/// Row-major square matrix for truncated operator sections.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static DenseMatrix diagonal(std::span<const double> d) {
        DenseMatrix m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    static DenseMatrix from_tridiagonal(const Tridiagonal& t) {
        DenseMatrix m(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) m(i, i) = t.diag[i];
        for (std::size_t i = 0; i + 1 < t.size(); ++i) {
            m(i, i + 1) = t.off[i];
            m(i + 1, i) = t.off[i];
        }
        return m;
    }

    std::size_t rows() const noexcept { return n_; }
    std::size_t cols() const noexcept { return n_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * n_ + j]; }

    std::span<const double> row(std::size_t i) const noexcept { return {a_.data() + i * n_, n_}; }
    std::span<const double> data() const noexcept { return a_; }

    DenseMatrix transpose() const {
        DenseMatrix t(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend DenseMatrix operator+(const DenseMatrix& x, const DenseMatrix& y) {
        check_same(x, y);
        DenseMatrix r(x.n_);
        for (std::size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] + y.a_[k];
        return r;
    }

    friend DenseMatrix operator-(const DenseMatrix& x, const DenseMatrix& y) {
        check_same(x, y);
        DenseMatrix r(x.n_);
        for (std::size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] - y.a_[k];
        return r;
    }

    /// Plain i-k-j product; each output entry is summed sequentially in k.
    friend DenseMatrix operator*(const DenseMatrix& x, const DenseMatrix& y) {
        check_same(x, y);
        const std::size_t n = x.n_;
        DenseMatrix r(n);
        for (std::size_t i = 0; i < n; ++i) {
            double* out = r.a_.data() + i * n;
            for (std::size_t k = 0; k < n; ++k) {
                const double xik = x(i, k);
                if (xik == 0.0) continue;
                const double* yrow = y.a_.data() + k * n;
                for (std::size_t j = 0; j < n; ++j) out[j] += xik * yrow[j];
            }
        }
        return r;
    }

private:
    static void check_same(const DenseMatrix& x, const DenseMatrix& y) {
        if (x.n_ != y.n_) throw std::invalid_argument("DenseMatrix: dimension mismatch");
    }

    std::size_t n_ = 0;
    std::vector<double> a_;
};

/// Largest |a(i,j) - b(i,j)| over the leading block i, j < limit.
inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b, std::size_t limit) {
    limit = std::min({limit, a.rows(), b.rows()});
    double worst = 0.0;
    for (std::size_t i = 0; i < limit; ++i)
        for (std::size_t j = 0; j < limit; ++j)
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

} // namespace jacobi_asym
