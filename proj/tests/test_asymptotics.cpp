#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "jacobi_asym/asymptotics.hpp"
#include "oracles.hpp"

using namespace jacobi_asym;

TEST(FirstOrder, Examples) {
    EXPECT_DOUBLE_EQ(first_order(0, {0.5, 0.0, 0.0}), -0.25);
    for (int n = 0; n < 20; ++n) EXPECT_EQ(first_order(n, {0.0, 0.0, 0.0}), n);
    EXPECT_DOUBLE_EQ(first_order(10, {0.5, 1.0, 0.0}), 10.25);
    EXPECT_THROW(first_order(-1, {0.5, 0.0, 0.0}), std::domain_error);
}

TEST(DiagonalCorrection, EqualShiftsVanish) {
    for (int n = 0; n < 50; ++n) EXPECT_EQ(diagonal_correction(n, {0.7, 0.4, 0.4}), 0.0);
}

TEST(DiagonalCorrection, GroundState) {
    const ModelParams p{0.6, 1.0, -0.5};
    EXPECT_NEAR(diagonal_correction(0, p), 0.75 * std::exp(-2 * 0.36), 1e-15);
}

TEST(DiagonalCorrection, QuarterPowerEnvelope) {
    const ModelParams p{0.5, 1.0, 0.0};
    double lo = INFINITY, hi = 0.0;
    for (int b = 10; b < 10000; b *= 2) {
        double mx = 0.0;
        for (int n = b; n < 2 * b; ++n) mx = std::max(mx, std::abs(diagonal_correction(n, p)) * std::pow(n, 0.25));
        lo = std::min(lo, mx);
        hi = std::max(hi, mx);
    }
    EXPECT_LT(hi, 1.0);
    EXPECT_GT(lo, 0.1);
    EXPECT_LT(hi / lo, 2.0);
}

TEST(RemainderS, VanishesAtZeroCoupling) {
    for (const auto& r : remainder_s_range(0, 30, 0.0)) {
        EXPECT_EQ(r.s_n, 0.0);
        EXPECT_EQ(r.tail_bound, 0.0);
    }
}

TEST(RemainderS, SmallCouplingLimit) {
    // the dominant |k - n| = 1 terms scale linearly in g
    for (int n : {0, 5, 50}) {
        const double a = remainder_s(n, 1e-4).s_n, b = remainder_s(n, 1e-6).s_n;
        EXPECT_LT(a, 1e-2);
        EXPECT_NEAR(b / a, 1e-2, 1e-5);
    }
}

TEST(RemainderS, AgreesWithBruteForce) {
    const double g = 0.5;
    const auto rows = remainder_s_range(0, 200, g, 1e-9);
    for (int n = 0; n <= 200; ++n) {
        const double brute = std::sqrt(oracle::remainder_sq_brute(n, g));
        EXPECT_NEAR(rows[n].s_n, brute, 1e-8) << n;
    }
}

TEST(RemainderS, BruteForceInsideCertifiedInterval) {
    const double g = 0.7;
    const auto rows = remainder_s_range(0, 120, g);
    for (int n = 0; n <= 120; n += 3) {
        const double brute = std::sqrt(oracle::remainder_sq_brute(n, g));
        EXPECT_GE(brute, rows[n].s_n - 1e-12) << n;
        EXPECT_LE(brute, rows[n].s_n + rows[n].tail_bound + 1e-12) << n;
    }
}

TEST(RemainderS, ScalarMatchesRange) {
    const auto rows = remainder_s_range(10, 40, 0.8);
    EXPECT_EQ(remainder_s(25, 0.8).s_n, rows[15].s_n);
}

TEST(RemainderS, DecaysToZero) {
    const auto rows = remainder_s_range(16, 4096, 0.5);
    std::vector<std::pair<int, double>> samples;
    for (const auto& r : rows) samples.emplace_back(r.n, r.s_n);
    const auto blocks = dyadic_block_maxima(samples);
    EXPECT_TRUE(block_maxima_decrease(blocks, 4, 12, true));
    const auto fit = fit_decay(samples);
    EXPECT_GE(fit.alpha, 1.0 / 16.0);
    EXPECT_NEAR(fit.alpha, 0.25, 0.05);
}

TEST(RemainderS, RejectsBadArguments) {
    EXPECT_THROW(remainder_s_range(5, 3, 0.5), std::invalid_argument);
    EXPECT_THROW(remainder_s_range(0, 3, 0.5, 0.0), std::invalid_argument);
}

TEST(ResidualTable, ExactSolvableCollapse) {
    const double tol = 1e-9;
    for (double g : {0.4, 1.1}) {
        const auto rows = residual_table({g, 0.3, 0.3}, 0, 50, tol);
        for (const auto& r : rows) {
            EXPECT_TRUE(r.converged);
            EXPECT_EQ(r.r1, r.r2);
            EXPECT_LT(std::abs(r.r1), 10 * tol) << r.n;
        }
    }
}

TEST(ResidualTable, FirstOrderConvergence) {
    const auto rows = residual_table({0.5, 1.0, 0.0}, 16, 2047, 1e-9);
    std::vector<std::pair<int, double>> r1, abs_r1;
    for (const auto& r : rows) {
        EXPECT_TRUE(r.converged);
        EXPECT_TRUE(std::isfinite(r.r1) && std::isfinite(r.r2));
        EXPECT_GE(r.s_n, 0.0);
        EXPECT_GE(r.s_n_tail_bound, 0.0);
        r1.emplace_back(r.n, r.r1);
        abs_r1.emplace_back(r.n, std::abs(r.r1));
    }
    EXPECT_TRUE(block_maxima_decrease(dyadic_block_maxima(r1), 4, 10));
    EXPECT_GE(fit_decay(abs_r1, 1e-8).alpha, 1.0 / 16.0);
}

TEST(ResidualTable, SecondOrderTermShrinksResidual) {
    const auto rows = residual_table({0.5, 1.0, 0.0}, 64, 512, 1e-10);
    std::vector<double> ratio;
    for (const auto& r : rows) ratio.push_back(std::abs(r.r2) / std::abs(r.r1));
    std::nth_element(ratio.begin(), ratio.begin() + ratio.size() / 2, ratio.end());
    EXPECT_LT(ratio[ratio.size() / 2], 0.5);
}

TEST(FitDecay, ExactPowerLaw) {
    std::vector<std::pair<int, double>> s;
    for (int n = 1; n <= 1000; n += 7) s.emplace_back(n, 3.0 * std::pow(n, -0.25));
    const auto fit = fit_decay(s);
    EXPECT_NEAR(fit.alpha, 0.25, 1e-10);
    EXPECT_NEAR(fit.C, 3.0, 1e-9);
    EXPECT_LT(fit.residual_rms, 1e-12);
    EXPECT_EQ(fit.n_first, 1);
    EXPECT_EQ(fit.dropped, 0);
}

TEST(FitDecay, DropsFloorAndNonPositive) {
    std::vector<std::pair<int, double>> s;
    for (int n = 1; n <= 20; ++n) s.emplace_back(n, std::pow(n, -1.0));
    s.emplace_back(21, 0.0);
    s.emplace_back(22, -1.0);
    s.emplace_back(23, 1e-12);
    const auto fit = fit_decay(s, 1e-9);
    EXPECT_EQ(fit.dropped, 3);
    EXPECT_EQ(fit.points, 20);
    EXPECT_NEAR(fit.alpha, 1.0, 1e-12);
}

TEST(FitDecay, NeedsEightPoints) {
    std::vector<std::pair<int, double>> s;
    for (int n = 1; n <= 7; ++n) s.emplace_back(n, 1.0 / n);
    EXPECT_THROW(fit_decay(s), std::invalid_argument);
}

TEST(DyadicBlocks, MaximaAndMonotonicity) {
    std::vector<std::pair<int, double>> s{{1, 5.0}, {2, -4.0}, {3, 1.0}, {4, 3.0}, {7, -3.5}, {8, 1.0}, {0, 100.0}};
    const auto blocks = dyadic_block_maxima(s);
    ASSERT_EQ(blocks.size(), 4u);
    EXPECT_EQ(blocks[0].level, 0);
    EXPECT_EQ(blocks[1].max, 4.0);
    EXPECT_EQ(blocks[1].count, 2);
    EXPECT_EQ(blocks[2].max, 3.5);
    EXPECT_TRUE(block_maxima_decrease(blocks, 0, 3));
    EXPECT_TRUE(block_maxima_decrease(blocks, 0, 3, true));
    std::vector<std::pair<int, double>> flat{{4, 1.0}, {8, 1.0}};
    EXPECT_TRUE(block_maxima_decrease(dyadic_block_maxima(flat), 0, 5));
    EXPECT_FALSE(block_maxima_decrease(dyadic_block_maxima(flat), 0, 5, true));
}

TEST(SimplicityOnset, ReportsStartOfStrictIncrease) {
    SpectrumSlice slice;
    slice.n_lo = 3;
    slice.n_hi = 8;
    slice.values = {1.0, 1.0, 0.5, 2.0, 3.0, 4.0};
    slice.converged.assign(6, true);
    EXPECT_EQ(simplicity_onset(slice), 5);
}

TEST(SimplicityOnset, ModelSpectrumIsSimple) {
    const auto slice = converged_spectrum({0.5, 1.0, 0.0}, {0, 300, 1e-9});
    EXPECT_EQ(simplicity_onset(slice), 0);
}
