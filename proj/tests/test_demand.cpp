#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace freshopt;
using freshopt::testing::simpson;
using freshopt::testing::uniform_in;

namespace {

std::vector<DemandDistribution> all_families() {
    return {DemandDistribution::uniform(0.0, 100.0), DemandDistribution::uniform(20.0, 60.0),
            DemandDistribution::exponential(0.01), DemandDistribution::truncated_normal(50.0, 20.0),
            DemandDistribution::truncated_normal(5.0, 10.0)};
}

}  // namespace

TEST(Demand, RejectsInvalidParameters) {
    EXPECT_THROW(DemandDistribution::uniform(-1.0, 10.0), OutOfRange);
    EXPECT_THROW(DemandDistribution::uniform(10.0, 10.0), OutOfRange);
    EXPECT_THROW(DemandDistribution::exponential(0.0), OutOfRange);
    EXPECT_THROW(DemandDistribution::truncated_normal(50.0, 0.0), OutOfRange);
}

TEST(Demand, UniformCdf) {
    const auto d = DemandDistribution::uniform(0.0, 100.0);
    EXPECT_DOUBLE_EQ(cdf(d, 50.0), 0.5);
    EXPECT_DOUBLE_EQ(cdf(d, -1.0), 0.0);
    EXPECT_DOUBLE_EQ(cdf(d, 150.0), 1.0);
}

TEST(Demand, ExponentialCdfMatchesIntegratedDensity) {
    const auto d = DemandDistribution::exponential(0.01);
    EXPECT_NEAR(cdf(d, 100.0), 1.0 - std::exp(-1.0), 1e-15);
    EXPECT_NEAR(cdf(d, 100.0), 0.6321205588285577, 1e-12);
    const double integrated = simpson([&](double x) { return pdf(d, x); }, 0.0, 100.0);
    EXPECT_NEAR(cdf(d, 100.0), integrated, 1e-10);
}

TEST(Demand, TruncatedNormalCdfMatchesIntegratedDensity) {
    const auto d = DemandDistribution::truncated_normal(30.0, 25.0);
    EXPECT_DOUBLE_EQ(cdf(d, 0.0), 0.0);
    for (double x : {5.0, 30.0, 80.0, 140.0}) {
        EXPECT_NEAR(cdf(d, x), simpson([&](double t) { return pdf(d, t); }, 0.0, x), 1e-10) << x;
    }
}

TEST(Demand, QuantileExamples) {
    const auto u = DemandDistribution::uniform(0.0, 100.0);
    EXPECT_DOUBLE_EQ(quantile(u, 0.8), 80.0);
    EXPECT_NEAR(quantile(u, 13.0 / 18.0), 72.22222222222223, 1e-12);

    const auto e = DemandDistribution::exponential(0.01);
    EXPECT_NEAR(quantile(e, 0.5), 100.0 * std::log(2.0), 1e-10);
    // Bisection on the cdf as an independent inverse.
    double lo = 0.0;
    double hi = 1000.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf(e, mid) < 0.5 ? lo : hi) = mid;
    }
    EXPECT_NEAR(quantile(e, 0.5), 0.5 * (lo + hi), 1e-9);
}

TEST(Demand, QuantileRejectsBoundaryProbabilities) {
    const auto d = DemandDistribution::uniform(0.0, 100.0);
    EXPECT_THROW(quantile(d, 0.0), OutOfRange);
    EXPECT_THROW(quantile(d, 1.0), OutOfRange);
    EXPECT_THROW(quantile(d, -0.2), OutOfRange);
    EXPECT_THROW(quantile(DemandDistribution::truncated_normal(50, 20), 1.0), OutOfRange);
}

TEST(Demand, QuantileRoundTripAllFamilies) {
    for (const auto& d : all_families()) {
        for (int i = 1; i <= 99; ++i) {
            const double q = i / 100.0;
            EXPECT_LE(std::abs(cdf(d, quantile(d, q)) - q), 1e-9) << to_string(d.family()) << " q=" << q;
        }
    }
}

TEST(Demand, Means) {
    EXPECT_DOUBLE_EQ(mean(DemandDistribution::uniform(0.0, 100.0)), 50.0);
    EXPECT_DOUBLE_EQ(mean(DemandDistribution::exponential(0.01)), 100.0);
}

TEST(Demand, TruncatedNormalMeanAgreesWithSimulation) {
    const auto d = DemandDistribution::truncated_normal(50.0, 20.0);
    RandomStream stream(2024);
    const int n = 10'000'000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sample(d, stream);
        sum += x;
        sum_sq += x * x;
    }
    const double m = sum / n;
    const double se = std::sqrt((sum_sq / n - m * m) / n);
    EXPECT_LE(std::abs(m - mean(d)), 3.0 * se);
    // Untruncated mass below zero is ~0.6%, so the mean sits slightly above 50.
    EXPECT_GT(mean(d), 50.0);
}

TEST(Demand, CdfIntegralExamples) {
    const auto u = DemandDistribution::uniform(0.0, 100.0);
    EXPECT_NEAR(cdf_integral(u, 80.0), 32.0, 1e-12);
    EXPECT_NEAR(cdf_integral(u, 42.857), 42.857 * 42.857 / 200.0, 1e-12);
    EXPECT_NEAR(cdf_integral(u, 42.857), 9.1837, 1e-4);
    for (const auto& d : all_families()) {
        EXPECT_EQ(cdf_integral(d, 0.0), 0.0);
    }
}

TEST(Demand, CdfIntegralClosedFormsMatchQuadrature) {
    for (const auto& d : all_families()) {
        for (double a : {0.5, 10.0, 42.857, 80.0, 100.0, 130.0, 400.0}) {
            const double closed = cdf_integral(d, a);
            EXPECT_NEAR(closed, cdf_integral_quadrature(d, a), 1e-9) << to_string(d.family()) << " a=" << a;
            EXPECT_NEAR(closed, simpson([&](double x) { return cdf(d, x); }, 0.0, a, 200000), 1e-7)
                << to_string(d.family()) << " a=" << a;
        }
    }
}

TEST(Demand, CdfIntegralDerivativeIsCdf) {
    RandomStream rng(7);
    for (const auto& d : all_families()) {
        for (int i = 0; i < 50; ++i) {
            const double a = uniform_in(rng, 1.0, 150.0);
            const double h = 1e-4;
            const double fd = (cdf_integral(d, a + h) - cdf_integral(d, a - h)) / (2.0 * h);
            EXPECT_NEAR(fd, cdf(d, a), 1e-6) << to_string(d.family()) << " a=" << a;
        }
    }
}

TEST(Demand, CdfIntegralIsBoundedMonotoneConvex) {
    RandomStream rng(11);
    for (const auto& d : all_families()) {
        for (int i = 0; i < 200; ++i) {
            const double a = uniform_in(rng, 0.0, 300.0);
            const double h = uniform_in(rng, 0.1, 5.0);
            EXPECT_LE(cdf_integral(d, a), a);
            EXPECT_LE(cdf_integral(d, a), cdf_integral(d, a + h));
            const double lo = std::max(0.0, a - h);
            EXPECT_LE(cdf_integral(d, 0.5 * (lo + a + h)), 0.5 * (cdf_integral(d, lo) + cdf_integral(d, a + h)) + 1e-12);
        }
    }
}

TEST(Demand, InverseTransformSample) {
    EXPECT_DOUBLE_EQ(sample_at(DemandDistribution::uniform(0.0, 100.0), 0.5), 50.0);
}

TEST(Demand, SamplingIsDeterministicPerSeed) {
    const auto d = DemandDistribution::truncated_normal(50.0, 20.0);
    RandomStream a(99);
    RandomStream b(99);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(sample(d, a), sample(d, b));
    }
}

TEST(Demand, EmpiricalCdfWithinKolmogorovBound) {
    for (const auto& d : all_families()) {
        RandomStream stream(31337);
        const int n = 1'000'000;
        std::vector<double> xs(n);
        for (auto& x : xs) {
            x = sample(d, stream);
        }
        std::sort(xs.begin(), xs.end());
        double sup = 0.0;
        for (int i = 0; i < n; ++i) {
            const double f = cdf(d, xs[i]);
            sup = std::max({sup, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
        }
        EXPECT_LT(sup, 0.002) << to_string(d.family());
    }
}

TEST(Demand, SampleMeanWithinFourStandardErrors) {
    for (const auto& d : all_families()) {
        RandomStream stream(5);
        const int n = 1'000'000;
        double sum = 0.0;
        double sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = sample(d, stream);
            sum += x;
            sum_sq += x * x;
        }
        const double m = sum / n;
        const double se = std::sqrt((sum_sq / n - m * m) / n);
        EXPECT_LE(std::abs(m - mean(d)), 4.0 * se) << to_string(d.family());
    }
}
