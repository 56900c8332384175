#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "catspec/constants.hpp"
#include "catspec/error.hpp"
#include "catspec/fitting.hpp"
#include "catspec/rng.hpp"

using namespace catspec;

namespace {

WeightedSeries sinusoid_data(double amp, double period, double phase, double offset, std::size_t n) {
    WeightedSeries d;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -constants::pi / 2.0 + constants::two_pi * i / (n - 1.0);
        d.x.push_back(x);
        d.y.push_back(offset + amp * std::sin(constants::two_pi * x / period + phase));
        d.sigma.push_back(0.01);
    }
    return d;
}

} // namespace

TEST(Fitting, SinusoidExactRecovery) {
    const auto d = sinusoid_data(0.32, 2.0 * constants::pi, 0.7, 0.05, 41);
    const auto f = fit_sinusoid(d, 2.0 * constants::pi * 1.1);
    EXPECT_TRUE(f.fit.converged);
    EXPECT_NEAR(f.amplitude, 0.32, 1e-9);
    EXPECT_NEAR(f.period, 2.0 * constants::pi, 1e-9);
    EXPECT_NEAR(f.phase, 0.7, 1e-9);
    EXPECT_NEAR(f.offset, 0.05, 1e-9);
    EXPECT_NEAR(f.fit.chi2, 0.0, 1e-12);
}

TEST(Fitting, SinusoidSignNormalisation) {
    const auto d = sinusoid_data(-0.4, constants::pi, 0.3, 0.0, 41);
    const auto f = fit_sinusoid(d, constants::pi * 0.9);
    EXPECT_NEAR(f.amplitude, 0.4, 1e-9);
    EXPECT_GE(f.phase, 0.0);
    EXPECT_LT(f.phase, constants::two_pi);
    EXPECT_NEAR(std::remainder(f.phase - (0.3 + constants::pi), constants::two_pi), 0.0, 1e-9);
}

TEST(Fitting, GaussianRecovery) {
    WeightedSeries d;
    for (int i = -20; i <= 20; ++i) {
        const double x = 4.0 * i;
        d.x.push_back(x);
        d.y.push_back(0.02 + 0.3 * std::exp(-(x - 1.5) * (x - 1.5) / (2.0 * 15.0 * 15.0)));
        d.sigma.push_back(0.01);
    }
    const auto g = fit_gaussian(d);
    EXPECT_TRUE(g.fit.converged);
    EXPECT_NEAR(g.center, 1.5, 1e-8);
    EXPECT_NEAR(g.width, 15.0, 1e-8);
    EXPECT_NEAR(g.amplitude, 0.3, 1e-9);
    EXPECT_NEAR(g.offset, 0.02, 1e-9);
    EXPECT_NEAR(g.fwhm, fwhm_from_width(15.0), 1e-7);
}

TEST(Fitting, FwhmFromWidth) {
    EXPECT_NEAR(fwhm_from_width(10.0), 23.548, 1e-3);
    EXPECT_NEAR(fwhm_from_width(-10.0), 23.548, 1e-3);
}

TEST(Fitting, GradientVanishesAtOptimum) {
    RngStream rng(5, 0);
    auto d = sinusoid_data(0.3, constants::two_pi, 1.0, 0.0, 41);
    for (auto& y : d.y) y += 0.01 * rng.normal();
    const auto f = fit_sinusoid(d, constants::two_pi);
    const Eigen::VectorXd g = weighted_gradient(sinusoid_model(), d, f.fit.params);
    EXPECT_LT(g.cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Fitting, ErrorsScaleWithSigma) {
    RngStream rng(6, 0);
    auto d = sinusoid_data(0.3, constants::two_pi, 1.0, 0.0, 41);
    for (auto& y : d.y) y += 0.01 * rng.normal();
    auto d2 = d;
    for (auto& s : d2.sigma) s *= 2.0;
    const auto a = fit_sinusoid(d, constants::two_pi);
    const auto b = fit_sinusoid(d2, constants::two_pi);
    EXPECT_NEAR(a.amplitude, b.amplitude, 1e-9);
    EXPECT_NEAR(b.amplitude_err / a.amplitude_err, 2.0, 1e-6);
    EXPECT_NEAR(a.fit.chi2 / b.fit.chi2, 4.0, 1e-6);
}

TEST(Fitting, ReportedErrorMatchesScatter) {
    // the covariance error should describe the spread of refits on fresh noise
    const auto clean = sinusoid_data(0.3, constants::two_pi, 1.0, 0.0, 41);
    RngStream rng(7, 0);
    std::vector<double> amps;
    double reported = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        auto d = clean;
        for (auto& y : d.y) y += 0.01 * rng.normal();
        const auto f = fit_sinusoid(d, constants::two_pi);
        amps.push_back(f.amplitude);
        reported += f.amplitude_err / 200.0;
    }
    double mean = 0, var = 0;
    for (double a : amps) mean += a / amps.size();
    for (double a : amps) var += (a - mean) * (a - mean) / (amps.size() - 1);
    EXPECT_NEAR(std::sqrt(var) / reported, 1.0, 0.3);
}

TEST(Fitting, ValidationRejectsBadSeries) {
    WeightedSeries d{{1, 2, 3}, {1, 2, 3}, {1, 1, 1}};
    EXPECT_THROW(fit_sinusoid(d, 1.0), InvalidParameter);
    WeightedSeries bad{{1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}, {1, 0, 1, 1, 1}};
    EXPECT_THROW(bad.validate(4), InvalidParameter);
}
