#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "catspec/constants.hpp"
#include "catspec/error.hpp"
#include "catspec/signal.hpp"

using namespace catspec;

namespace {

double simpson(auto f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

} // namespace

TEST(Signal, HeatingContrastAtDefaults) {
    ProtocolParams p;
    // 8 R n (2/3 tau_cat + tau_wait) written out by hand
    const double var = 8.0 * 40.0 * 2.88 * 2.88 * (2.0 / 3.0 * 50e-6 + 32e-6);
    EXPECT_NEAR(heating_phase_variance(p), var, 1e-15);
    EXPECT_NEAR(heating_contrast(p), 0.91695, 5e-6);
    p.heating_rate = 0.0;
    EXPECT_DOUBLE_EQ(heating_contrast(p), 1.0);
}

TEST(Signal, HeatingContrastLongerWait) {
    ProtocolParams p;
    p.tau_wait = 64e-6;
    EXPECT_NEAR(heating_contrast(p), std::exp(-4.0 * 40.0 * 2.88 * 2.88 * (2.0 / 3.0 * 50e-6 + 64e-6)), 1e-14);
    EXPECT_NEAR(heating_contrast(p), 0.8788, 5e-5);
    p.tau_wait = 0.0;
    p.tau_cat = 0.0;
    EXPECT_DOUBLE_EQ(heating_contrast(p), 1.0);
}

TEST(Signal, Sinc) {
    EXPECT_DOUBLE_EQ(sinc(0.0), 1.0);
    EXPECT_NEAR(sinc(1e-9), 1.0, 1e-15);
    EXPECT_NEAR(sinc(constants::pi), 0.0, 1e-15);
    EXPECT_NEAR(sinc(2.0), std::sin(2.0) / 2.0, 1e-15);
    EXPECT_DOUBLE_EQ(sinc(-1.3), sinc(1.3));
}

TEST(Signal, PhasesAreSinusoidalInScatterPhase) {
    ProtocolParams p = ProtocolParams::demonstration();
    for (double phi : {0.0, 0.4, 1.1, 2.5}) {
        EXPECT_NEAR(phi_abs(p, phi), 2.0 * p.alpha * p.eta_abs * std::sin(phi), 1e-14);
        EXPECT_NEAR(phi_em_amplitude(p, phi), 2.0 * p.alpha * p.eta_em * std::sin(phi), 1e-14);
    }
}

TEST(Signal, NoScatterOnlyLosesHeatingContrast) {
    ProtocolParams p = ProtocolParams::demonstration();
    const auto e = expectation(p, 0.7, false);
    EXPECT_NEAR(e.sz, -heating_contrast(p), 1e-15);
    EXPECT_NEAR(e.sy, 0.0, 1e-15);
    p.heating_rate = 0.0;
    EXPECT_NEAR(expectation(p, 0.7, false).sz, -1.0, 1e-15);
}

TEST(Signal, NoScatterPlaceholder) {
    const ProtocolParams p = ProtocolParams::demonstration();
    const auto e = expectation(p, 0.7, false);
    EXPECT_NEAR(e.sy, 0.0, 1e-15);
}

TEST(Signal, IsotropicAverageMatchesDirectedIntegral) {
    const ProtocolParams p = ProtocolParams::demonstration();
    for (double phi : {0.3, 1.2, constants::pi / 2.0, 2.2}) {
        const auto avg = expectation(p, phi, true);
        const double sz = 0.5 * simpson([&](double c) { return expectation_directed(p, phi, c).sz; }, -1.0, 1.0, 400);
        const double sy = 0.5 * simpson([&](double c) { return expectation_directed(p, phi, c).sy; }, -1.0, 1.0, 400);
        EXPECT_NEAR(avg.sz, sz, 1e-10);
        EXPECT_NEAR(avg.sy, sy, 1e-10);
    }
}

TEST(Signal, FringePeriodicity) {
    const ProtocolParams p = ProtocolParams::demonstration();
    for (double phi : {0.1, 0.9, 2.0}) {
        const auto a = expectation(p, phi, true);
        const auto b = expectation(p, phi + constants::pi, true);
        EXPECT_NEAR(a.sz, b.sz, 1e-12);
        EXPECT_NEAR(a.sy, -b.sy, 1e-12);
    }
}

TEST(Signal, MaxDetectionProbabilityByScan) {
    const double ratio = 1.0;
    const auto opt = max_detection_probability(ratio);
    double best = 0.0, arg = 0.0;
    for (int i = 0; i <= 200000; ++i) {
        const double phi = 10.0 * i / 200000.0;
        const double x = ratio * phi;
        const double s = x == 0.0 ? 1.0 : std::sin(x) / x;
        const double v = 0.5 * (1.0 - std::cos(phi) * s);
        if (v > best) best = v, arg = phi;
    }
    EXPECT_NEAR(opt.value, best, 1e-8);
    EXPECT_NEAR(opt.phase, arg, 1e-3);
    EXPECT_NEAR(opt.value, 0.60862, 5e-5);
    EXPECT_NEAR(opt.phase, 2.2467, 5e-4);
}

TEST(Signal, SigmaYFactorAtDemonstration) {
    const ProtocolParams p = ProtocolParams::demonstration();
    const auto opt = max_sigma_y_factor(p);
    double best = 0.0;
    for (int i = 0; i <= 100000; ++i) {
        const double phi = constants::pi * i / 100000.0;
        best = std::max(best, std::abs(std::sin(phi_abs(p, phi)) * sinc(phi_em_amplitude(p, phi))));
    }
    EXPECT_NEAR(opt.value, best, 1e-8);
    EXPECT_NEAR(opt.value, 0.3471, 1e-4);
}

TEST(Signal, SigmaYFactorCapForPhysicalRatio) {
    // sweeping alpha with the physical recoil ratio never beats the envelope maximum
    const double ratio = 866.0 / 396.96;
    double cap = 0.0;
    for (int i = 1; i <= 20000; ++i) {
        const double x = 4.0 * i / 20000.0;
        cap = std::max(cap, std::abs(std::sin(x) * sinc(ratio * x)));
    }
    EXPECT_NEAR(cap, 0.4223, 1e-4);
    for (double alpha : {1.0, 2.0, 2.88, 4.0, 6.0}) {
        ProtocolParams p = ProtocolParams::demonstration();
        p.alpha = alpha;
        EXPECT_LE(max_sigma_y_factor(p).value, cap + 1e-6);
    }
}

TEST(Signal, AmplitudeReachableWithoutEmissionRecoil) {
    ProtocolParams p = ProtocolParams::demonstration();
    p.eta_em = 0.0;
    p.eta_abs = std::asin(0.589) / (2.0 * p.alpha);
    const double ay = max_sigma_y_factor(p).value * heating_contrast(p);
    EXPECT_NEAR(max_sigma_y_factor(p).value, 0.589, 1e-9);
    EXPECT_NEAR(ay, 0.54, 0.01);
}

TEST(Signal, FringeCurveAndGrid) {
    const auto grid = phase_grid(8, 0.0, constants::two_pi);
    ASSERT_EQ(grid.size(), 8u);
    EXPECT_NEAR(grid[1], constants::two_pi / 8.0, 1e-15);
    const ProtocolParams p = ProtocolParams::demonstration();
    const auto curve = fringe_curve(p, grid);
    ASSERT_EQ(curve.size(), grid.size());
    EXPECT_NEAR(curve[3].value.sy, expectation(p, grid[3], true).sy, 1e-15);
}

TEST(Signal, Validation) {
    ProtocolParams p;
    p.alpha = -1.0;
    EXPECT_THROW(p.validate(), InvalidParameter);
    p = ProtocolParams{};
    p.branch_blue = 1.5;
    EXPECT_THROW(p.validate(), InvalidParameter);
}
