#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "catspec/error.hpp"
#include "catspec/statistics.hpp"

using namespace catspec;

namespace {

// P(X > threshold) for X ~ Poisson(mean), summed directly.
double poisson_above(double mean, double threshold) {
    double cdf = 0.0;
    for (int k = 0; k <= static_cast<int>(std::floor(threshold)); ++k)
        cdf += std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
    return 1.0 - cdf;
}

double dark_error_oracle(const DetectorModel& d) {
    const double tau = d.metastable_lifetime, w = d.window;
    double err = std::exp(-w / tau) * poisson_above(d.mean_dark, d.threshold);
    const int n = 2000;
    const double h = w / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = i * h;
        const double f = t / w;
        const double mean = d.mean_dark * f + d.mean_bright * (1.0 - f);
        const double v = std::exp(-t / tau) / tau * poisson_above(mean, d.threshold);
        s += (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0)) * v;
    }
    return err + s * h / 3.0;
}

} // namespace

TEST(Statistics, ProjectionNoise) {
    EXPECT_NEAR(projection_noise(0.5, 100), 0.05, 1e-15);
    EXPECT_EQ(projection_noise(0.0, 100), 0.0);
    EXPECT_EQ(projection_noise(1.0, 100), 0.0);
    EXPECT_THROW(projection_noise(0.5, 0), InvalidParameter);
    EXPECT_THROW(projection_noise(1.5, 10), InvalidParameter);
}

TEST(Statistics, ReportFormulas) {
    const auto r = method_report("x", 0.6, 0.4, 1000, 800);
    const double sigma = std::sqrt(0.24 / 1000 + 0.24 / 800);
    EXPECT_EQ(r.n, 800u);
    EXPECT_NEAR(r.mu, 0.2, 1e-15);
    EXPECT_NEAR(r.sigma, sigma, 1e-15);
    EXPECT_NEAR(r.snr, 0.2 / sigma, 1e-12);
    EXPECT_NEAR(r.beta, r.snr / std::sqrt(800.0), 1e-12);
    EXPECT_NEAR(r.shots_3sigma, 9.0 / (r.beta * r.beta), 1e-9);
    EXPECT_TRUE(r.reaches_3sigma);
}

TEST(Statistics, RoundSignificant) {
    EXPECT_DOUBLE_EQ(round_significant(24644.0, 2), 25000.0);
    EXPECT_DOUBLE_EQ(round_significant(0.012345, 3), 0.0123);
    EXPECT_DOUBLE_EQ(round_significant(0.0, 2), 0.0);
}

TEST(Statistics, PublishedTableRecomputed) {
    const double snr[] = {3.022, 10.593, 10.484, 21.863, 7.759};
    const double beta[] = {0.0191, 0.1067, 0.1618, 0.3373, 0.1092};
    const double n3[] = {24644, 790, 344, 79, 755};
    const auto& rows = published_methods();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const auto r = method_report(row.name, row.signal_a, row.signal_b, row.n, row.n);
        EXPECT_NEAR(r.snr, snr[i], 2e-3) << row.name;
        EXPECT_NEAR(r.beta, beta[i], 1e-4) << row.name;
        EXPECT_NEAR(r.shots_3sigma, n3[i], 0.01 * n3[i]) << row.name;
        EXPECT_NEAR(r.beta, row.beta, row.beta_err) << row.name;
    }
}

TEST(Statistics, DarkDetectionErrorMatchesOracle) {
    const DetectorModel det;
    const double oracle = dark_error_oracle(det);
    EXPECT_NEAR(oracle, 0.00307, 1e-4);
    RngStream rng(31, 0);
    const std::size_t shots = 400000;
    const double rate = simulated_error_rate(false, det, shots, rng);
    EXPECT_NEAR(rate, oracle, 4.0 * std::sqrt(oracle / shots));
}

TEST(Statistics, BrightDetectionErrorNegligible) {
    const DetectorModel det;
    RngStream rng(32, 0);
    EXPECT_LT(simulated_error_rate(true, det, 100000, rng), 1e-4);
    EXPECT_NEAR(det.decay_probability(), -std::expm1(-5e-3 / 1.168), 1e-15);
}

TEST(Statistics, ZeroRecoilGivesNoSignal) {
    const auto reports = compare_methods_analytic(MethodsConfig::zero_recoil());
    for (const auto& r : reports) EXPECT_NEAR(r.snr, 0.0, 1e-9) << r.name;
}

TEST(Statistics, DegenerateNoiseThrows) {
    EXPECT_THROW(method_report("flat", 0.0, 1.0, 10, 10), DegenerateNoise);
    EXPECT_THROW(method_report("flat", 1.0, 1.0, 10, 10), DegenerateNoise);
}

TEST(Statistics, VanishingSignal) {
    const auto r = method_report("zero", 0.3, 0.3, 100, 100);
    EXPECT_EQ(r.beta, 0.0);
    EXPECT_FALSE(r.reaches_3sigma);
    EXPECT_TRUE(std::isinf(r.shots_3sigma));
}

TEST(Statistics, DirectSignalMatchesIntegral) {
    const MethodsConfig cfg;
    const auto probs = method_probabilities(cfg);
    const double ea = cfg.protocol.eta_abs, ee = cfg.protocol.eta_em;
    const int n = 2000;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double c = -1.0 + 2.0 * i / n;
        const double k2 = (ea + ee * c) * (ea + ee * c);
        s += (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0)) * k2 * std::exp(-k2);
    }
    const double pe = 0.5 * s * (2.0 / n) / 3.0;
    const double bg = cfg.direct_background;
    EXPECT_NEAR(probs[0][0], bg + (1.0 - bg) * pe, 1e-10);
    EXPECT_DOUBLE_EQ(probs[0][1], bg);
}

TEST(Statistics, AnalyticOrdering) {
    const auto r = compare_methods_analytic(MethodsConfig{});
    ASSERT_EQ(r.size(), 5u);
    EXPECT_NEAR(r[0].beta, 0.0374, 5e-4);
    EXPECT_NEAR(r[3].beta, 0.4748, 5e-4);
    EXPECT_GT(r[3].beta, r[2].beta);
    EXPECT_GT(r[2].beta, r[1].beta);
    EXPECT_GT(r[1].beta, r[0].beta);
    EXPECT_GT(r[3].beta / r[0].beta, 10.0);
}

TEST(Statistics, CsvHeader) {
    std::ostringstream os;
    write_reports_csv(os, {method_report("m", 0.6, 0.4, 100, 100)});
    const std::string text = os.str();
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "method,n,signal_a,signal_b,mu,sigma,snr,beta,shots_3sigma,shots_3sigma_rounded");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST(Statistics, DetectorValidation) {
    DetectorModel d;
    d.mean_bright = 5.0;
    EXPECT_THROW(d.validate(), InvalidParameter);
}
