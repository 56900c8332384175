#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "catspec/constants.hpp"
#include "catspec/error.hpp"
#include "catspec/lineprofile.hpp"

using namespace catspec;

TEST(LineProfile, WignerKnownValues) {
    EXPECT_NEAR(wigner_3j(1, 1, 2, 1, -1, 0), 1.0 / std::sqrt(6.0), 1e-14);
    EXPECT_NEAR(wigner_3j(1, 1, 0, 1, -1, 0), 1.0 / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(wigner_3j(2, 2, 0, 0, 0, 0), -1.0 / std::sqrt(3.0), 1e-14);
    EXPECT_NEAR(wigner_3j(2, 2, 2, 0, 0, 0), 0.0, 1e-14);
    EXPECT_EQ(wigner_3j(1, 1, 2, 1, 1, 0), 0.0); // m's do not sum to zero
    EXPECT_EQ(wigner_3j(1, 1, 6, 1, -1, 0), 0.0); // triangle rule
}

TEST(LineProfile, WignerSumRule) {
    // sum over m1, m2 of (j1 j2 j3; m1 m2 m3)^2 = 1 / (2 j3 + 1)
    for (int two_m3 : {-1, 1}) {
        double s = 0.0;
        for (int m1 = -3; m1 <= 3; m1 += 2)
            for (int m2 = -2; m2 <= 2; m2 += 2)
                if (m1 + m2 + two_m3 == 0) s += std::pow(wigner_3j(3, 2, 1, m1, m2, two_m3), 2);
        EXPECT_NEAR(s, 0.5, 1e-14);
    }
}

TEST(LineProfile, ZeemanShiftsFromLandeFactors) {
    const SpectralModel model;
    const auto comps = zeeman_components(model);
    EXPECT_EQ(comps.size(), 6u);
    const double mu_b = 1.39962449e6 * model.b_field; // Hz
    std::vector<double> expected;
    for (int ml2 = -3; ml2 <= 3; ml2 += 2)
        for (int mu2 = -1; mu2 <= 1; mu2 += 2)
            if (std::abs(mu2 - ml2) <= 2) expected.push_back(mu_b * (2.0 / 3.0 * mu2 / 2.0 - 0.8 * ml2 / 2.0));
    std::vector<double> got;
    double wsum = 0.0;
    for (const auto& c : comps) got.push_back(c.detuning), wsum += c.weight;
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    ASSERT_EQ(got.size(), expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expected[i], 1.0);
    EXPECT_NEAR(wsum, 1.0, 1e-14);
    EXPECT_NEAR(got.back(), 4.973e6, 2e3);
    EXPECT_NEAR(got.front(), -4.973e6, 2e3);
}

TEST(LineProfile, ZeemanWeights) {
    const auto comps = zeeman_components(SpectralModel{});
    for (const auto& c : comps) {
        if (std::abs(c.two_m_lower) == 3) EXPECT_NEAR(c.weight, 0.25, 1e-12);
        else if (c.two_m_upper - c.two_m_lower == 0) EXPECT_NEAR(c.weight, 1.0 / 6.0, 1e-12);
        else EXPECT_NEAR(c.weight, 1.0 / 12.0, 1e-12);
    }
}

TEST(LineProfile, FieldFreeLineIsLorentzian) {
    SpectralModel model;
    model.b_field = 0.0;
    const LineShape line(model);
    EXPECT_NEAR(line(0.0), 1.0, 1e-12);
    EXPECT_NEAR(line(11.2e6), 0.5, 1e-12);
    EXPECT_NEAR(line(-11.2e6), 0.5, 1e-12);
    EXPECT_NEAR(line.fwhm(), 22.4e6, 1.0);
    EXPECT_EQ(line.components().size(), 1u);
}

TEST(LineProfile, FieldBroadensLine) {
    const LineShape line(SpectralModel{});
    EXPECT_NEAR(line(line.peak_detuning()), 1.0, 1e-12);
    EXPECT_GT(line.fwhm(), 22.4e6);
    EXPECT_NEAR(line.fwhm(), 26.27e6, 0.01e6);
    EXPECT_NEAR(line(1e6), line(-1e6), 1e-12);
    EXPECT_NEAR(excitation_profile(SpectralModel{}, 3e6), line(3e6), 1e-14);
}

TEST(LineProfile, ScatterProbability) {
    const SpectralModel model;
    DriveParams d;
    d.saturation_scale = calibrate_saturation(model, 1.0, 10e-6, 0.75);
    EXPECT_NEAR(scatter_probability(model, d, 0.0), 0.75, 1e-12);
    d.power = 0.0;
    EXPECT_EQ(scatter_probability(model, d, 0.0), 0.0);
    double prev = -1.0;
    for (double p : {0.5, 1.0, 2.0, 4.0, 8.0, 64.0}) {
        d.power = p;
        const double v = scatter_probability(model, d, 0.0);
        EXPECT_GT(v, prev);
        EXPECT_LE(v, 1.0);
        prev = v;
    }
    EXPECT_NEAR(prev, 1.0, 1e-12);
    d.power = 2.0;
    EXPECT_NEAR(scatter_probability(model, d, 0.0), 1.0 - 0.25 * 0.25, 1e-12);
}

TEST(LineProfile, PhotonNumberDistribution) {
    const PhotonNumberDistribution pn(0.936);
    EXPECT_EQ(pn.pmf(0), 0.0);
    EXPECT_NEAR(pn.pmf(1), 0.936, 1e-14);
    EXPECT_NEAR(pn.pmf(2), 0.064 * 0.936, 1e-14);
    EXPECT_NEAR(pn.at_least(2), 0.064, 1e-14);
    EXPECT_NEAR(pn.at_least(1), 1.0, 1e-14);
    EXPECT_NEAR(pn.mean(), 1.068, 1e-3);
    double s = 0.0, m = 0.0;
    for (std::size_t k = 0; k < 60; ++k) s += pn.pmf(k), m += k * pn.pmf(k);
    EXPECT_NEAR(s, 1.0, 1e-12);
    EXPECT_NEAR(m, pn.mean(), 1e-12);
}

TEST(LineProfile, SpectrumLimits) {
    const SpectralModel model;
    const ProtocolParams params = ProtocolParams::demonstration();
    DriveParams d;
    d.power = 1e6;
    d.saturation_scale = calibrate_saturation(model, 1.0, 10e-6, 0.75);
    const std::vector<double> grid{-5e9, 0.0, 5e9};
    const auto pts = spectrum_scan(model, d, params, grid);
    const double fringe = max_sigma_y_factor(params).value * heating_contrast(params);
    EXPECT_NEAR(pts[1].ay, fringe, 1e-12);
    d.power = 1.0;
    const auto far = spectrum_scan(model, d, params, grid);
    EXPECT_LT(far[0].ay, 1e-3);
    EXPECT_LT(far[2].ay, 1e-3);
}

TEST(LineProfile, SampledSpectrumIsReproducible) {
    const SpectralModel model;
    const ProtocolParams params = ProtocolParams::demonstration();
    DriveParams d;
    d.saturation_scale = calibrate_saturation(model, 1.0, 10e-6, 0.75);
    const std::vector<double> grid{-20e6, 0.0, 20e6};
    const auto a = spectrum_scan(model, d, params, grid, SpectrumSampling{2000, RngStream(8, 2)});
    const auto b = spectrum_scan(model, d, params, grid, SpectrumSampling{2000, RngStream(8, 2)});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_EQ(a[i].ay, b[i].ay);
        EXPECT_GT(a[i].ay_err, 0.0);
        EXPECT_NEAR(a[i].ay, a[i].ay_model, 5.0 * a[i].ay_err);
    }
}

TEST(LineProfile, Validation) {
    SpectralModel m;
    m.natural_fwhm = -1.0;
    EXPECT_THROW(m.validate(), InvalidParameter);
    EXPECT_THROW(calibrate_saturation(SpectralModel{}, 1.0, 10e-6, 1.0), InvalidParameter);
    EXPECT_THROW(PhotonNumberDistribution(0.0), InvalidParameter);
}
