#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "catspec/rng.hpp"
#include "catspec/signal.hpp"

namespace catspec {

/// Wigner 3j symbol with every argument given as twice its value, so
/// half-integer angular momenta stay integral.
double wigner_3j(int two_j1, int two_j2, int two_j3, int two_m1, int two_m2, int two_m3);

struct ZeemanComponent {
    double detuning = 0.0; // Hz, relative to the field-free line
    double weight = 0.0;
    int two_m_lower = 0;
    int two_m_upper = 0;
};

/// D3/2 -> P1/2 line of the spectroscopy ion in a magnetic field.
struct SpectralModel {
    double natural_fwhm = 22.4e6; // Hz
    double b_field = 4.1;         // gauss
    double g_lower = 0.8;         // D3/2
    double g_upper = 2.0 / 3.0;   // P1/2
    int two_j_lower = 3;
    int two_j_upper = 1;

    void validate() const;
};

/// Allowed m_J components with squared-3j weights, normalised to sum 1.
/// Lower sublevels are taken as equally populated.
std::vector<ZeemanComponent> zeeman_components(const SpectralModel& model);

/// Sum of Lorentzians over the Zeeman components, normalised to unit peak.
class LineShape {
public:
    explicit LineShape(const SpectralModel& model);

    double operator()(double detuning) const;
    double peak_detuning() const { return peak_detuning_; }
    const std::vector<ZeemanComponent>& components() const { return components_; }

    /// Full width at half maximum found by bisection on both flanks.
    double fwhm() const;

private:
    double raw(double detuning) const;

    double half_width_;
    std::vector<ZeemanComponent> components_;
    double peak_ = 1.0;
    double peak_detuning_ = 0.0;
};

double excitation_profile(const SpectralModel& model, double detuning);

struct DriveParams {
    double power = 1.0;            // relative units
    double duration = 10e-6;       // s
    double saturation_scale = 0.0; // kappa, per (power * second)

    void validate() const;
    double dose() const { return saturation_scale * power * duration; }
};

/// Probability that at least one photon is scattered before pump-out,
/// 1 - exp(-kappa P t L(detuning)).
double scatter_probability(const LineShape& line, const DriveParams& drive, double detuning);
double scatter_probability(const SpectralModel& model, const DriveParams& drive, double detuning);

/// kappa such that `power` for `duration` scatters on resonance with probability p0.
double calibrate_saturation(const SpectralModel& model, double power, double duration, double p0);

/// Number of infrared photons scattered before the ion leaves D3/2: each
/// decay returns to S1/2 with probability branch_blue.
class PhotonNumberDistribution {
public:
    explicit PhotonNumberDistribution(double branch_blue);
    double pmf(std::size_t k) const;
    double at_least(std::size_t k) const;
    double mean() const { return 1.0 / branch_blue_; }

private:
    double branch_blue_;
};

struct SpectrumPoint {
    double detuning = 0.0;
    double ay = 0.0;       // measured (or model, when not sampled)
    double ay_err = 0.0;
    double ay_model = 0.0;
};

struct SpectrumSampling {
    std::size_t shots = 0; // per fringe extreme, per detuning
    RngStream rng;
};

/// A_y(detuning) = P(scatter) * max|sin(phi_abs) sinc(phi_em)| * heating contrast.
/// With sampling, each point alternates `shots` measurements at the fringe
/// maximum and minimum and reports the projection-noise error.
std::vector<SpectrumPoint> spectrum_scan(const SpectralModel& model, const DriveParams& drive,
                                         const ProtocolParams& params, std::span<const double> detunings,
                                         std::optional<SpectrumSampling> sampling = std::nullopt);

} // namespace catspec
