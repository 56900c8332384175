#pragma once

#include <span>
#include <vector>

namespace catspec {

/// Physical parameters of one cat-state spectroscopy run.
struct ProtocolParams {
    double alpha = 2.88;          // cat amplitude
    double eta_abs = 0.0;         // Lamb-Dicke factor of the absorbed photon
    double eta_em = 0.0;          // Lamb-Dicke factor of the emitted photon
    double mode_frequency = 1.199e6; // Hz
    double heating_rate = 40.0;   // quanta / s
    double tau_cat = 50e-6;       // s, cat creation (and recombination) time
    double tau_wait = 32e-6;      // s, between creation and recombination
    double branch_blue = 0.936;   // P1/2 -> S1/2 branching probability

    /// Parameters of the 44Ca+ / 40Ca+ demonstration. The recoil factors come
    /// from the single-ion formula for 866 nm absorption and 397 nm emission.
    static ProtocolParams demonstration();

    double n_cat() const { return alpha * alpha; }
    void validate() const;
};

struct QubitExpectation {
    double sz = -1.0;
    double sy = 0.0;
};

/// Geometric phase from the absorption kick: 2 alpha eta_abs sin(phi_sc).
double phi_abs(const ProtocolParams& p, double phi_sc);

/// Emission phase amplitude (before projection on the emission direction).
double phi_em_amplitude(const ProtocolParams& p, double phi_sc);

/// Unnormalised sinc, sin(x)/x.
double sinc(double x);

/// Mean squared heating phase, 8 R_h n_cat (2/3 tau_cat + tau_wait).
double heating_phase_variance(const ProtocolParams& p);

/// Contrast factor exp(-<phi_h^2>/2).
double heating_contrast(const ProtocolParams& p);

/// Logic-qubit expectations after the protocol, averaged isotropically over
/// the emission direction.
QubitExpectation expectation(const ProtocolParams& p, double phi_sc, bool scattered);

/// Same, for a single emission direction with projection cos_theta on the
/// mode axis (no angular average).
QubitExpectation expectation_directed(const ProtocolParams& p, double phi_sc, double cos_theta);

struct FringePoint {
    double phi_sc = 0.0;
    QubitExpectation value;
};

std::vector<FringePoint> fringe_curve(const ProtocolParams& p, std::span<const double> phi_grid);

/// Uniform grid of `points` scatter phases on [start, start + span).
std::vector<double> phase_grid(std::size_t points, double start, double span);

struct PhaseOptimum {
    double phase = 0.0;
    double value = 0.0;
};

/// Best single-shot probability of flagging a scattering event,
/// max over phi >= 0 of (1 - cos(phi) sinc(ratio phi)) / 2, where ratio is
/// eta_em / eta_abs.
PhaseOptimum max_detection_probability(double eta_ratio);

/// max over phi_sc of |sin(phi_abs) sinc(phi_em)|: the sigma_y fringe
/// amplitude before heating.
PhaseOptimum max_sigma_y_factor(const ProtocolParams& p);

} // namespace catspec
