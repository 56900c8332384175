#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "catspec/rng.hpp"
#include "catspec/signal.hpp"

namespace catspec {

/// Quantum projection noise sqrt(p (1 - p) / N) of an N-shot average.
double projection_noise(double p, std::size_t shots);

/// Fluorescence readout of the logic ion through a photomultiplier.
struct DetectorModel {
    double mean_dark = 12.0;            // counts per window, ion shelved in D5/2
    double mean_bright = 117.0;         // counts per window, ion in S1/2
    double window = 5e-3;               // s
    double threshold = 40.0;            // counts; above means bright
    double metastable_lifetime = 1.168; // s, D5/2

    void validate() const;
    /// Probability that a shelved ion decays before the window closes.
    double decay_probability() const;
};

struct ShotRecord {
    std::uint64_t counts = 0;
    bool bright = false; // counts > threshold
};

/// Draw one detection window. A dark ion may decay at a time t inside the
/// window; its counts then interpolate linearly between the dark and bright
/// rates.
ShotRecord simulate_detection(bool is_bright, const DetectorModel& det, RngStream& rng);

/// Fraction of misclassified shots among `shots` simulated windows.
double simulated_error_rate(bool is_bright, const DetectorModel& det, std::size_t shots, RngStream& rng);

struct MethodReport {
    std::string name;
    std::size_t n = 0;       // min(N1, N2)
    double signal_a = 0.0;
    double signal_b = 0.0;
    double err_a = 0.0;
    double err_b = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
    double snr = 0.0;
    double beta = 0.0;
    double shots_3sigma = 0.0;         // (3 / beta)^2; +inf when beta == 0
    double shots_3sigma_rounded = 0.0; // two significant figures
    bool reaches_3sigma = true;        // false when the signal vanishes
};

/// Signal, noise, SNR, sensitivity and shots-to-3-sigma from two measured
/// probabilities. Throws DegenerateNoise when both have zero projection noise.
MethodReport method_report(std::string name, double a, double b, std::size_t n1, std::size_t n2);

/// Round to `digits` significant figures.
double round_significant(double value, int digits);

/// One row of the published five-method comparison.
struct PublishedRow {
    const char* name;
    std::size_t n;
    double signal_a;
    double signal_b;
    double snr;
    double beta;
    double beta_err;
    double shots_3sigma;
    double shots_3sigma_err;
};

const std::array<PublishedRow, 5>& published_methods();

enum class Method { DirectSigmaZ, PhaseSensitiveSigmaY, CatSigmaZ, CatSigmaY, CatSigmaYNoGroundStateCooling };

const char* method_name(Method m);
inline constexpr std::array<Method, 5> kAllMethods{Method::DirectSigmaZ, Method::PhaseSensitiveSigmaY, Method::CatSigmaZ,
                                                   Method::CatSigmaY, Method::CatSigmaYNoGroundStateCooling};

struct MethodsConfig {
    ProtocolParams protocol = ProtocolParams::demonstration();
    DetectorModel detector{};
    double scatter_prob = 1.0;
    /// Residual motional excitation read out by the red-sideband pulse with no
    /// photon scattered.
    double direct_background = 0.049;
    /// Empirical contrast of the cat signal without sideband cooling, relative
    /// to the ground-state-cooled cat. Not modelled from first principles.
    double no_cooling_contrast = 0.3225;
    std::array<std::size_t, 5> shots{25000, 9850, 4200, 4200, 5050};
    std::size_t quadrature_nodes = 41;
    std::size_t fringe_scan_points = 4001;

    static MethodsConfig zero_recoil();
};

/// Exact probabilities (signal A, signal B) of the "dark" outcome x = 1 for
/// each method, before shot noise.
std::array<std::array<double, 2>, 5> method_probabilities(const MethodsConfig& cfg);

/// Reports computed directly from the exact probabilities.
std::vector<MethodReport> compare_methods_analytic(const MethodsConfig& cfg);

/// End-to-end simulation: each shot samples the qubit projection and then a
/// detection window through the detector model.
std::vector<MethodReport> compare_methods(const MethodsConfig& cfg, const RngStream& rng);

/// CSV with header
/// method,n,signal_a,signal_b,mu,sigma,snr,beta,shots_3sigma,shots_3sigma_rounded
void write_reports_csv(std::ostream& os, const std::vector<MethodReport>& reports);

} // namespace catspec
