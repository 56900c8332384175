#pragma once

#include <complex>
#include <span>

namespace catspec {

/// Complex phase-space amplitude labelling a coherent state |re + i im>.
/// Its modulus squared is the mean phonon number of that state.
struct PhasePoint {
    double re = 0.0;
    double im = 0.0;

    constexpr PhasePoint() = default;
    constexpr PhasePoint(double r, double i = 0.0) : re(r), im(i) {}
    explicit PhasePoint(std::complex<double> z) : re(z.real()), im(z.imag()) {}

    std::complex<double> complex() const { return {re, im}; }
    double norm() const;
    double mean_phonons() const { return re * re + im * im; }
    bool finite() const;

    static PhasePoint polar(double magnitude, double angle);

    friend constexpr PhasePoint operator+(PhasePoint a, PhasePoint b) { return {a.re + b.re, a.im + b.im}; }
    friend constexpr PhasePoint operator-(PhasePoint a, PhasePoint b) { return {a.re - b.re, a.im - b.im}; }
    friend constexpr PhasePoint operator-(PhasePoint a) { return {-a.re, -a.im}; }
    friend constexpr PhasePoint operator*(double s, PhasePoint a) { return {s * a.re, s * a.im}; }
    friend constexpr bool operator==(PhasePoint, PhasePoint) = default;
};

/// Im(conj(a) * b): the phase picked up when D(b) follows D(a).
constexpr double symplectic(PhasePoint a, PhasePoint b) { return a.re * b.im - a.im * b.re; }

/// A product of displacement operators written as exp(i geo_phase) D(net).
///
/// Sign convention: D(b) D(a) = exp(i Im(a* b)) D(a + b). Records compose as
/// elements of the Heisenberg group, so chaining is associative and a path
/// followed by its exact reverse returns to net = 0, geo_phase = 0.
struct DisplacementRecord {
    PhasePoint net{};
    double geo_phase = 0.0;

    /// Record for the single operator D(d).
    static DisplacementRecord of(PhasePoint d) { return {d, 0.0}; }

    /// Apply `later` after `*this` (operator product later * this).
    DisplacementRecord then(const DisplacementRecord& later) const;
    DisplacementRecord then(PhasePoint d) const { return then(of(d)); }
};

/// Append D(d1) and then D(d2) to the product held in `acc`.
DisplacementRecord compose(PhasePoint d1, PhasePoint d2, const DisplacementRecord& acc = {});

/// Chain every step of a path starting from the origin.
DisplacementRecord chain(std::span<const PhasePoint> steps);

/// Geometric phase of the closed polygon visiting `vertices` in order and
/// returning to the first vertex; equals twice the signed enclosed area.
double closed_path_phase(std::span<const PhasePoint> vertices);

/// Vibrational mode seen by one ion.
struct ModeSpec {
    double frequency = 0.0;      // Hz
    double ion_mass = 0.0;       // kg
    double participation = 1.0;  // ion's component of the normalised mode vector
    double beam_angle = 0.0;     // rad, between recoil direction and mode axis

    void validate() const;
};

/// Lamb-Dicke factor for a photon of `wavelength` projected onto `mode`.
/// With participation 1 and zero angle this is sqrt(E_rec / (h nu)).
double lamb_dicke(double wavelength, const ModeSpec& mode);

/// Coherent amplitude reached by a spin-dependent force of Rabi frequency
/// `rabi` (rad/s, 2 pi per carrier cycle) applied for `duration` seconds.
double cat_size(double eta, double rabi, double duration);

/// n_cat = alpha^2.
constexpr double cat_phonons(double alpha) { return alpha * alpha; }

} // namespace catspec
