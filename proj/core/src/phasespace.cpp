#include "catspec/phasespace.hpp"

#include <cmath>
#include <string>

#include "catspec/constants.hpp"
#include "catspec/error.hpp"

namespace catspec {

double PhasePoint::norm() const { return std::hypot(re, im); }

bool PhasePoint::finite() const { return std::isfinite(re) && std::isfinite(im); }

PhasePoint PhasePoint::polar(double magnitude, double angle) {
    return {magnitude * std::cos(angle), magnitude * std::sin(angle)};
}

DisplacementRecord DisplacementRecord::then(const DisplacementRecord& later) const {
    return {net + later.net, geo_phase + later.geo_phase + symplectic(net, later.net)};
}

DisplacementRecord compose(PhasePoint d1, PhasePoint d2, const DisplacementRecord& acc) {
    return acc.then(d1).then(d2);
}

DisplacementRecord chain(std::span<const PhasePoint> steps) {
    DisplacementRecord acc;
    for (const auto& s : steps) acc = acc.then(s);
    return acc;
}

double closed_path_phase(std::span<const PhasePoint> vertices) {
    if (vertices.empty()) return 0.0;
    DisplacementRecord acc;
    PhasePoint pos = vertices.front();
    for (const auto& v : vertices.subspan(1)) {
        acc = acc.then(v - pos);
        pos = v;
    }
    acc = acc.then(vertices.front() - pos);
    return acc.geo_phase;
}

void ModeSpec::validate() const {
    if (!(frequency > 0.0)) throw InvalidParameter("mode frequency must be positive");
    if (!(ion_mass > 0.0)) throw InvalidParameter("ion mass must be positive");
    if (!(participation >= 0.0 && participation <= 1.0))
        throw InvalidParameter("mode participation must lie in [0, 1]");
    if (!std::isfinite(beam_angle)) throw InvalidParameter("beam angle must be finite");
}

double lamb_dicke(double wavelength, const ModeSpec& mode) {
    if (!(wavelength > 0.0)) throw InvalidParameter("wavelength must be positive");
    mode.validate();
    const double k = constants::two_pi / wavelength;
    const double omega = constants::two_pi * mode.frequency;
    const double ground_extent = std::sqrt(constants::hbar / (2.0 * mode.ion_mass * omega));
    return k * ground_extent * mode.participation * std::cos(mode.beam_angle);
}

double cat_size(double eta, double rabi, double duration) {
    if (eta < 0.0 || rabi < 0.0 || duration < 0.0)
        throw InvalidParameter("cat_size arguments must be non-negative");
    // Each sideband carries half the carrier Rabi frequency.
    return 0.5 * eta * rabi * duration;
}

} // namespace catspec
