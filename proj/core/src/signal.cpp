#include "catspec/signal.hpp"

#include <cmath>
#include <functional>

#include "catspec/constants.hpp"
#include "catspec/error.hpp"
#include "catspec/phasespace.hpp"

namespace catspec {

namespace {

// Dense scan followed by golden-section refinement around the best sample.
PhaseOptimum maximize(const std::function<double(double)>& f, double lo, double hi, double step) {
    double best_x = lo;
    double best_f = f(lo);
    const auto n = static_cast<long>(std::ceil((hi - lo) / step));
    for (long i = 1; i <= n; ++i) {
        const double x = std::min(hi, lo + static_cast<double>(i) * step);
        const double v = f(x);
        if (v > best_f) {
            best_f = v;
            best_x = x;
        }
    }
    double a = std::max(lo, best_x - step);
    double b = std::min(hi, best_x + step);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 100 && (b - a) > 1e-15; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    const double v = f(x);
    if (v > best_f) return {x, v};
    return {best_x, best_f};
}

} // namespace

ProtocolParams ProtocolParams::demonstration() {
    ProtocolParams p;
    const ModeSpec spectroscopy_ion{constants::axial_mode_frequency, constants::mass_ca44, 1.0, 0.0};
    p.eta_abs = lamb_dicke(constants::lambda_repump, spectroscopy_ion);
    p.eta_em = lamb_dicke(constants::lambda_cooling, spectroscopy_ion);
    return p;
}

void ProtocolParams::validate() const {
    if (!(alpha >= 0.0) || !(eta_abs >= 0.0) || !(eta_em >= 0.0))
        throw InvalidParameter("alpha and Lamb-Dicke factors must be non-negative");
    if (!(heating_rate >= 0.0) || !(tau_cat >= 0.0) || !(tau_wait >= 0.0))
        throw InvalidParameter("heating rate and protocol times must be non-negative");
    if (!(mode_frequency > 0.0)) throw InvalidParameter("mode frequency must be positive");
    if (!(branch_blue >= 0.0 && branch_blue <= 1.0))
        throw InvalidParameter("branching ratio must lie in [0, 1]");
}

double phi_abs(const ProtocolParams& p, double phi_sc) {
    return 2.0 * p.alpha * p.eta_abs * std::sin(phi_sc);
}

double phi_em_amplitude(const ProtocolParams& p, double phi_sc) {
    return 2.0 * p.alpha * p.eta_em * std::sin(phi_sc);
}

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    }
    return std::sin(x) / x;
}

double heating_phase_variance(const ProtocolParams& p) {
    return 8.0 * p.heating_rate * p.n_cat() * (2.0 / 3.0 * p.tau_cat + p.tau_wait);
}

double heating_contrast(const ProtocolParams& p) { return std::exp(-0.5 * heating_phase_variance(p)); }

QubitExpectation expectation(const ProtocolParams& p, double phi_sc, bool scattered) {
    const double contrast = heating_contrast(p);
    if (!scattered) return {-contrast, 0.0};
    const double absorbed = phi_abs(p, phi_sc);
    const double emitted = sinc(phi_em_amplitude(p, phi_sc));
    return {-std::cos(absorbed) * emitted * contrast, std::sin(absorbed) * emitted * contrast};
}

QubitExpectation expectation_directed(const ProtocolParams& p, double phi_sc, double cos_theta) {
    const double contrast = heating_contrast(p);
    const double total = phi_abs(p, phi_sc) + phi_em_amplitude(p, phi_sc) * cos_theta;
    return {-std::cos(total) * contrast, std::sin(total) * contrast};
}

std::vector<FringePoint> fringe_curve(const ProtocolParams& p, std::span<const double> phi_grid) {
    if (phi_grid.empty()) throw InvalidParameter("fringe grid must not be empty");
    std::vector<FringePoint> out;
    out.reserve(phi_grid.size());
    for (double phi : phi_grid) out.push_back({phi, expectation(p, phi, true)});
    return out;
}

std::vector<double> phase_grid(std::size_t points, double start, double span) {
    if (points == 0) throw InvalidParameter("phase grid needs at least one point");
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = start + span * static_cast<double>(i) / static_cast<double>(points);
    return grid;
}

PhaseOptimum max_detection_probability(double eta_ratio) {
    if (!(eta_ratio >= 0.0)) throw InvalidParameter("eta ratio must be non-negative");
    auto p = [eta_ratio](double phi) { return 0.5 * (1.0 - std::cos(phi) * sinc(eta_ratio * phi)); };
    return maximize(p, 0.0, 4.0 * constants::pi, 1e-4);
}

PhaseOptimum max_sigma_y_factor(const ProtocolParams& p) {
    auto f = [&p](double phi_sc) {
        return std::abs(std::sin(phi_abs(p, phi_sc)) * sinc(phi_em_amplitude(p, phi_sc)));
    };
    return maximize(f, 0.0, constants::pi / 2.0, 1e-4);
}

} // namespace catspec
