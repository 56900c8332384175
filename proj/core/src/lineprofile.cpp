#include "catspec/lineprofile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "catspec/constants.hpp"
#include "catspec/error.hpp"
#include "catspec/statistics.hpp"

namespace catspec {

namespace {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

} // namespace

double wigner_3j(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3) {
    if (tm1 + tm2 + tm3 != 0) return 0.0;
    if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm3) > tj3) return 0.0;
    if ((tj1 + tm1) % 2 || (tj2 + tm2) % 2 || (tj3 + tm3) % 2) return 0.0;
    if (tj3 < std::abs(tj1 - tj2) || tj3 > tj1 + tj2 || (tj1 + tj2 + tj3) % 2) return 0.0;

    // Racah formula; every combination below is an integer.
    const int a = (tj1 + tj2 - tj3) / 2;
    const int b = (tj1 - tj2 + tj3) / 2;
    const int c = (-tj1 + tj2 + tj3) / 2;
    const int d = (tj1 + tj2 + tj3) / 2 + 1;
    const double log_triangle = log_factorial(a) + log_factorial(b) + log_factorial(c) - log_factorial(d);
    const double log_m = log_factorial((tj1 + tm1) / 2) + log_factorial((tj1 - tm1) / 2) +
                         log_factorial((tj2 + tm2) / 2) + log_factorial((tj2 - tm2) / 2) +
                         log_factorial((tj3 + tm3) / 2) + log_factorial((tj3 - tm3) / 2);

    const int k_min = std::max({0, (tj2 - tj3 - tm1) / 2, (tj1 - tj3 + tm2) / 2});
    const int k_max = std::min({a, (tj1 - tm1) / 2, (tj2 + tm2) / 2});
    double sum = 0.0;
    for (int k = k_min; k <= k_max; ++k) {
        const double log_den = log_factorial(k) + log_factorial(a - k) + log_factorial((tj1 - tm1) / 2 - k) +
                               log_factorial((tj2 + tm2) / 2 - k) + log_factorial((tj3 - tj2 + tm1) / 2 + k) +
                               log_factorial((tj3 - tj1 - tm2) / 2 + k);
        const double term = std::exp(0.5 * (log_triangle + log_m) - log_den);
        sum += (k % 2 ? -term : term);
    }
    const int phase = (tj1 - tj2 - tm3) / 2;
    return (std::abs(phase) % 2 ? -sum : sum);
}

void SpectralModel::validate() const {
    if (!(natural_fwhm > 0.0)) throw InvalidParameter("natural linewidth must be positive");
    if (!std::isfinite(b_field)) throw InvalidParameter("magnetic field must be finite");
    if (two_j_lower < 0 || two_j_upper < 0) throw InvalidParameter("angular momenta must be non-negative");
}

std::vector<ZeemanComponent> zeeman_components(const SpectralModel& model) {
    model.validate();
    std::vector<ZeemanComponent> out;
    double total = 0.0;
    for (int ml = -model.two_j_lower; ml <= model.two_j_lower; ml += 2) {
        for (int mu = -model.two_j_upper; mu <= model.two_j_upper; mu += 2) {
            const int two_q = mu - ml;
            if (std::abs(two_q) > 2) continue;
            const double s = wigner_3j(model.two_j_upper, 2, model.two_j_lower, -mu, two_q, ml);
            const double strength = s * s;
            if (strength <= 0.0) continue;
            const double shift = (model.g_upper * mu - model.g_lower * ml) / 2.0;
            out.push_back({shift * constants::bohr_magneton_hz_per_gauss * model.b_field, strength, ml, mu});
            total += strength;
        }
    }
    for (auto& c : out) c.weight /= total;

    // Without a field every component sits at zero detuning.
    if (model.b_field == 0.0) return {{0.0, 1.0, 0, 0}};
    return out;
}

LineShape::LineShape(const SpectralModel& model)
    : half_width_(0.5 * model.natural_fwhm), components_(zeeman_components(model)) {
    double reach = 0.0;
    for (const auto& c : components_) reach = std::max(reach, std::abs(c.detuning));
    reach += 2.0 * half_width_;
    // Coarse scan, then golden-section refinement around the maximum.
    const int samples = 4001;
    double best = -1.0, best_x = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = -reach + 2.0 * reach * i / (samples - 1);
        const double v = raw(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    double lo = best_x - 2.0 * reach / (samples - 1);
    double hi = best_x + 2.0 * reach / (samples - 1);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
        const double c = hi - g * (hi - lo);
        const double d = lo + g * (hi - lo);
        if (raw(c) > raw(d))
            hi = d;
        else
            lo = c;
    }
    const double refined = 0.5 * (lo + hi);
    if (raw(refined) >= best) {
        best = raw(refined);
        best_x = refined;
    }
    // Symmetric patterns peak exactly at zero detuning.
    if (raw(0.0) >= best * (1.0 - 1e-12)) {
        best_x = 0.0;
        best = raw(0.0);
    }
    peak_ = best;
    peak_detuning_ = best_x;
}

double LineShape::raw(double detuning) const {
    double acc = 0.0;
    for (const auto& c : components_) {
        const double u = (detuning - c.detuning) / half_width_;
        acc += c.weight / (1.0 + u * u);
    }
    return acc;
}

double LineShape::operator()(double detuning) const { return raw(detuning) / peak_; }

double LineShape::fwhm() const {
    auto edge = [this](double direction) {
        double inside = peak_detuning_;
        double outside = peak_detuning_ + direction * half_width_;
        while ((*this)(outside) > 0.5) outside += direction * half_width_;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (inside + outside);
            ((*this)(mid) > 0.5 ? inside : outside) = mid;
        }
        return 0.5 * (inside + outside);
    };
    return edge(1.0) - edge(-1.0);
}

double excitation_profile(const SpectralModel& model, double detuning) { return LineShape(model)(detuning); }

void DriveParams::validate() const {
    if (!(power >= 0.0) || !(duration >= 0.0) || !(saturation_scale >= 0.0))
        throw InvalidParameter("drive power, duration and saturation scale must be non-negative");
}

double scatter_probability(const LineShape& line, const DriveParams& drive, double detuning) {
    drive.validate();
    return -std::expm1(-drive.dose() * line(detuning));
}

double scatter_probability(const SpectralModel& model, const DriveParams& drive, double detuning) {
    return scatter_probability(LineShape(model), drive, detuning);
}

double calibrate_saturation(const SpectralModel& model, double power, double duration, double p0) {
    if (!(power > 0.0) || !(duration > 0.0)) throw InvalidParameter("calibration needs positive power and duration");
    if (!(p0 > 0.0 && p0 < 1.0)) throw InvalidParameter("target scatter probability must lie in (0, 1)");
    const LineShape line(model);
    return -std::log1p(-p0) / (power * duration * line(line.peak_detuning()));
}

PhotonNumberDistribution::PhotonNumberDistribution(double branch_blue) : branch_blue_(branch_blue) {
    if (!(branch_blue > 0.0 && branch_blue <= 1.0)) throw InvalidParameter("branching ratio must lie in (0, 1]");
}

double PhotonNumberDistribution::pmf(std::size_t k) const {
    if (k == 0) return 0.0;
    return std::pow(1.0 - branch_blue_, static_cast<double>(k - 1)) * branch_blue_;
}

double PhotonNumberDistribution::at_least(std::size_t k) const {
    if (k <= 1) return 1.0;
    return std::pow(1.0 - branch_blue_, static_cast<double>(k - 1));
}

std::vector<SpectrumPoint> spectrum_scan(const SpectralModel& model, const DriveParams& drive,
                                         const ProtocolParams& params, std::span<const double> detunings,
                                         std::optional<SpectrumSampling> sampling) {
    if (detunings.empty()) throw InvalidParameter("detuning grid must not be empty");
    params.validate();
    drive.validate();
    const LineShape line(model);
    const double fringe = max_sigma_y_factor(params).value * heating_contrast(params);

    std::vector<SpectrumPoint> out;
    out.reserve(detunings.size());
    for (std::size_t i = 0; i < detunings.size(); ++i) {
        SpectrumPoint pt;
        pt.detuning = detunings[i];
        pt.ay_model = scatter_probability(line, drive, pt.detuning) * fringe;
        pt.ay = pt.ay_model;
        if (sampling && sampling->shots > 0) {
            RngStream stream = sampling->rng.substream(i);
            const std::size_t n = sampling->shots;
            std::size_t up_max = 0, up_min = 0;
            const double p_max = 0.5 * (1.0 + pt.ay_model);
            const double p_min = 0.5 * (1.0 - pt.ay_model);
            for (std::size_t s = 0; s < n; ++s) {
                up_max += stream.bernoulli(p_max) ? 1 : 0;
                up_min += stream.bernoulli(p_min) ? 1 : 0;
            }
            const double nd = static_cast<double>(n);
            const double f_max = static_cast<double>(up_max) / nd;
            const double f_min = static_cast<double>(up_min) / nd;
            // Error from shrunk frequencies so that no point carries zero weight.
            const double g_max = (static_cast<double>(up_max) + 0.5) / (nd + 1.0);
            const double g_min = (static_cast<double>(up_min) + 0.5) / (nd + 1.0);
            pt.ay = f_max - f_min;
            pt.ay_err = std::hypot(projection_noise(g_max, n), projection_noise(g_min, n));
        }
        out.push_back(pt);
    }
    return out;
}

} // namespace catspec
