#include "catspec/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "catspec/constants.hpp"
#include "catspec/error.hpp"
#include "catspec/fock_oracle.hpp"
#include "catspec/montecarlo.hpp"
#include "catspec/quadrature.hpp"

namespace catspec {

double projection_noise(double p, std::size_t shots) {
    if (shots == 0) throw InvalidParameter("projection noise needs at least one shot");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("probability must lie in [0, 1]");
    return std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
}

void DetectorModel::validate() const {
    if (!(window > 0.0)) throw InvalidParameter("detection window must be positive");
    if (!(mean_dark >= 0.0) || !(mean_dark < threshold) || !(threshold < mean_bright))
        throw InvalidParameter("detector needs mean_dark < threshold < mean_bright");
    if (!(metastable_lifetime > 0.0)) throw InvalidParameter("metastable lifetime must be positive");
}

double DetectorModel::decay_probability() const {
    if (std::isinf(metastable_lifetime)) return 0.0;
    return -std::expm1(-window / metastable_lifetime);
}

ShotRecord simulate_detection(bool is_bright, const DetectorModel& det, RngStream& rng) {
    double mean = det.mean_dark;
    if (is_bright) {
        mean = det.mean_bright;
    } else {
        const double p_decay = det.decay_probability();
        if (p_decay > 0.0 && rng.bernoulli(p_decay)) {
            // Decay time conditioned on falling inside the window.
            const double t = -det.metastable_lifetime * std::log1p(-rng.uniform() * p_decay);
            const double f = std::clamp(t / det.window, 0.0, 1.0);
            mean = det.mean_dark * f + det.mean_bright * (1.0 - f);
        }
    }
    ShotRecord shot;
    shot.counts = rng.poisson(mean);
    shot.bright = static_cast<double>(shot.counts) > det.threshold;
    return shot;
}

double simulated_error_rate(bool is_bright, const DetectorModel& det, std::size_t shots, RngStream& rng) {
    det.validate();
    if (shots == 0) throw InvalidParameter("need at least one shot");
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < shots; ++i)
        if (simulate_detection(is_bright, det, rng).bright != is_bright) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(shots);
}

double round_significant(double value, int digits) {
    if (value == 0.0 || !std::isfinite(value)) return value;
    const double magnitude = std::floor(std::log10(std::abs(value)));
    const double scale = std::pow(10.0, static_cast<double>(digits) - 1.0 - magnitude);
    return std::round(value * scale) / scale;
}

MethodReport method_report(std::string name, double a, double b, std::size_t n1, std::size_t n2) {
    MethodReport r;
    r.name = std::move(name);
    r.n = std::min(n1, n2);
    r.signal_a = a;
    r.signal_b = b;
    r.err_a = projection_noise(a, n1);
    r.err_b = projection_noise(b, n2);
    r.mu = a - b;
    r.sigma = std::hypot(r.err_a, r.err_b);
    if (r.sigma == 0.0) throw DegenerateNoise("signal " + r.name + " has zero projection noise");
    r.snr = r.mu / r.sigma;
    r.beta = r.snr / std::sqrt(static_cast<double>(r.n));
    if (r.beta == 0.0) {
        r.reaches_3sigma = false;
        r.shots_3sigma = std::numeric_limits<double>::infinity();
    } else {
        r.shots_3sigma = 9.0 / (r.beta * r.beta);
    }
    r.shots_3sigma_rounded = round_significant(r.shots_3sigma, 2);
    return r;
}

const std::array<PublishedRow, 5>& published_methods() {
    static const std::array<PublishedRow, 5> rows{{
        {"direct_sigma_z", 25000, 0.055, 0.049, 2.84, 0.018, 0.006, 2.7e5, 1.9e5},
        {"phase_sensitive_sigma_y", 9850, 0.446, 0.372, 10.67, 0.107, 0.010, 7.8e2, 1.5e2},
        {"css_sigma_z", 4200, 0.266, 0.172, 10.51, 0.162, 0.016, 3.4e2, 0.6e2},
        {"css_sigma_y", 4200, 0.608, 0.376, 21.92, 0.338, 0.016, 7.9e1, 0.8e1},
        {"css_sigma_y_no_gsc", 5050, 0.650, 0.575, 7.74, 0.109, 0.014, 7.6e2, 2.0e2},
    }};
    return rows;
}

const char* method_name(Method m) {
    switch (m) {
    case Method::DirectSigmaZ: return "direct_sigma_z";
    case Method::PhaseSensitiveSigmaY: return "phase_sensitive_sigma_y";
    case Method::CatSigmaZ: return "css_sigma_z";
    case Method::CatSigmaY: return "css_sigma_y";
    case Method::CatSigmaYNoGroundStateCooling: return "css_sigma_y_no_gsc";
    }
    return "unknown";
}

MethodsConfig MethodsConfig::zero_recoil() {
    MethodsConfig cfg;
    cfg.protocol.eta_abs = 0.0;
    cfg.protocol.eta_em = 0.0;
    cfg.direct_background = 0.049;
    return cfg;
}

namespace {

struct Extremes {
    double max = -std::numeric_limits<double>::infinity();
    double min = std::numeric_limits<double>::infinity();
    void add(double v) {
        max = std::max(max, v);
        min = std::min(min, v);
    }
};

// Emission-averaged readout of the recoil-kicked ground state. Absorption and
// the projected emission kick add along the same momentum quadrature.
struct DirectReadout {
    double p_excited = 0.0;
    double sy_phase0 = 0.0;
    double sy_phase_pi = 0.0;
};

DirectReadout direct_readout(const ProtocolParams& p, std::size_t nodes) {
    const QuadratureRule rule = gauss_legendre(nodes);
    DirectReadout out;
    for (std::size_t i = 0; i < nodes; ++i) {
        const double kick = p.eta_abs + p.eta_em * rule.nodes[i];
        const double w = 0.5 * rule.weights[i];
        // Negative kicks are a pi phase flip of the positive one.
        const double magnitude = std::abs(kick);
        const double flip = kick < 0.0 ? constants::pi : 0.0;
        const auto d0 = fock::direct_detection_exact(magnitude, 32, flip);
        const auto d1 = fock::direct_detection_exact(magnitude, 32, flip + constants::pi);
        out.p_excited += w * d0.p_excited;
        out.sy_phase0 += w * d0.after_swap.sy;
        out.sy_phase_pi += w * d1.after_swap.sy;
    }
    return out;
}

} // namespace

std::array<std::array<double, 2>, 5> method_probabilities(const MethodsConfig& cfg) {
    cfg.protocol.validate();
    const double ps = cfg.scatter_prob;
    if (!(ps >= 0.0 && ps <= 1.0)) throw InvalidParameter("scatter probability must lie in [0, 1]");
    std::array<std::array<double, 2>, 5> probs{};

    const DirectReadout direct = direct_readout(cfg.protocol, cfg.quadrature_nodes);
    const double bg = cfg.direct_background;
    probs[0] = {bg + (1.0 - bg) * ps * direct.p_excited, bg};

    // x = 1 marks |up>: after the analysis pulse p_up = (1 + <sigma_y>) / 2.
    const double ps_a = 0.5 * (1.0 + ps * direct.sy_phase0);
    const double ps_b = 0.5 * (1.0 + ps * direct.sy_phase_pi);
    probs[1] = {std::max(ps_a, ps_b), std::min(ps_a, ps_b)};

    Extremes z, y, y_cold;
    const QubitExpectation idle = expectation(cfg.protocol, 0.0, false);
    const std::size_t points = std::max<std::size_t>(cfg.fringe_scan_points, 2);
    for (std::size_t i = 0; i < points; ++i) {
        const double phi = constants::two_pi * static_cast<double>(i) / static_cast<double>(points);
        const QubitExpectation hit = expectation(cfg.protocol, phi, true);
        const double sz = ps * hit.sz + (1.0 - ps) * idle.sz;
        const double sy = ps * hit.sy + (1.0 - ps) * idle.sy;
        z.add(0.5 * (1.0 + sz));
        y.add(0.5 * (1.0 + sy));
        y_cold.add(0.5 * (1.0 + cfg.no_cooling_contrast * sy));
    }
    probs[2] = {z.max, z.min};
    probs[3] = {y.max, y.min};
    probs[4] = {y_cold.max, y_cold.min};
    return probs;
}

std::vector<MethodReport> compare_methods_analytic(const MethodsConfig& cfg) {
    const auto probs = method_probabilities(cfg);
    std::vector<MethodReport> out;
    for (std::size_t m = 0; m < kAllMethods.size(); ++m)
        out.push_back(method_report(method_name(kAllMethods[m]), probs[m][0], probs[m][1], cfg.shots[m], cfg.shots[m]));
    return out;
}

std::vector<MethodReport> compare_methods(const MethodsConfig& cfg, const RngStream& rng) {
    cfg.detector.validate();
    const auto probs = method_probabilities(cfg);
    std::vector<MethodReport> out;
    for (std::size_t m = 0; m < kAllMethods.size(); ++m) {
        const std::size_t n = cfg.shots[m];
        if (n == 0) throw InvalidParameter("each method needs at least one shot");
        std::array<double, 2> measured{};
        for (std::size_t branch = 0; branch < 2; ++branch) {
            RngStream stream = rng.substream(2 * m + branch);
            std::size_t dark = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const bool up = stream.bernoulli(probs[m][branch]);
                // |up> is shelved in D5/2 and stays dark.
                if (!simulate_detection(!up, cfg.detector, stream).bright) ++dark;
            }
            measured[branch] = static_cast<double>(dark) / static_cast<double>(n);
        }
        out.push_back(method_report(method_name(kAllMethods[m]), measured[0], measured[1], n, n));
    }
    return out;
}

void write_reports_csv(std::ostream& os, const std::vector<MethodReport>& reports) {
    const auto flags = os.flags();
    const auto precision = os.precision();
    os.precision(10);
    os << "method,n,signal_a,signal_b,mu,sigma,snr,beta,shots_3sigma,shots_3sigma_rounded\n";
    for (const auto& r : reports) {
        os << r.name << ',' << r.n << ',' << r.signal_a << ',' << r.signal_b << ',' << r.mu << ',' << r.sigma << ','
           << r.snr << ',' << r.beta << ',';
        if (r.reaches_3sigma)
            os << r.shots_3sigma << ',' << r.shots_3sigma_rounded;
        else
            os << "inf,inf";
        os << '\n';
    }
    os.flags(flags);
    os.precision(precision);
}

} // namespace catspec
