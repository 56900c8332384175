#include "catspec/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <thread>
#include <vector>

#include "catspec/error.hpp"

namespace catspec {

void for_each_batch(std::size_t batches, unsigned workers, const std::function<void(std::size_t)>& fn) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, batches));
    if (workers <= 1) {
        for (std::size_t b = 0; b < batches; ++b) fn(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t b = next++; b < batches; b = next++) fn(b);
        });
    }
}

MeanEstimate emission_average(double phi_em, std::size_t samples, RngStream& rng) {
    if (samples == 0) throw InvalidParameter("emission_average needs at least one sample");
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double c = rng.uniform(-1.0, 1.0);
        const double x = std::cos(phi_em * c);
        const double delta = x - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (x - mean);
    }
    const double var = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(samples))};
}

void WalkProfile::validate() const {
    if (steps < 100) throw InvalidParameter("walk profile needs at least 100 steps per segment");
    if (!(tau_cat >= 0.0) || !(tau_wait >= 0.0) || !(n_cat >= 0.0))
        throw InvalidParameter("walk profile times and size must be non-negative");
}

double WalkProfile::total_time() const {
    return shape == WalkShape::Triangle ? 2.0 * tau_cat : 2.0 * tau_cat + tau_wait;
}

double WalkProfile::amplitude(double t) const {
    const double peak = std::sqrt(n_cat);
    const double plateau = shape == WalkShape::Triangle ? 0.0 : tau_wait;
    if (t <= 0.0) return 0.0;
    if (t < tau_cat) return peak * t / tau_cat;
    if (t <= tau_cat + plateau) return peak;
    const double end = 2.0 * tau_cat + plateau;
    if (t >= end) return 0.0;
    return peak * (end - t) / tau_cat;
}

namespace {

struct Segment {
    double start;
    double length;
};

std::vector<Segment> segments(const WalkProfile& p) {
    std::vector<Segment> out{{0.0, p.tau_cat}};
    if (p.shape == WalkShape::Trapezoid && p.tau_wait > 0.0) out.push_back({p.tau_cat, p.tau_wait});
    out.push_back({p.total_time() - p.tau_cat, p.tau_cat});
    return out;
}

} // namespace

double walk_variance_analytic(const WalkProfile& profile, double heating_rate) {
    if (profile.shape == WalkShape::Triangle)
        return 16.0 / 3.0 * heating_rate * profile.tau_cat * profile.n_cat;
    return 8.0 * heating_rate * profile.n_cat * (2.0 / 3.0 * profile.tau_cat + profile.tau_wait);
}

double walk_variance_discrete(const WalkProfile& profile, double heating_rate) {
    profile.validate();
    double sum = 0.0;
    for (const auto& seg : segments(profile)) {
        const double dt = seg.length / static_cast<double>(profile.steps);
        for (std::size_t i = 0; i < profile.steps; ++i) {
            const double a = profile.amplitude(seg.start + (static_cast<double>(i) + 0.5) * dt);
            sum += a * a * dt;
        }
    }
    return 8.0 * heating_rate * sum;
}

double heating_walk(const WalkProfile& profile, double heating_rate, RngStream& rng) {
    profile.validate();
    if (heating_rate < 0.0) throw InvalidParameter("heating rate must be non-negative");
    if (heating_rate == 0.0) return 0.0;
    const double end_point = profile.amplitude(profile.total_time());
    const double start_point = profile.amplitude(0.0);
    double phase_plus = 0.0;
    for (const auto& seg : segments(profile)) {
        const double dt = seg.length / static_cast<double>(profile.steps);
        const double kick_sigma = std::sqrt(0.5 * heating_rate * dt);
        for (std::size_t i = 0; i < profile.steps; ++i) {
            const double t = seg.start + (static_cast<double>(i) + 0.5) * dt;
            // Displacement before the kick (alpha1) and still to come (alpha2).
            const double a_t = profile.amplitude(t);
            const std::complex<double> before(a_t - start_point, 0.0);
            const std::complex<double> after(end_point - a_t, 0.0);
            const double dx = kick_sigma * rng.normal();
            const double dp = kick_sigma * rng.normal();
            const std::complex<double> kick(dx, dp);
            phase_plus += std::imag(std::conj(before - after) * kick);
        }
    }
    // The mirrored component follows -alpha(t) and picks up the opposite phase.
    const double phase_minus = -phase_plus;
    return phase_plus - phase_minus;
}

WalkStatistics heating_walk_statistics(const WalkProfile& profile, double heating_rate, std::size_t walks,
                                       const RngStream& rng, unsigned workers) {
    profile.validate();
    if (walks < 2) throw InvalidParameter("need at least two walks for a variance estimate");
    constexpr std::size_t per_batch = 256;
    const std::size_t batches = (walks + per_batch - 1) / per_batch;
    std::vector<double> samples(walks);
    for_each_batch(batches, workers, [&](std::size_t b) {
        RngStream stream = rng.substream(b);
        const std::size_t end = std::min(walks, (b + 1) * per_batch);
        for (std::size_t i = b * per_batch; i < end; ++i) samples[i] = heating_walk(profile, heating_rate, stream);
    });

    const double n = static_cast<double>(walks);
    double sum = 0.0, sum2 = 0.0, sum3 = 0.0, sum4 = 0.0;
    for (double x : samples) {
        const double x2 = x * x;
        sum += x;
        sum2 += x2;
        sum3 += x2 * x;
        sum4 += x2 * x2;
    }
    WalkStatistics st;
    st.walks = walks;
    st.mean = sum / n;
    // The walk has zero mean by construction, so <Phi^2> is estimated directly.
    st.variance = sum2 / n;
    const double var_of_sq = std::max(0.0, sum4 / n - st.variance * st.variance);
    st.std_error = std::sqrt(var_of_sq / (n - 1.0));
    st.skewness = st.variance > 0.0 ? (sum3 / n) / std::pow(st.variance, 1.5) : 0.0;
    return st;
}

ContrastCheck gaussian_contrast_check(double variance, std::size_t samples, RngStream& rng) {
    if (!(variance >= 0.0)) throw InvalidParameter("variance must be non-negative");
    if (samples == 0) throw InvalidParameter("need at least one sample");
    const double sd = std::sqrt(variance);
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = std::cos(sd * rng.normal());
        const double delta = x - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (x - mean);
    }
    const double se = samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples)) : 0.0;
    return {mean, se, std::exp(-0.5 * variance)};
}

ProtocolEstimate simulate_protocol(const ProtocolParams& params, double phi_sc, std::size_t shots,
                                   double scatter_prob, const RngStream& rng, unsigned workers) {
    params.validate();
    if (shots == 0) throw InvalidParameter("simulate_protocol needs at least one shot");
    if (!(scatter_prob >= 0.0 && scatter_prob <= 1.0))
        throw InvalidParameter("scatter probability must lie in [0, 1]");

    const double absorbed = phi_abs(params, phi_sc);
    const double emitted = phi_em_amplitude(params, phi_sc);
    const double heating_sd = std::sqrt(heating_phase_variance(params));

    const std::size_t batches = (shots + kShotBatch - 1) / kShotBatch;
    std::vector<std::uint64_t> up_z(batches, 0), up_y(batches, 0);
    for_each_batch(batches, workers, [&](std::size_t b) {
        RngStream stream = rng.substream(b);
        const std::size_t n = std::min(kShotBatch, shots - b * kShotBatch);
        std::uint64_t kz = 0, ky = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (int basis = 0; basis < 2; ++basis) {
                double phase = heating_sd > 0.0 ? heating_sd * stream.normal() : 0.0;
                if (stream.bernoulli(scatter_prob)) phase += absorbed + emitted * stream.uniform(-1.0, 1.0);
                if (basis == 0) {
                    kz += stream.bernoulli(0.5 * (1.0 - std::cos(phase))) ? 1 : 0;
                } else {
                    ky += stream.bernoulli(0.5 * (1.0 + std::sin(phase))) ? 1 : 0;
                }
            }
        }
        up_z[b] = kz;
        up_y[b] = ky;
    });

    std::uint64_t kz = 0, ky = 0;
    for (std::size_t b = 0; b < batches; ++b) {
        kz += up_z[b];
        ky += up_y[b];
    }
    const double n = static_cast<double>(shots);
    const double pz = static_cast<double>(kz) / n;
    const double py = static_cast<double>(ky) / n;
    ProtocolEstimate est;
    est.shots = shots;
    est.sz = 2.0 * pz - 1.0;
    est.sy = 2.0 * py - 1.0;
    est.sz_err = 2.0 * std::sqrt(pz * (1.0 - pz) / n);
    est.sy_err = 2.0 * std::sqrt(py * (1.0 - py) / n);
    return est;
}

} // namespace catspec
