#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "catspec/rng.hpp"
#include "catspec/signal.hpp"

namespace catspec {

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo estimate of the emission-averaged cos(phi_em cos(theta)) with
/// cos(theta) uniform on [-1, 1]; converges to sinc(phi_em).
MeanEstimate emission_average(double phi_em, std::size_t samples, RngStream& rng);

enum class WalkShape { Triangle, Trapezoid };

/// Trajectory |alpha(t)| of one cat component: a linear ramp to sqrt(n_cat)
/// over tau_cat, an optional plateau of tau_wait (trapezoid only), and a
/// linear ramp back. `steps` is the number of heating kicks per segment.
struct WalkProfile {
    WalkShape shape = WalkShape::Trapezoid;
    double tau_cat = 50e-6;
    double tau_wait = 32e-6;
    double n_cat = 8.3;
    std::size_t steps = 1000;

    void validate() const;
    double total_time() const;
    double amplitude(double t) const;
};

/// Closed-form mean squared heating phase for the profile:
/// 16/3 R_h tau n_cat (triangle) or 8 R_h n_cat (2/3 tau_cat + tau_wait).
double walk_variance_analytic(const WalkProfile& profile, double heating_rate);

/// Expected mean squared phase of the discretised walk, 8 R_h sum |alpha(t_i)|^2 dt.
double walk_variance_discrete(const WalkProfile& profile, double heating_rate);

/// One sample of the relative heating phase between the two cat components.
/// Each step applies a Gaussian kick with per-quadrature variance R_h dt / 2.
double heating_walk(const WalkProfile& profile, double heating_rate, RngStream& rng);

struct WalkStatistics {
    double variance = 0.0;   // <Phi_h^2>
    double std_error = 0.0;  // of the variance estimate
    double mean = 0.0;
    double skewness = 0.0;
    std::size_t walks = 0;
};

/// Run `walks` independent heating walks. Walk i draws from a substream fixed
/// by i's batch, so the result does not depend on the worker count.
WalkStatistics heating_walk_statistics(const WalkProfile& profile, double heating_rate, std::size_t walks,
                                       const RngStream& rng, unsigned workers = 0);

struct ContrastCheck {
    double mc_mean_cos = 0.0;
    double mc_std_error = 0.0;
    double analytic = 1.0;
};

/// Compare the sample mean of cos(X), X ~ Normal(0, variance), with exp(-variance/2).
ContrastCheck gaussian_contrast_check(double variance, std::size_t samples, RngStream& rng);

struct ProtocolEstimate {
    double sz = 0.0;
    double sy = 0.0;
    double sz_err = 0.0;
    double sy_err = 0.0;
    std::size_t shots = 0;
};

/// Shot-level simulation of the full protocol at one scatter phase. Each
/// basis receives `shots` projective measurements.
ProtocolEstimate simulate_protocol(const ProtocolParams& params, double phi_sc, std::size_t shots,
                                   double scatter_prob, const RngStream& rng, unsigned workers = 0);

/// Deterministic batch runner: calls fn(batch) for every batch index in
/// [0, batches) across up to `workers` threads (0 = hardware concurrency).
void for_each_batch(std::size_t batches, unsigned workers, const std::function<void(std::size_t)>& fn);

inline constexpr std::size_t kShotBatch = 8192;

} // namespace catspec
