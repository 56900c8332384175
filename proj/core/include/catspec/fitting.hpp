#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace catspec {

/// Data points with per-point standard deviations.
struct WeightedSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> sigma;

    std::size_t size() const { return x.size(); }
    void validate(std::size_t parameters) const;
};

struct FitResult {
    Eigen::VectorXd params;
    Eigen::MatrixXd covariance;
    double chi2 = 0.0;
    bool converged = false;
    int iterations = 0;

    double error(Eigen::Index i) const;
};

struct FitOptions {
    int max_iterations = 200;
    double step_tolerance = 1e-12;
};

/// Model value at x for parameters p; writes d value / d p into `gradient`.
using ModelFunction = std::function<double(double x, const Eigen::VectorXd& p, Eigen::Ref<Eigen::VectorXd> gradient)>;

/// Weighted Gauss-Newton with Levenberg damping.
FitResult levenberg_marquardt(const ModelFunction& model, const WeightedSeries& data, Eigen::VectorXd start,
                              const FitOptions& options = {});

/// J^T W r at `params`; vanishes at a stationary point.
Eigen::VectorXd weighted_gradient(const ModelFunction& model, const WeightedSeries& data, const Eigen::VectorXd& params);

/// offset + amplitude * sin(2 pi x / period + phase)
struct SinusoidFit {
    FitResult fit; // params: amplitude, phase, offset, period
    double amplitude = 0.0;
    double phase = 0.0;
    double offset = 0.0;
    double period = 0.0;
    double amplitude_err = 0.0;
    double period_err = 0.0;
};

ModelFunction sinusoid_model();

/// Fit a sinusoid with the period free, starting from `period_hint`. The
/// amplitude is reported non-negative and the phase lies in [0, 2 pi).
SinusoidFit fit_sinusoid(const WeightedSeries& data, double period_hint, const FitOptions& options = {});

/// offset + amplitude * exp(-(x - center)^2 / (2 width^2))
struct GaussianFit {
    FitResult fit; // params: center, width, amplitude, offset
    double center = 0.0;
    double width = 0.0;
    double amplitude = 0.0;
    double offset = 0.0;
    double fwhm = 0.0;
    double fwhm_err = 0.0;
};

ModelFunction gaussian_model();

inline double fwhm_from_width(double width) { return 2.0 * std::sqrt(2.0 * std::log(2.0)) * std::abs(width); }

GaussianFit fit_gaussian(const WeightedSeries& data, const FitOptions& options = {});

} // namespace catspec
