#include "catspec/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "catspec/constants.hpp"
#include "catspec/error.hpp"

namespace catspec {

void WeightedSeries::validate(std::size_t parameters) const {
    if (x.size() != y.size() || x.size() != sigma.size())
        throw InvalidParameter("series x, y and sigma must have equal lengths");
    if (x.size() < parameters + 1) throw InvalidParameter("too few points for the number of fit parameters");
    for (double s : sigma)
        if (!(s > 0.0)) throw InvalidParameter("series sigma must be positive");
}

double FitResult::error(Eigen::Index i) const {
    if (covariance.rows() <= i) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(std::max(0.0, covariance(i, i)));
}

namespace {

struct Linearisation {
    Eigen::MatrixXd jacobian; // weighted: rows scaled by 1/sigma
    Eigen::VectorXd residual; // weighted: (y - f) / sigma
    double chi2 = 0.0;
};

Linearisation linearise(const ModelFunction& model, const WeightedSeries& data, const Eigen::VectorXd& p) {
    const auto n = static_cast<Eigen::Index>(data.size());
    Linearisation lin;
    lin.jacobian.resize(n, p.size());
    lin.residual.resize(n);
    Eigen::VectorXd grad(p.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double f = model(data.x[k], p, grad);
        const double w = 1.0 / data.sigma[k];
        lin.residual[i] = (data.y[k] - f) * w;
        lin.jacobian.row(i) = grad.transpose() * w;
    }
    lin.chi2 = lin.residual.squaredNorm();
    return lin;
}

double chi2_at(const ModelFunction& model, const WeightedSeries& data, const Eigen::VectorXd& p) {
    Eigen::VectorXd grad(p.size());
    double chi2 = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double r = (data.y[i] - model(data.x[i], p, grad)) / data.sigma[i];
        chi2 += r * r;
    }
    return chi2;
}

} // namespace

FitResult levenberg_marquardt(const ModelFunction& model, const WeightedSeries& data, Eigen::VectorXd start,
                              const FitOptions& options) {
    data.validate(static_cast<std::size_t>(start.size()));
    FitResult result;
    Eigen::VectorXd p = std::move(start);
    Linearisation lin = linearise(model, data, p);
    double lambda = 1e-3;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        const Eigen::MatrixXd jtj = lin.jacobian.transpose() * lin.jacobian;
        const Eigen::VectorXd jtr = lin.jacobian.transpose() * lin.residual;
        bool accepted = false;
        Eigen::VectorXd step;
        for (int tries = 0; tries < 40; ++tries) {
            Eigen::MatrixXd damped = jtj;
            for (Eigen::Index d = 0; d < damped.rows(); ++d) damped(d, d) += lambda * std::max(jtj(d, d), 1e-300);
            step = damped.ldlt().solve(jtr);
            const Eigen::VectorXd trial = p + step;
            const double trial_chi2 = chi2_at(model, data, trial);
            if (std::isfinite(trial_chi2) && trial_chi2 <= lin.chi2) {
                p = trial;
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted) {
            // No downhill step at any damping: p is stationary to working precision.
            result.converged = true;
            break;
        }
        lin = linearise(model, data, p);
        if (step.norm() <= options.step_tolerance * (p.norm() + options.step_tolerance)) {
            result.converged = true;
            ++it;
            break;
        }
    }
    result.iterations = it;
    result.params = p;
    result.chi2 = lin.chi2;
    const Eigen::MatrixXd jtj = lin.jacobian.transpose() * lin.jacobian;
    result.covariance = jtj.completeOrthogonalDecomposition().pseudoInverse();
    result.covariance = 0.5 * (result.covariance + result.covariance.transpose()).eval();
    return result;
}

Eigen::VectorXd weighted_gradient(const ModelFunction& model, const WeightedSeries& data, const Eigen::VectorXd& params) {
    const Linearisation lin = linearise(model, data, params);
    return lin.jacobian.transpose() * lin.residual;
}

ModelFunction sinusoid_model() {
    return [](double x, const Eigen::VectorXd& p, Eigen::Ref<Eigen::VectorXd> g) {
        const double amplitude = p[0], phase = p[1], offset = p[2], period = p[3];
        const double arg = constants::two_pi * x / period + phase;
        const double s = std::sin(arg), c = std::cos(arg);
        g[0] = s;
        g[1] = amplitude * c;
        g[2] = 1.0;
        g[3] = -amplitude * c * constants::two_pi * x / (period * period);
        return offset + amplitude * s;
    };
}

SinusoidFit fit_sinusoid(const WeightedSeries& data, double period_hint, const FitOptions& options) {
    data.validate(4);
    if (!(period_hint > 0.0)) throw InvalidParameter("period hint must be positive");

    // Coarse phase scan; amplitude and offset are linear for a fixed phase.
    double best_chi2 = std::numeric_limits<double>::infinity();
    Eigen::Vector4d start(0.0, 0.0, 0.0, period_hint);
    for (int k = 0; k < 32; ++k) {
        const double phase = constants::two_pi * k / 32.0;
        Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
        Eigen::Vector2d b = Eigen::Vector2d::Zero();
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double w = 1.0 / (data.sigma[i] * data.sigma[i]);
            const Eigen::Vector2d basis(std::sin(constants::two_pi * data.x[i] / period_hint + phase), 1.0);
            a += w * basis * basis.transpose();
            b += w * basis * data.y[i];
        }
        const Eigen::Vector2d coef = a.ldlt().solve(b);
        Eigen::Vector4d trial(coef[0], phase, coef[1], period_hint);
        const double chi2 = chi2_at(sinusoid_model(), data, trial);
        if (chi2 < best_chi2) {
            best_chi2 = chi2;
            start = trial;
        }
    }

    SinusoidFit out;
    out.fit = levenberg_marquardt(sinusoid_model(), data, start, options);
    auto& p = out.fit.params;
    if (p[0] < 0.0) {
        p[0] = -p[0];
        p[1] += constants::pi;
    }
    p[1] = std::fmod(p[1], constants::two_pi);
    if (p[1] < 0.0) p[1] += constants::two_pi;
    out.amplitude = p[0];
    out.phase = p[1];
    out.offset = p[2];
    out.period = p[3];
    out.amplitude_err = out.fit.error(0);
    out.period_err = out.fit.error(3);
    return out;
}

ModelFunction gaussian_model() {
    return [](double x, const Eigen::VectorXd& p, Eigen::Ref<Eigen::VectorXd> g) {
        const double center = p[0], width = p[1], amplitude = p[2], offset = p[3];
        const double u = (x - center) / width;
        const double e = std::exp(-0.5 * u * u);
        g[0] = amplitude * e * u / width;
        g[1] = amplitude * e * u * u / width;
        g[2] = e;
        g[3] = 1.0;
        return offset + amplitude * e;
    };
}

GaussianFit fit_gaussian(const WeightedSeries& data, const FitOptions& options) {
    data.validate(4);
    // Weighted moments above the lowest point.
    const double floor = *std::min_element(data.y.begin(), data.y.end());
    const double peak = *std::max_element(data.y.begin(), data.y.end());
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double h = std::max(0.0, data.y[i] - floor);
        m0 += h;
        m1 += h * data.x[i];
    }
    const double center = m0 > 0.0 ? m1 / m0 : 0.5 * (data.x.front() + data.x.back());
    double m2 = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double h = std::max(0.0, data.y[i] - floor);
        m2 += h * (data.x[i] - center) * (data.x[i] - center);
    }
    double width = m0 > 0.0 ? std::sqrt(m2 / m0) : 0.0;
    if (!(width > 0.0)) {
        const auto [lo, hi] = std::minmax_element(data.x.begin(), data.x.end());
        width = 0.25 * (*hi - *lo);
    }

    GaussianFit out;
    out.fit = levenberg_marquardt(gaussian_model(), data, Eigen::Vector4d(center, width, peak - floor, floor), options);
    auto& p = out.fit.params;
    p[1] = std::abs(p[1]);
    out.center = p[0];
    out.width = p[1];
    out.amplitude = p[2];
    out.offset = p[3];
    out.fwhm = fwhm_from_width(out.width);
    out.fwhm_err = fwhm_from_width(out.fit.error(1));
    return out;
}

} // namespace catspec
