#include "catspec/fock_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "catspec/error.hpp"

namespace catspec::fock {

namespace {

void check_dim(std::size_t dim) {
    if (dim < kMinDim) throw InvalidParameter("Fock truncation must be at least 8");
}

double max_unitarity_defect(const OperatorMatrix& u) {
    const auto n = u.rows();
    return (u.adjoint() * u - OperatorMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

bool amplitude_fits(double amplitude, std::size_t dim) {
    return amplitude * amplitude + 5.0 * amplitude < static_cast<double>(dim);
}

} // namespace

OperatorMatrix annihilation(std::size_t dim) {
    OperatorMatrix a = OperatorMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t n = 1; n < dim; ++n)
        a(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) = std::sqrt(static_cast<double>(n));
    return a;
}

OperatorMatrix expm(const OperatorMatrix& generator) {
    const auto n = generator.rows();
    const double norm1 = generator.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    const OperatorMatrix scaled = generator / std::ldexp(1.0, squarings);

    OperatorMatrix result = OperatorMatrix::Identity(n, n);
    OperatorMatrix term = OperatorMatrix::Identity(n, n);
    for (int k = 1; k <= 40; ++k) {
        term = (term * scaled) / static_cast<double>(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

double coherent_tail(double amplitude, std::size_t dim) {
    // Poisson(|alpha|^2) mass at n >= dim, summed upward from the cutoff.
    const double mean = amplitude * amplitude;
    if (mean == 0.0) return 0.0;
    const double d = static_cast<double>(dim);
    double log_term = -mean + d * std::log(mean) - std::lgamma(d + 1.0);
    double tail = 0.0;
    for (std::size_t k = dim; k < dim + 2000; ++k) {
        const double term = std::exp(log_term);
        tail += term;
        if (term < 1e-30 * std::max(tail, 1e-300) && static_cast<double>(k) > mean) break;
        log_term += std::log(mean) - std::log(static_cast<double>(k + 1));
    }
    return std::min(1.0, tail);
}

TruncatedOperator displacement_matrix(PhasePoint alpha, std::size_t dim) {
    check_dim(dim);
    const OperatorMatrix a = annihilation(dim);
    const Complex z = alpha.complex();
    TruncatedOperator op;
    op.matrix = expm(z * a.adjoint() - std::conj(z) * a);
    op.unitarity_defect = max_unitarity_defect(op.matrix);
    op.truncation_tail = coherent_tail(alpha.norm(), dim);
    op.truncation_error = op.unitarity_defect > kTruncationTolerance || op.truncation_tail > kTruncationTolerance ||
                          !amplitude_fits(alpha.norm(), dim);
    return op;
}

TruncatedOperator cat_unitary(double alpha, std::size_t dim) {
    check_dim(dim);
    const OperatorMatrix a = annihilation(dim);
    const OperatorMatrix motion = alpha * (a.adjoint() - a);
    const auto d = static_cast<Eigen::Index>(dim);
    // sigma_x couples the |down> and |up> blocks.
    OperatorMatrix generator = OperatorMatrix::Zero(2 * d, 2 * d);
    generator.block(0, d, d, d) = motion;
    generator.block(d, 0, d, d) = motion;
    TruncatedOperator op;
    op.matrix = expm(generator);
    op.unitarity_defect = max_unitarity_defect(op.matrix);
    op.truncation_tail = coherent_tail(std::abs(alpha), dim);
    op.truncation_error = op.unitarity_defect > kTruncationTolerance || op.truncation_tail > kTruncationTolerance ||
                          !amplitude_fits(std::abs(alpha), dim);
    return op;
}

JointState::JointState(std::size_t dim) : dim_(dim), amps_(StateVector::Zero(2 * static_cast<Eigen::Index>(dim))) {
    check_dim(dim);
    amps_[0] = 1.0;
}

void JointState::apply(const OperatorMatrix& joint_operator) {
    if (joint_operator.rows() != amps_.size() || joint_operator.cols() != amps_.size())
        throw InvalidParameter("operator does not match the joint state dimension");
    amps_ = joint_operator * amps_;
}

void JointState::displace(PhasePoint beta) {
    const Complex b = beta.complex();
    if (b == Complex{}) return;
    const double generator_norm = 2.0 * std::abs(b) * std::sqrt(static_cast<double>(dim_));
    const int substeps = std::max(1, static_cast<int>(std::ceil(generator_norm)));
    const Complex step = b / static_cast<double>(substeps);

    // v -> (step a^dagger - conj(step) a) v for one qubit block.
    auto generator = [&](const Complex* in, Complex* out) {
        for (std::size_t n = 0; n < dim_; ++n) {
            Complex acc{};
            if (n > 0) acc += step * std::sqrt(static_cast<double>(n)) * in[n - 1];
            if (n + 1 < dim_) acc -= std::conj(step) * std::sqrt(static_cast<double>(n + 1)) * in[n + 1];
            out[n] = acc;
        }
    };

    std::vector<Complex> term(dim_), next(dim_);
    for (int q = 0; q < 2; ++q) {
        Complex* block = amps_.data() + q * static_cast<Eigen::Index>(dim_);
        for (int s = 0; s < substeps; ++s) {
            std::copy(block, block + dim_, term.begin());
            for (int k = 1; k <= 60; ++k) {
                generator(term.data(), next.data());
                double largest = 0.0;
                for (std::size_t n = 0; n < dim_; ++n) {
                    term[n] = next[n] / static_cast<double>(k);
                    block[n] += term[n];
                    largest = std::max(largest, std::abs(term[n]));
                }
                if (largest < 1e-18) break;
            }
        }
    }
}

double JointState::sigma_z() const {
    double up = 0.0, down = 0.0;
    for (std::size_t n = 0; n < dim_; ++n) {
        down += std::norm(amplitude(0, n));
        up += std::norm(amplitude(1, n));
    }
    return up - down;
}

double JointState::sigma_y() const {
    // <sigma_y> = 2 Im(conj(c_up) c_down), traced over the motion.
    double acc = 0.0;
    for (std::size_t n = 0; n < dim_; ++n) acc += std::imag(std::conj(amplitude(1, n)) * amplitude(0, n));
    return 2.0 * acc;
}

double JointState::mean_phonons() const {
    double acc = 0.0;
    for (std::size_t n = 0; n < dim_; ++n)
        acc += static_cast<double>(n) * (std::norm(amplitude(0, n)) + std::norm(amplitude(1, n)));
    return acc;
}

double JointState::edge_population() const {
    double acc = 0.0;
    for (std::size_t n = dim_ - dim_ / 8; n < dim_; ++n) acc += std::norm(amplitude(0, n)) + std::norm(amplitude(1, n));
    return acc;
}

PhasePoint recoil_kick(double eta, double phi_sc) { return PhasePoint::polar(0.5 * eta, -phi_sc); }

ProtocolOracle::ProtocolOracle(double alpha, std::size_t dim) : alpha_(alpha), dim_(dim), after_cat_(dim) {
    const TruncatedOperator forward = cat_unitary(alpha, dim);
    truncation_error_ = forward.truncation_error;
    inverse_ = forward.matrix.adjoint();
    after_cat_.apply(forward.matrix);
}

OracleResult ProtocolOracle::run(double eta_abs, double eta_em, double phi_sc, double cos_theta) const {
    JointState state = after_cat_;
    state.displace(recoil_kick(eta_abs, phi_sc));
    state.displace(recoil_kick(eta_em * cos_theta, phi_sc));
    state.apply(inverse_);
    OracleResult r;
    r.value = {state.sigma_z(), state.sigma_y()};
    r.norm_defect = std::abs(state.norm() - 1.0);
    r.truncation_error = truncation_error_ || state.edge_population() > kTruncationTolerance;
    return r;
}

OracleResult run_protocol_exact(const ProtocolParams& params, double phi_sc, double cos_theta, std::size_t dim) {
    params.validate();
    const ProtocolOracle oracle(params.alpha, dim);
    return oracle.run(params.eta_abs, params.eta_em, phi_sc, cos_theta);
}

DirectDetection direct_detection_exact(double eta, std::size_t dim, double kick_phase) {
    if (!(eta >= 0.0)) throw InvalidParameter("Lamb-Dicke factor must be non-negative");
    JointState state(dim);
    const Complex kick = Complex(0.0, eta) * std::polar(1.0, kick_phase);
    state.displace(PhasePoint(kick));

    DirectDetection out;
    out.amp0 = state.amplitude(0, 0);
    out.amp1 = state.amplitude(0, 1);
    out.p_excited = std::norm(out.amp1);

    // Ideal red-sideband pi pulse: |down,1> <-> |up,0>, rest of the space untouched.
    auto& v = state.amplitudes();
    const auto i_down1 = static_cast<Eigen::Index>(1);
    const auto i_up0 = static_cast<Eigen::Index>(dim);
    std::swap(v[i_down1], v[i_up0]);
    out.after_swap = {state.sigma_z(), state.sigma_y()};
    return out;
}

} // namespace catspec::fock
