#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "catspec/phasespace.hpp"
#include "catspec/signal.hpp"

namespace catspec::fock {

using Complex = std::complex<double>;
using OperatorMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr std::size_t kMinDim = 8;
inline constexpr double kTruncationTolerance = 1e-6;

/// Truncated motional annihilation operator on number states 0..dim-1.
OperatorMatrix annihilation(std::size_t dim);

/// Dense matrix exponential by scaling and squaring of a Taylor series.
OperatorMatrix expm(const OperatorMatrix& generator);

/// A unitary built on a truncated Fock space, plus how far truncation and
/// round-off pushed it from the infinite-dimensional operator.
struct TruncatedOperator {
    OperatorMatrix matrix;
    double unitarity_defect = 0.0; // max |U^dagger U - I|
    double truncation_tail = 0.0;  // coherent-state population beyond the cutoff
    bool truncation_error = false;
};

/// Population of |amplitude| coherent state in number states >= dim.
double coherent_tail(double amplitude, std::size_t dim);

/// D(alpha) = exp(alpha a^dagger - alpha^* a) on the motion alone.
TruncatedOperator displacement_matrix(PhasePoint alpha, std::size_t dim);

/// U_D = exp(alpha (a^dagger - a) sigma_x) on qubit (x) motion.
TruncatedOperator cat_unitary(double alpha, std::size_t dim);

/// Qubit (x) truncated oscillator. Joint index is q * dim + n with q = 0 for
/// |down>_z and q = 1 for |up>_z.
class JointState {
public:
    explicit JointState(std::size_t dim);

    /// |down>_z |0>.
    static JointState ground(std::size_t dim) { return JointState(dim); }

    std::size_t dim() const { return dim_; }
    const StateVector& amplitudes() const { return amps_; }
    StateVector& amplitudes() { return amps_; }
    Complex amplitude(int qubit, std::size_t n) const { return amps_[static_cast<Eigen::Index>(qubit * dim_ + n)]; }

    double norm() const { return amps_.norm(); }
    void apply(const OperatorMatrix& joint_operator);

    /// Apply D(beta) to the motion, leaving the qubit untouched. Evaluated
    /// directly on the vector by a sub-stepped Taylor series of the truncated
    /// generator.
    void displace(PhasePoint beta);

    double sigma_z() const;
    double sigma_y() const;
    double mean_phonons() const;
    /// Population in the top eighth of the number basis.
    double edge_population() const;

private:
    std::size_t dim_;
    StateVector amps_;
};

struct OracleResult {
    QubitExpectation value;
    double norm_defect = 0.0;
    bool truncation_error = false;
};

/// Cat protocol with operators cached for one (alpha, dim). The recoil kick
/// of strength eta is the phase-space displacement (eta / 2) exp(-i phi_sc)
/// in the frame where the cat components sit at +-alpha on the real axis.
/// Absorption and emission kicks follow each other within nanoseconds, so
/// both share phi_sc; the emission kick is scaled by cos(theta).
class ProtocolOracle {
public:
    ProtocolOracle(double alpha, std::size_t dim);

    double alpha() const { return alpha_; }
    std::size_t dim() const { return dim_; }
    bool truncation_error() const { return truncation_error_; }

    OracleResult run(double eta_abs, double eta_em, double phi_sc, double cos_theta) const;

private:
    double alpha_;
    std::size_t dim_;
    OperatorMatrix inverse_;
    JointState after_cat_;
    bool truncation_error_ = false;
};

/// Recoil kick used by the oracle for a combined Lamb-Dicke strength.
PhasePoint recoil_kick(double eta, double phi_sc);

/// Convenience wrapper: build the oracle and run one configuration.
OracleResult run_protocol_exact(const ProtocolParams& params, double phi_sc, double cos_theta, std::size_t dim = 128);

struct DirectDetection {
    double p_excited = 0.0;    // P(n = 1) after the kick
    Complex amp0{};            // <0| D(i eta e^{i phi}) |0>
    Complex amp1{};            // <1| D(i eta e^{i phi}) |0>
    QubitExpectation after_swap; // after an ideal red-sideband pi pulse on the n <= 1 manifold
};

/// Kick the motional ground state by D(i eta e^{i kick_phase}) and read out
/// the first excited state.
DirectDetection direct_detection_exact(double eta, std::size_t dim = 32, double kick_phase = 0.0);

} // namespace catspec::fock
