#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include <unsupported/Eigen/MatrixFunctions>

#include "catspec/constants.hpp"
#include "catspec/fock_oracle.hpp"

using namespace catspec;
using namespace catspec::fock;

TEST(FockOracle, AnnihilationOperator) {
    const auto a = annihilation(10);
    for (int n = 1; n < 10; ++n) EXPECT_NEAR(a(n - 1, n).real(), std::sqrt(double(n)), 1e-15);
    EXPECT_NEAR(a.cwiseAbs().sum(), [] {
        double s = 0;
        for (int n = 1; n < 10; ++n) s += std::sqrt(double(n));
        return s;
    }(), 1e-12);
}

TEST(FockOracle, ExpmAgreesWithEigen) {
    const std::size_t dim = 24;
    const auto a = annihilation(dim);
    const std::complex<double> alpha(0.7, -0.4);
    const OperatorMatrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
    const OperatorMatrix ours = expm(gen);
    const OperatorMatrix ref = gen.exp();
    EXPECT_LT((ours - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FockOracle, DisplacedVacuumIsCoherentState) {
    const PhasePoint alpha{1.1, 0.6};
    const auto d = displacement_matrix(alpha, 64);
    EXPECT_FALSE(d.truncation_error);
    const std::complex<double> z = alpha.complex();
    std::complex<double> coeff = std::exp(-0.5 * std::norm(z));
    for (int n = 0; n < 15; ++n) {
        if (n > 0) coeff *= z / std::sqrt(double(n));
        EXPECT_LT(std::abs(d.matrix(n, 0) - coeff), 1e-10) << n;
    }
}

TEST(FockOracle, CoherentTail) {
    EXPECT_LT(coherent_tail(1.0, 40), 1e-20);
    EXPECT_NEAR(coherent_tail(1.0, 1), 1.0 - std::exp(-1.0), 1e-14);
}

TEST(FockOracle, CatStateProperties) {
    const std::size_t dim = 96;
    for (double alpha : {0.5, 1.0, 2.0}) {
        JointState s = JointState::ground(dim);
        s.apply(cat_unitary(alpha, dim).matrix);
        EXPECT_NEAR(s.norm(), 1.0, 1e-10);
        EXPECT_NEAR(s.mean_phonons(), alpha * alpha, 1e-8);
        EXPECT_NEAR(std::abs(s.sigma_z()), std::exp(-2.0 * alpha * alpha), 1e-10);
        EXPECT_NEAR(s.sigma_y(), 0.0, 1e-10);
    }
}

TEST(FockOracle, DisplaceMatchesMatrix) {
    const std::size_t dim = 64;
    JointState a = JointState::ground(dim);
    a.apply(cat_unitary(1.3, dim).matrix);
    JointState b = a;
    const PhasePoint beta{0.05, -0.12};
    a.displace(beta);
    const auto d = displacement_matrix(beta, dim).matrix;
    OperatorMatrix joint = OperatorMatrix::Zero(2 * dim, 2 * dim);
    joint.topLeftCorner(dim, dim) = d;
    joint.bottomRightCorner(dim, dim) = d;
    b.apply(joint);
    EXPECT_LT((a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(FockOracle, NoKickReturnsGround) {
    const ProtocolOracle oracle(2.88, 128);
    EXPECT_FALSE(oracle.truncation_error());
    const auto r = oracle.run(0.0, 0.0, 1.0, 0.3);
    EXPECT_NEAR(r.value.sz, -1.0, 1e-10);
    EXPECT_NEAR(r.value.sy, 0.0, 1e-10);
    EXPECT_LT(r.norm_defect, 1e-10);
}

TEST(FockOracle, MatchesAnalyticDirected) {
    ProtocolParams p = ProtocolParams::demonstration();
    p.heating_rate = 0.0;
    const ProtocolOracle oracle(p.alpha, 128);
    for (double phi : {0.2, 1.0, constants::pi / 2.0, 2.7}) {
        for (double c : {-1.0, 0.0, 0.6}) {
            const auto r = oracle.run(p.eta_abs, p.eta_em, phi, c);
            const auto e = expectation_directed(p, phi, c);
            EXPECT_NEAR(r.value.sz, e.sz, 1e-8) << phi << ' ' << c;
            EXPECT_NEAR(r.value.sy, e.sy, 1e-8) << phi << ' ' << c;
        }
    }
}

TEST(FockOracle, RecoilKickConvention) {
    const PhasePoint k = recoil_kick(0.2, constants::pi / 2.0);
    EXPECT_NEAR(k.re, 0.0, 1e-15);
    EXPECT_NEAR(k.im, -0.1, 1e-15);
}

TEST(FockOracle, RunProtocolExactWrapper) {
    ProtocolParams p = ProtocolParams::demonstration();
    p.heating_rate = 0.0;
    const auto r = run_protocol_exact(p, 0.8, 1.0, 96);
    const auto e = expectation_directed(p, 0.8, 1.0);
    EXPECT_NEAR(r.value.sy, e.sy, 1e-8);
}

TEST(FockOracle, DirectDetection) {
    for (double eta : {0.0, 0.05, 0.1, 0.3}) {
        const auto d = direct_detection_exact(eta);
        const double eta2 = eta * eta;
        EXPECT_NEAR(d.p_excited, eta2 * std::exp(-eta2), 1e-12);
        EXPECT_NEAR(std::norm(d.amp0), std::exp(-eta2), 1e-12);
    }
}

TEST(FockOracle, TruncationFlagged) {
    const auto d = displacement_matrix(PhasePoint{5.0, 0.0}, 16);
    EXPECT_TRUE(d.truncation_error);
    const ProtocolOracle small(3.0, 16);
    EXPECT_TRUE(small.truncation_error());
}
