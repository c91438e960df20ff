#include <random>

#include <gtest/gtest.h>

#include "rydsim/liouville.hpp"
#include "support/oracle.hpp"
#include "support/testutil.hpp"

using namespace rydsim;
using constants::two_pi;

namespace {

Matrix3c basis_state(int k) {
    Matrix3c rho = Matrix3c::Zero();
    rho(k, k) = 1.0;
    return rho;
}

// Closed-form two-level steady state driven on 1<->2.
double two_level_rho22(double omega, double delta, double gamma) {
    return 0.25 * omega * omega /
           (delta * delta + 0.5 * omega * omega + 0.25 * gamma * gamma);
}

}  // namespace

TEST(Hamiltonian, ZeroParametersGiveZeroMatrix) {
    EXPECT_NEAR(build_hamiltonian({0, 0, 0, 0}).cwiseAbs().maxCoeff(), 0.0, 0.0);
}

TEST(Hamiltonian, MatchesLadderStructure) {
    const double om780 = two_pi * 220e6, om480 = two_pi * 2.2e9;
    const Matrix3c h = build_hamiltonian({om780, om480, 0.0, 0.0});
    EXPECT_DOUBLE_EQ(h(0, 1).real(), 0.5 * om780);
    EXPECT_DOUBLE_EQ(h(1, 2).real(), 0.5 * om480);
    EXPECT_DOUBLE_EQ(h(0, 2).real(), 0.0);
    EXPECT_DOUBLE_EQ(h(0, 0).real(), 0.0);
    EXPECT_DOUBLE_EQ(h(1, 1).real(), 0.0);
    EXPECT_NEAR(hermiticity_deviation(h), 0.0, 0.0);

    const Matrix3c hd = build_hamiltonian({om780, om480, two_pi * 1e6, two_pi * 3e6});
    EXPECT_DOUBLE_EQ(hd(1, 1).real(), -two_pi * 1e6);
    EXPECT_DOUBLE_EQ(hd(2, 2).real(), -two_pi * (1e6 + 3e6));
}

TEST(Hamiltonian, ResonantEigenvaluesAreHalfQuadratureSum) {
    const double om780 = two_pi * 220e6, om480 = two_pi * 2.2e9;
    const Matrix3c h = build_hamiltonian({om780, om480, 0.0, 0.0});
    Eigen::SelfAdjointEigenSolver<Matrix3c> solver(h);
    const double split = 0.5 * std::hypot(om780, om480);
    EXPECT_NEAR(solver.eigenvalues()(0), -split, 1e-3);
    EXPECT_NEAR(solver.eigenvalues()(1), 0.0, 1e-3);
    EXPECT_NEAR(solver.eigenvalues()(2), split, 1e-3);
}

TEST(Lindblad, GroundStateDoesNotDecay) {
    const DecayRates g{two_pi * 6e6, two_pi * 8e3};
    EXPECT_NEAR(lindblad_apply(basis_state(0), g).cwiseAbs().maxCoeff(), 0.0, 0.0);
}

TEST(Lindblad, IntermediateStateDecaysToGround) {
    const DecayRates g{two_pi * 6e6, two_pi * 8e3};
    const Matrix3c out = lindblad_apply(basis_state(1), g);
    EXPECT_DOUBLE_EQ(out(0, 0).real(), g.gamma_12);
    EXPECT_DOUBLE_EQ(out(1, 1).real(), -g.gamma_12);
    EXPECT_DOUBLE_EQ(out(2, 2).real(), 0.0);
    EXPECT_NEAR((out - out.adjoint()).cwiseAbs().maxCoeff(), 0.0, 0.0);
    EXPECT_NEAR(std::abs(out.trace()), 0.0, 0.0);
}

TEST(Lindblad, RydbergStateDecaysToIntermediate) {
    const DecayRates g{two_pi * 6e6, two_pi * 8e3};
    const Matrix3c out = lindblad_apply(basis_state(2), g);
    EXPECT_DOUBLE_EQ(out(1, 1).real(), g.gamma_23);
    EXPECT_DOUBLE_EQ(out(2, 2).real(), -g.gamma_23);
    EXPECT_DOUBLE_EQ(out(0, 0).real(), 0.0);
}

TEST(Lindblad, TracelessAndHermitianOnRandomStates) {
    const DecayRates g{two_pi * 6e6, two_pi * 8e3};
    std::mt19937 rng(5);
    for (int i = 0; i < 100; ++i) {
        const Matrix3c rho = testutil::random_density(rng);
        const Matrix3c out = lindblad_apply(rho, g);
        EXPECT_LT(std::abs(out.trace()), 1e-12 * g.gamma_12);
        EXPECT_LT((out - out.adjoint()).cwiseAbs().maxCoeff(), 1e-12 * g.gamma_12);
    }
}

TEST(Rhs, AllZeroGivesZero) {
    const DriveAtVelocity drive{};
    const DecayRates g{0.0, 0.0};
    std::mt19937 rng(9);
    const Matrix3c rho = testutil::random_density(rng);
    EXPECT_NEAR(rhs(0.0, rho, drive, g).cwiseAbs().maxCoeff(), 0.0, 0.0);
}

TEST(Rhs, VanishesOnSteadyState) {
    const DecayRates g{two_pi * 6e6, two_pi * 8e3};
    DriveAtVelocity drive;
    drive.omega_780_peak = two_pi * 220e6;
    const Matrix3c rho = steady_state(drive.omega_780_peak, 0.0, g);
    EXPECT_LT(rhs(0.0, rho, drive, g).cwiseAbs().maxCoeff(), 1e-9 * g.gamma_12);
}

TEST(Rhs, ResonantProbeCoherenceGrowthFromGround) {
    // d(rho21)/dt = -i/2 Omega780 from the ground state under the printed
    // Hamiltonian: [H,rho]_21 = H21 rho11 = Omega/2, times -i.
    const double om = two_pi * 220e6;
    DriveAtVelocity drive;
    drive.omega_780_peak = om;
    const Matrix3c out = rhs(0.0, ground_state(), drive, DecayRates{0.0, 0.0});
    EXPECT_NEAR(out(1, 0).real(), 0.0, 1e-6);
    EXPECT_NEAR(out(1, 0).imag(), -0.5 * om, 1e-3);
}

TEST(Rhs, AgreesWithIndependentSuperoperatorEncoding) {
    // Cross-check the production right-hand side against the test-only
    // elementwise encoding on random states and parameters.
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        DriveAtVelocity drive;
        drive.omega_780_peak = two_pi * 500e6 * dist(rng);
        drive.omega_480_peak = two_pi * 3e9 * dist(rng);
        drive.delta_780 = two_pi * 1e9 * (dist(rng) - 0.5);
        drive.delta_480 = two_pi * 1e9 * (dist(rng) - 0.5);
        const DecayRates g{two_pi * 10e6 * dist(rng), two_pi * 50e3 * dist(rng)};
        const Matrix3c rho = testutil::random_density(rng);

        const Matrix3c direct = rhs(0.0, rho, drive, g);
        const auto sup = oracle::superoperator(drive.omega_780_peak, drive.omega_480_peak,
                                               drive.delta_780, drive.delta_480,
                                               g.gamma_12, g.gamma_23);
        const Matrix3c via_super = oracle::unvec(sup * oracle::vec(rho));
        EXPECT_LT((direct - via_super).cwiseAbs().maxCoeff(),
                  1e-9 * direct.cwiseAbs().maxCoeff() + 1e-9);
    }
}

TEST(SteadyState, UndrivenAtomRelaxesToGround) {
    const DecayRates g{two_pi * 6e6, two_pi * 8e3};
    const Matrix3c rho = steady_state(0.0, 0.0, g);
    EXPECT_NEAR((rho - ground_state()).cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

TEST(SteadyState, PaperParametersGiveHalfIntermediatePopulation) {
    const DecayRates g{two_pi * 6e6, two_pi * 8e3};
    const Matrix3c rho = steady_state(two_pi * 220e6, 0.0, g);
    EXPECT_NEAR(rho(1, 1).real(), 0.4998, 1e-4);
    EXPECT_NEAR(rho(1, 1).real(), two_level_rho22(two_pi * 220e6, 0.0, g.gamma_12), 1e-10);
}

TEST(SteadyState, MatchesClosedFormAcrossParameters) {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double om = two_pi * 400e6 * dist(rng);
        const double delta = two_pi * 300e6 * (dist(rng) - 0.5);
        const double gamma = two_pi * (1e6 + 20e6 * dist(rng));
        const Matrix3c rho = steady_state(om, delta, DecayRates{gamma, two_pi * 8e3});
        EXPECT_NEAR(rho(1, 1).real(), two_level_rho22(om, delta, gamma), 1e-10);
        EXPECT_LT(trace_deviation(rho), 1e-10);
        EXPECT_LT(hermiticity_deviation(rho), 1e-12);
        EXPECT_GT(min_eigenvalue_hermitian(rho), -1e-10);
    }
}

TEST(SteadyState, RydbergLevelStaysEmpty) {
    const Matrix3c rho = steady_state(two_pi * 220e6, two_pi * 50e6,
                                      DecayRates{two_pi * 6e6, two_pi * 8e3});
    EXPECT_NEAR(std::abs(rho(2, 2)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(rho(0, 2)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(rho(1, 2)), 0.0, 1e-14);
}

TEST(SteadyState, SingularWithoutDecayThrows) {
    EXPECT_THROW(steady_state(two_pi * 220e6, 0.0, DecayRates{0.0, 0.0}), NumericalError);
}

TEST(Superoperator, ColumnsMatchRhsOnBasisMatrices) {
    const HamiltonianParams p{two_pi * 220e6, two_pi * 2.2e9, two_pi * 10e6, -two_pi * 40e6};
    const DecayRates g{two_pi * 6e6, two_pi * 8e3};
    const Matrix9c sup = liouvillian_superoperator(p, g);
    std::mt19937 rng(21);
    const Matrix3c rho = testutil::random_density(rng);
    DriveAtVelocity drive;
    drive.omega_780_peak = p.omega_780;
    drive.omega_480_peak = p.omega_480;
    drive.delta_780 = p.delta_780;
    drive.delta_480 = p.delta_480;
    const Matrix3c direct = rhs(0.0, rho, drive, g);
    const Matrix3c via = unvectorize(sup * vectorize(rho));
    EXPECT_LT((direct - via).cwiseAbs().maxCoeff(), 1e-6);
}
