#include <random>

#include <gtest/gtest.h>

#include "rydsim/constants.hpp"
#include "rydsim/types.hpp"
#include "support/testutil.hpp"

using namespace rydsim;
using constants::two_pi;

TEST(PulseEnvelope, GaussianPeaksAtCenterWithPeakScale) {
    PulseEnvelope env{PulseShape::Gaussian, 2e-9, 2.5e-9, 1.0};
    EXPECT_DOUBLE_EQ(envelope_value(2e-9, env), 1.0);
    env.peak_scale = 0.37;
    EXPECT_DOUBLE_EQ(envelope_value(2e-9, env), 0.37);
}

TEST(PulseEnvelope, AmplitudeIsInvSqrt2AtIntensityHalfWidth) {
    // Intensity at half maximum means amplitude at 1/sqrt(2).
    PulseEnvelope env{PulseShape::Gaussian, 0.0, 2.5e-9, 1.0};
    EXPECT_NEAR(envelope_value(1.25e-9, env), 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(envelope_value(-1.25e-9, env), 1.0 / std::sqrt(2.0), 1e-12);
    // Two half-widths out the intensity is at (1/2)^4, the amplitude at 1/4.
    EXPECT_NEAR(envelope_value(2.5e-9, env), 0.25, 1e-12);
}

TEST(PulseEnvelope, SymmetricAboutCenter) {
    PulseEnvelope env{PulseShape::Gaussian, 2e-9, 2.5e-9, 1.0};
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 10e-9);
    for (int i = 0; i < 200; ++i) {
        const double d = dist(rng);
        EXPECT_NEAR(envelope_value(env.center_time + d, env),
                    envelope_value(env.center_time - d, env), 1e-12);
    }
}

TEST(PulseEnvelope, IntensityEnvelopeFwhmMatchesBySection) {
    // Bisection on a(t)^2 = 1/2 recovers intensity_fwhm.
    PulseEnvelope env{PulseShape::Gaussian, 1e-9, 2.5e-9, 1.0};
    auto intensity = [&](double t) {
        const double a = envelope_value(t, env);
        return a * a;
    };
    double lo = env.center_time, hi = env.center_time + 10e-9;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (intensity(mid) > 0.5 ? lo : hi) = mid;
    }
    const double fwhm = 2.0 * (0.5 * (lo + hi) - env.center_time);
    EXPECT_NEAR(fwhm / env.intensity_fwhm, 1.0, 1e-9);
}

TEST(PulseEnvelope, FlatTopIsConstantInsideAndZeroOutside) {
    PulseEnvelope env{PulseShape::FlatTop, 0.0, 4e-9, 0.8};
    EXPECT_DOUBLE_EQ(envelope_value(0.0, env), 0.8);
    EXPECT_DOUBLE_EQ(envelope_value(1.99e-9, env), 0.8);
    EXPECT_DOUBLE_EQ(envelope_value(2.01e-9, env), 0.0);
    EXPECT_DOUBLE_EQ(envelope_value(-3e-9, env), 0.0);
}

TEST(PulseEnvelope, ValidatesFields) {
    PulseEnvelope env{PulseShape::Gaussian, 0.0, 0.0, 1.0};
    EXPECT_THROW(env.validate(), DomainError);
    env.intensity_fwhm = 1e-9;
    env.peak_scale = 1.5;
    EXPECT_THROW(env.validate(), DomainError);
}

TEST(RabiFromIntensity, AnchoredToQuotedPair) {
    // 21 MW/cm^2 <-> 2*pi*2.3 GHz fixes the calibration.
    RabiCalibration calib{2.1e11, two_pi * 2.3e9};
    EXPECT_NEAR(calib.rabi(2.1e11), two_pi * 2.3e9, 1e-3);
    EXPECT_DOUBLE_EQ(calib.rabi(0.0), 0.0);
    // Quarter intensity gives half the Rabi frequency.
    EXPECT_NEAR(calib.rabi(2.1e11 / 4.0), two_pi * 1.15e9, 1e-3);
}

TEST(RabiFromIntensity, SqrtLawProperty) {
    RabiCalibration calib{2.1e11, two_pi * 2.3e9};
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(0.0, 3e11);
    for (int i = 0; i < 100; ++i) {
        const double intensity = dist(rng);
        EXPECT_NEAR(calib.rabi(4.0 * intensity), 2.0 * calib.rabi(intensity),
                    1e-12 * calib.rabi(4.0 * intensity) + 1e-12);
    }
}

TEST(RabiFromIntensity, RejectsBadInput) {
    EXPECT_THROW(rabi_from_intensity(-1.0, 1.0), DomainError);
    EXPECT_THROW(rabi_from_intensity(1.0, 0.0), DomainError);
    EXPECT_THROW(rabi_from_intensity(1.0, -2.0), DomainError);
}

TEST(DensityMatrix, InvariantHelpers) {
    const Matrix3c rho = ground_state();
    EXPECT_NEAR(trace_deviation(rho), 0.0, 1e-15);
    EXPECT_NEAR(hermiticity_deviation(rho), 0.0, 1e-15);
    EXPECT_NEAR(purity(rho), 1.0, 1e-15);
    EXPECT_NEAR(min_eigenvalue_hermitian(rho), 0.0, 1e-15);
}

TEST(DensityMatrix, MinEigenvalueMatchesEigenSolver) {
    std::mt19937 rng(3);
    for (int i = 0; i < 500; ++i) {
        const Matrix3c a = testutil::random_hermitian(rng, 2.0);
        Eigen::SelfAdjointEigenSolver<Matrix3c> solver(a);
        EXPECT_NEAR(min_eigenvalue_hermitian(a), solver.eigenvalues().minCoeff(), 1e-12);
    }
}

TEST(VaporParams, Validation) {
    VaporParams vapor{403.15, constants::rb85_mass, 7.4e18, "Rb85"};
    EXPECT_NO_THROW(vapor.validate());
    vapor.temperature = 0.0;
    EXPECT_THROW(vapor.validate(), DomainError);
    vapor.temperature = 300.0;
    vapor.atomic_mass = -1.0;
    EXPECT_THROW(vapor.validate(), DomainError);
}

TEST(LaserField, Validation) {
    LaserField field{two_pi * 220e6, 0.0, 780e-9, 0.0};
    EXPECT_NO_THROW(field.validate());
    field.rabi_peak = -1.0;
    EXPECT_THROW(field.validate(), DomainError);
    field.rabi_peak = 0.0;
    field.wavelength = 0.0;
    EXPECT_THROW(field.validate(), DomainError);
}
