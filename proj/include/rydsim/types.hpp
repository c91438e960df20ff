#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "rydsim/constants.hpp"
#include "rydsim/errors.hpp"

namespace rydsim {

using complex = std::complex<double>;

// Density matrix of the three-level ladder, basis order
// |1> = 5S1/2, |2> = 5P3/2, |3> = 30S1/2.
using Matrix3c = Eigen::Matrix3cd;
using Matrix9c = Eigen::Matrix<complex, 9, 9>;
using Vector9c = Eigen::Matrix<complex, 9, 1>;

inline Matrix3c ground_state() {
    Matrix3c rho = Matrix3c::Zero();
    rho(0, 0) = 1.0;
    return rho;
}

inline double trace_deviation(const Matrix3c& rho) {
    return std::abs(rho.trace() - complex(1.0, 0.0));
}

inline double hermiticity_deviation(const Matrix3c& rho) {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

inline double purity(const Matrix3c& rho) {
    return (rho * rho).trace().real();
}

// Smallest eigenvalue of a 3x3 Hermitian matrix by the closed-form
// trigonometric method. Only the Hermitian part of the input is used.
// Cheap enough to run on every output sample of every trajectory.
inline double min_eigenvalue_hermitian(const Matrix3c& a) {
    const double a01 = std::norm(0.5 * (a(0, 1) + std::conj(a(1, 0))));
    const double a02 = std::norm(0.5 * (a(0, 2) + std::conj(a(2, 0))));
    const double a12 = std::norm(0.5 * (a(1, 2) + std::conj(a(2, 1))));
    const double d0 = a(0, 0).real(), d1 = a(1, 1).real(), d2 = a(2, 2).real();
    const double p1 = a01 + a02 + a12;
    if (p1 == 0.0) return std::min({d0, d1, d2});

    const double q = (d0 + d1 + d2) / 3.0;
    const double p2 = (d0 - q) * (d0 - q) + (d1 - q) * (d1 - q) + (d2 - q) * (d2 - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Matrix3c b = a;
    b(0, 1) = 0.5 * (a(0, 1) + std::conj(a(1, 0)));
    b(1, 0) = std::conj(b(0, 1));
    b(0, 2) = 0.5 * (a(0, 2) + std::conj(a(2, 0)));
    b(2, 0) = std::conj(b(0, 2));
    b(1, 2) = 0.5 * (a(1, 2) + std::conj(a(2, 1)));
    b(2, 1) = std::conj(b(1, 2));
    b.diagonal().array() -= q;
    b /= p;
    const double r = std::clamp(0.5 * b.determinant().real(), -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    // Eigenvalues are q + 2p cos(phi + 2k pi/3); k = 1 gives the smallest.
    return q + 2.0 * p * std::cos(phi + 2.0 * constants::pi / 3.0);
}

// One laser field in the rotating frame. Angular frequencies throughout;
// detuning = laser frequency minus transition frequency. The probe
// propagates along the reference axis (angle 0); the coupling beam
// carries the almost-counter-propagating angle.
struct LaserField {
    double rabi_peak = 0.0;          // rad/s
    double detuning = 0.0;           // rad/s
    double wavelength = 0.0;         // m
    double propagation_angle = 0.0;  // rad from the probe axis

    void validate() const {
        if (!(rabi_peak >= 0.0)) throw DomainError("laser rabi_peak must be >= 0");
        if (!(wavelength > 0.0)) throw DomainError("laser wavelength must be > 0");
    }
};

enum class PulseShape { Gaussian, FlatTop };

// Pulse amplitude envelope in [0, 1]. intensity_fwhm is the full width at
// half maximum of the pulse *intensity*; the Rabi amplitude scales with
// the field, so the amplitude envelope is wider by sqrt(2).
struct PulseEnvelope {
    PulseShape shape = PulseShape::Gaussian;
    double center_time = 0.0;     // s
    double intensity_fwhm = 0.0;  // s
    double peak_scale = 1.0;      // multiplies rabi_peak at the center

    void validate() const {
        if (!(intensity_fwhm > 0.0)) throw DomainError("pulse intensity_fwhm must be > 0");
        if (!(peak_scale >= 0.0 && peak_scale <= 1.0))
            throw DomainError("pulse peak_scale must be in [0, 1]");
    }

    // Window in which the pulse meaningfully drives the atom. For the
    // Gaussian this is center +- 0.8 fwhm (amplitude >= ~0.41 of peak),
    // i.e. ~4 ns total for the 2.5 ns pulse; the flat top is exact.
    double window_start() const {
        return shape == PulseShape::Gaussian ? center_time - 0.8 * intensity_fwhm
                                             : center_time - 0.5 * intensity_fwhm;
    }
    double window_end() const {
        return shape == PulseShape::Gaussian ? center_time + 0.8 * intensity_fwhm
                                             : center_time + 0.5 * intensity_fwhm;
    }
    // Where the drive is essentially off (amplitude < ~3% of peak).
    double off_start() const {
        return shape == PulseShape::Gaussian ? center_time - 1.6 * intensity_fwhm
                                             : center_time - 0.5 * intensity_fwhm;
    }
    double off_end() const {
        return shape == PulseShape::Gaussian ? center_time + 1.6 * intensity_fwhm
                                             : center_time + 0.5 * intensity_fwhm;
    }
};

// Amplitude envelope a(t) in [0, 1]. Gaussian:
//   a(t) = peak_scale * exp(-4 ln2 (t - t0)^2 / tau_a^2),  tau_a = sqrt(2) fwhm_I
// so the squared (intensity) envelope has FWHM = intensity_fwhm.
inline double envelope_value(double t, const PulseEnvelope& env) {
    const double dt = t - env.center_time;
    switch (env.shape) {
        case PulseShape::Gaussian: {
            const double x = dt / env.intensity_fwhm;
            return env.peak_scale * std::exp(-2.0 * M_LN2 * x * x);
        }
        case PulseShape::FlatTop:
            return std::abs(dt) <= 0.5 * env.intensity_fwhm ? env.peak_scale : 0.0;
    }
    return 0.0;
}

// Thermal vapor parameters. number_density is carried as metadata only;
// the three-level kernel never uses it.
struct VaporParams {
    double temperature = 0.0;     // K
    double atomic_mass = 0.0;     // kg
    double number_density = 0.0;  // m^-3
    std::string isotope;

    void validate() const {
        if (!(temperature > 0.0)) throw DomainError("vapor temperature must be > 0 K");
        if (!(atomic_mass > 0.0)) throw DomainError("vapor atomic_mass must be > 0");
    }
};

struct DecayRates {
    double gamma_12 = 0.0;  // rad/s, 5P3/2 -> 5S1/2
    double gamma_23 = 0.0;  // rad/s, 30S1/2 -> 5P3/2

    void validate() const {
        if (!(gamma_12 >= 0.0) || !(gamma_23 >= 0.0))
            throw DomainError("decay rates must be >= 0");
    }
};

// Peak Rabi frequency from peak intensity, Omega = calibration * sqrt(I).
inline double rabi_from_intensity(double intensity, double calibration) {
    if (!(intensity >= 0.0)) throw DomainError("intensity must be >= 0");
    if (!(calibration > 0.0)) throw DomainError("rabi calibration must be > 0");
    return calibration * std::sqrt(intensity);
}

// Intensity -> Rabi calibration anchored to a quoted (intensity, Rabi)
// pair instead of a dipole matrix element.
struct RabiCalibration {
    double anchor_intensity = 0.0;  // W/m^2
    double anchor_rabi = 0.0;       // rad/s

    double calibration() const {
        if (!(anchor_intensity > 0.0) || !(anchor_rabi > 0.0))
            throw DomainError("calibration anchor must be positive");
        return anchor_rabi / std::sqrt(anchor_intensity);
    }

    double rabi(double intensity) const { return rabi_from_intensity(intensity, calibration()); }
};

// A laser plus an optional envelope; no envelope means cw.
struct DrivenField {
    LaserField field;
    std::optional<PulseEnvelope> envelope;

    double rabi_at(double t) const {
        return envelope ? field.rabi_peak * envelope_value(t, *envelope) : field.rabi_peak;
    }
};

// Full two-color drive: cw probe on 1<->2, pulsed coupling on 2<->3.
struct DriveConfig {
    DrivenField probe;
    DrivenField coupling;

    void validate() const {
        probe.field.validate();
        coupling.field.validate();
        if (probe.envelope) probe.envelope->validate();
        if (coupling.envelope) coupling.envelope->validate();
    }
};

}  // namespace rydsim
