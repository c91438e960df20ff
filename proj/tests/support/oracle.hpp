#pragma once

// Test-only propagator: exact exponentiation of the piecewise-constant
// superoperator, with the master equation encoded element by element
// from scratch. Shares neither the right-hand-side code nor the time
// stepper with the implementation it verifies.

#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "rydsim/liouville.hpp"
#include "rydsim/types.hpp"

namespace rydsim::oracle {

using C = std::complex<double>;
using Super = Eigen::Matrix<C, 9, 9>;
using Vec9 = Eigen::Matrix<C, 9, 1>;

// vec(rho)[i + 3j] = rho_ij (column-major).
inline Super superoperator(double om780, double om480, double d780, double d480,
                           double g12, double g23) {
    C h[3][3] = {};
    h[0][1] = h[1][0] = 0.5 * om780;
    h[1][2] = h[2][1] = 0.5 * om480;
    h[1][1] = -d780;
    h[2][2] = -d780 - d480;

    auto idx = [](int i, int j) { return i + 3 * j; };
    Super m = Super::Zero();
    const C minus_i(0.0, -1.0);
    // -i (H rho - rho H), elementwise.
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                m(idx(i, j), idx(k, j)) += minus_i * h[i][k];
                m(idx(i, j), idx(i, k)) -= minus_i * h[k][j];
            }
    // Gamma_12 channel.
    m(idx(0, 0), idx(1, 1)) += g12;
    m(idx(0, 1), idx(0, 1)) += -0.5 * g12;
    m(idx(1, 0), idx(1, 0)) += -0.5 * g12;
    m(idx(1, 1), idx(1, 1)) += -g12;
    m(idx(1, 2), idx(1, 2)) += -0.5 * g12;
    m(idx(2, 1), idx(2, 1)) += -0.5 * g12;
    // Gamma_23 channel.
    m(idx(0, 2), idx(0, 2)) += -0.5 * g23;
    m(idx(1, 1), idx(2, 2)) += g23;
    m(idx(1, 2), idx(1, 2)) += -0.5 * g23;
    m(idx(2, 0), idx(2, 0)) += -0.5 * g23;
    m(idx(2, 1), idx(2, 1)) += -0.5 * g23;
    m(idx(2, 2), idx(2, 2)) += -g23;
    return m;
}

inline Vec9 vec(const Matrix3c& rho) {
    Vec9 v;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) v(i + 3 * j) = rho(i, j);
    return v;
}

inline Matrix3c unvec(const Vec9& v) {
    Matrix3c rho;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) rho(i, j) = v(i + 3 * j);
    return rho;
}

// Exact mean of the amplitude envelope over [a, b]; the constant drive
// of each slice. Freezing at the slice average instead of the midpoint
// removes the leading sampling bias of the piecewise-constant scheme.
inline double envelope_mean(const std::optional<PulseEnvelope>& env, double a, double b) {
    if (!env) return 1.0;
    switch (env->shape) {
        case PulseShape::Gaussian: {
            const double k = std::sqrt(2.0 * M_LN2) / env->intensity_fwhm;
            const double integral = env->peak_scale * std::sqrt(constants::pi) / (2.0 * k) *
                                    (std::erf(k * (b - env->center_time)) -
                                     std::erf(k * (a - env->center_time)));
            return integral / (b - a);
        }
        case PulseShape::FlatTop: {
            const double lo = std::max(a, env->center_time - 0.5 * env->intensity_fwhm);
            const double hi = std::min(b, env->center_time + 0.5 * env->intensity_fwhm);
            return hi > lo ? env->peak_scale * (hi - lo) / (b - a) : 0.0;
        }
    }
    return 0.0;
}

inline Super slice_superoperator(const DriveAtVelocity& drive, const DecayRates& g,
                                 double a, double b) {
    return superoperator(drive.omega_780_peak * envelope_mean(drive.probe_envelope, a, b),
                         drive.omega_480_peak * envelope_mean(drive.coupling_envelope, a, b),
                         drive.delta_780, drive.delta_480, g.gamma_12, g.gamma_23);
}

// States at every slice boundary t_start + k*slice, k = 0..n_slices.
inline std::vector<Matrix3c> propagate_states(const Matrix3c& rho0, double t_start,
                                              long n_slices, double slice,
                                              const DriveAtVelocity& drive,
                                              const DecayRates& g) {
    if (!(slice > 0.0)) throw DomainError("oracle: slice must be > 0");
    std::vector<Matrix3c> states;
    states.reserve(n_slices + 1);
    states.push_back(rho0);
    Vec9 v = vec(rho0);
    for (long k = 0; k < n_slices; ++k) {
        const double t0 = t_start + static_cast<double>(k) * slice;
        const Super m = slice_superoperator(drive, g, t0, t0 + slice);
        v = (slice * m).exp() * v;
        states.push_back(unvec(v));
    }
    return states;
}

// Final state after [t_start, t_end] with ceil-split slices (the last
// slice is shortened to land exactly on t_end).
inline Matrix3c propagate_oracle(const Matrix3c& rho0, double t_start, double t_end,
                                 const DriveAtVelocity& drive, const DecayRates& g,
                                 double slice) {
    if (!(slice > 0.0)) throw DomainError("oracle: slice must be > 0");
    Vec9 v = vec(rho0);
    double t = t_start;
    while (t < t_end - 1e-9 * slice) {
        const double dt = std::min(slice, t_end - t);
        const Super m = slice_superoperator(drive, g, t, t + dt);
        v = (dt * m).exp() * v;
        t += dt;
    }
    return unvec(v);
}

}  // namespace rydsim::oracle
