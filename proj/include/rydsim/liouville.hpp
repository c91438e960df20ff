#pragma once

#include <cmath>
#include <optional>

#include <Eigen/Dense>

#include "rydsim/types.hpp"

namespace rydsim {

// Instantaneous drive parameters entering the rotating-frame Hamiltonian.
// Rabi frequencies are real and nonnegative; the relative laser phase is
// not modelled.
struct HamiltonianParams {
    double omega_780 = 0.0;  // rad/s
    double omega_480 = 0.0;  // rad/s
    double delta_780 = 0.0;  // rad/s
    double delta_480 = 0.0;  // rad/s

    void validate() const {
        if (!(omega_780 >= 0.0) || !(omega_480 >= 0.0))
            throw DomainError("Rabi frequencies must be >= 0");
    }
};

// H/hbar of the ladder in the rotating wave approximation:
//   [ 0            Omega780/2    0          ]
//   [ Omega780/2  -Delta780      Omega480/2 ]
//   [ 0            Omega480/2   -Delta780-Delta480 ]
inline Matrix3c build_hamiltonian(const HamiltonianParams& p) {
    Matrix3c h = Matrix3c::Zero();
    h(0, 1) = 0.5 * p.omega_780;
    h(1, 0) = 0.5 * p.omega_780;
    h(1, 2) = 0.5 * p.omega_480;
    h(2, 1) = 0.5 * p.omega_480;
    h(1, 1) = -p.delta_780;
    h(2, 2) = -p.delta_780 - p.delta_480;
    return h;
}

// Dissipator with the two cascade decay channels, written out term by
// term exactly as the two Gamma matrices of the master equation.
inline Matrix3c lindblad_apply(const Matrix3c& rho, const DecayRates& g) {
    Matrix3c out = Matrix3c::Zero();
    const double g12 = g.gamma_12;
    const double g23 = g.gamma_23;

    out(0, 0) += g12 * rho(1, 1);
    out(0, 1) += -0.5 * g12 * rho(0, 1);
    out(1, 0) += -0.5 * g12 * rho(1, 0);
    out(1, 1) += -g12 * rho(1, 1);
    out(1, 2) += -0.5 * g12 * rho(1, 2);
    out(2, 1) += -0.5 * g12 * rho(2, 1);

    out(0, 2) += -0.5 * g23 * rho(0, 2);
    out(1, 1) += g23 * rho(2, 2);
    out(1, 2) += -0.5 * g23 * rho(1, 2);
    out(2, 0) += -0.5 * g23 * rho(2, 0);
    out(2, 1) += -0.5 * g23 * rho(2, 1);
    out(2, 2) += -g23 * rho(2, 2);
    return out;
}

// Drive as seen by one velocity class: detunings already Doppler-shifted,
// envelopes still in lab time.
struct DriveAtVelocity {
    double omega_780_peak = 0.0;  // rad/s
    double omega_480_peak = 0.0;  // rad/s
    double delta_780 = 0.0;       // rad/s, effective
    double delta_480 = 0.0;       // rad/s, effective
    std::optional<PulseEnvelope> probe_envelope;
    std::optional<PulseEnvelope> coupling_envelope;

    double omega_780(double t) const {
        return probe_envelope ? omega_780_peak * envelope_value(t, *probe_envelope)
                              : omega_780_peak;
    }
    double omega_480(double t) const {
        return coupling_envelope ? omega_480_peak * envelope_value(t, *coupling_envelope)
                                 : omega_480_peak;
    }
    HamiltonianParams hamiltonian_at(double t) const {
        return {omega_780(t), omega_480(t), delta_780, delta_480};
    }
};

// drho/dt = -i [H, rho] + L(rho). Traceless and Hermiticity-preserving.
inline Matrix3c rhs(double t, const Matrix3c& rho, const DriveAtVelocity& drive,
                    const DecayRates& g) {
    const Matrix3c h = build_hamiltonian(drive.hamiltonian_at(t));
    const Matrix3c comm = h * rho - rho * h;
    return complex(0.0, -1.0) * comm + lindblad_apply(rho, g);
}

// Column-major vectorization: vec(rho)[i + 3j] = rho(i, j).
inline Vector9c vectorize(const Matrix3c& rho) {
    Vector9c v;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) v(i + 3 * j) = rho(i, j);
    return v;
}

inline Matrix3c unvectorize(const Vector9c& v) {
    Matrix3c rho;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) rho(i, j) = v(i + 3 * j);
    return rho;
}

// 9x9 superoperator of the full linear map rho -> -i[H,rho] + L(rho),
// assembled column by column from the map applied to basis matrices.
inline Matrix9c liouvillian_superoperator(const HamiltonianParams& p, const DecayRates& g) {
    const Matrix3c h = build_hamiltonian(p);
    Matrix9c sup;
    for (int k = 0; k < 9; ++k) {
        Matrix3c basis = Matrix3c::Zero();
        basis(k % 3, k / 3) = 1.0;
        const Matrix3c comm = h * basis - basis * h;
        const Matrix3c col = complex(0.0, -1.0) * comm + lindblad_apply(basis, g);
        sup.col(k) = vectorize(col);
    }
    return sup;
}

// Steady state of the cw-driven two lower levels (coupling laser off),
// used as the pre-pulse initial condition. The vectorized master
// equation becomes a 9x9 linear system; one row is replaced by the unit
// trace constraint and the system solved by dense partial-pivoting LU
// with one step of iterative refinement.
inline Matrix3c steady_state(double omega_780, double delta_780, const DecayRates& g) {
    if (!(omega_780 >= 0.0)) throw DomainError("steady_state: omega_780 must be >= 0");
    g.validate();

    const HamiltonianParams p{omega_780, 0.0, delta_780, 0.0};
    Matrix9c m = liouvillian_superoperator(p, g);
    Vector9c b = Vector9c::Zero();
    // Trace row in place of d(rho11)/dt = 0.
    m.row(0).setZero();
    m(0, 0) = m(0, 4) = m(0, 8) = 1.0;
    b(0) = 1.0;

    Eigen::FullPivLU<Matrix9c> lu(m);
    if (lu.rank() < 9)
        throw NumericalError(
            "steady_state: Liouvillian is singular (rank " + std::to_string(lu.rank()) +
            " of 9); the steady state is not unique for gamma_12 = " +
            std::to_string(g.gamma_12) + " rad/s");
    Vector9c x = lu.solve(b);
    x += lu.solve(b - m * x);

    const Matrix3c rho = unvectorize(x);
    const double residual =
        (complex(0.0, -1.0) * (build_hamiltonian(p) * rho - rho * build_hamiltonian(p)) +
         lindblad_apply(rho, g))
            .cwiseAbs()
            .maxCoeff();
    const double scale = g.gamma_12 > 0.0 ? g.gamma_12 : 1.0;
    if (!std::isfinite(residual) || residual > 1e-10 * scale ||
        trace_deviation(rho) > 1e-9) {
        throw NumericalError(
            "steady_state: singular or ill-conditioned Liouvillian (residual = " +
            std::to_string(residual) + " /s, gamma_12 = " + std::to_string(g.gamma_12) +
            " rad/s, omega_780 = " + std::to_string(omega_780) + " rad/s)");
    }
    return rho;
}

}  // namespace rydsim
