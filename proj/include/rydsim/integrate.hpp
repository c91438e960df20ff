#pragma once

#include <cmath>
#include <cstdint>

#include "rydsim/liouville.hpp"
#include "rydsim/trajectory.hpp"

namespace rydsim {

struct SolverOptions {
    double atol = 1e-10;
    double rtol = 1e-8;
    double sample_dt = 1e-12;  // s, dense-output spacing
    std::int64_t max_steps = 50'000'000;
    bool record_states = false;
};

// Tight tolerances for verification runs against analytic and
// matrix-exponential oracles, where accumulated phase error at the
// production tolerances would mask real defects.
inline SolverOptions reference_solver_options() {
    SolverOptions opt;
    opt.atol = 1e-14;
    opt.rtol = 1e-12;
    return opt;
}

namespace detail {

// Dormand-Prince 5(4) coefficients (Hairer, Norsett & Wanner).
inline constexpr double dp_c2 = 0.2, dp_c3 = 0.3, dp_c4 = 0.8, dp_c5 = 8.0 / 9.0;
inline constexpr double dp_a21 = 0.2;
inline constexpr double dp_a31 = 3.0 / 40.0, dp_a32 = 9.0 / 40.0;
inline constexpr double dp_a41 = 44.0 / 45.0, dp_a42 = -56.0 / 15.0, dp_a43 = 32.0 / 9.0;
inline constexpr double dp_a51 = 19372.0 / 6561.0, dp_a52 = -25360.0 / 2187.0,
                        dp_a53 = 64448.0 / 6561.0, dp_a54 = -212.0 / 729.0;
inline constexpr double dp_a61 = 9017.0 / 3168.0, dp_a62 = -355.0 / 33.0,
                        dp_a63 = 46732.0 / 5247.0, dp_a64 = 49.0 / 176.0,
                        dp_a65 = -5103.0 / 18656.0;
inline constexpr double dp_a71 = 35.0 / 384.0, dp_a73 = 500.0 / 1113.0,
                        dp_a74 = 125.0 / 192.0, dp_a75 = -2187.0 / 6784.0,
                        dp_a76 = 11.0 / 84.0;
inline constexpr double dp_e1 = 71.0 / 57600.0, dp_e3 = -71.0 / 16695.0,
                        dp_e4 = 71.0 / 1920.0, dp_e5 = -17253.0 / 339200.0,
                        dp_e6 = 22.0 / 525.0, dp_e7 = -1.0 / 40.0;
// Dense-output coefficients of the 4th-order continuous extension.
inline constexpr double dp_d1 = -12715105075.0 / 11282082432.0,
                        dp_d3 = 87487479700.0 / 32700410799.0,
                        dp_d4 = -10690763975.0 / 1880347072.0,
                        dp_d5 = 701980252875.0 / 199316789632.0,
                        dp_d6 = -1453857185.0 / 822651844.0,
                        dp_d7 = 69997945.0 / 29380423.0;

inline double error_norm(const Matrix3c& err, const Matrix3c& y0, const Matrix3c& y1,
                         double atol, double rtol) {
    double sum = 0.0;
    for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
            const double sc =
                atol + rtol * std::max(std::abs(y0(i, j)), std::abs(y1(i, j)));
            const double e = std::abs(err(i, j)) / sc;
            sum += e * e;
        }
    }
    return std::sqrt(sum / 9.0);
}

// Interpolation state of one accepted step.
struct DenseSegment {
    double t = 0.0, h = 0.0;
    Matrix3c r1, r2, r3, r4, r5;

    Matrix3c eval(double ts) const {
        const double theta = (ts - t) / h;
        const double theta1 = 1.0 - theta;
        return r1 + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
    }
};

// Adaptive Dormand-Prince 5(4) with FSAL and dense output. Calls
// emit(t, y) at t0 and at every sample time t0 + k*sample_dt inside the
// integration window (interpolated, 4th order).
template <class Rhs, class Emit>
Matrix3c dopri5_integrate(Rhs&& f, Matrix3c y, double t0, double t1,
                          const SolverOptions& opt, Emit&& emit) {
    if (!(t1 > t0)) throw DomainError("integration window must have t_end > t_start");

    const double span = t1 - t0;
    emit(t0, y);
    double next_sample = t0 + opt.sample_dt;
    std::int64_t sample_index = 1;

    double t = t0;
    Matrix3c k1 = f(t, y), k2, k3, k4, k5, k6, k7;

    // Initial step from the scaled first derivative, refined by one
    // explicit Euler probe (standard hinit, simplified).
    double h;
    {
        const double dnf = error_norm(k1, y, y, opt.atol, opt.rtol);
        const double dny = error_norm(y, y, y, opt.atol, opt.rtol);
        h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 * span : 0.01 * (dny / dnf);
        h = std::min(h, 0.1 * span);
        const Matrix3c y_probe = y + h * k1;
        const Matrix3c k_probe = f(t + h, y_probe);
        const double der2 = error_norm(k_probe - k1, y, y, opt.atol, opt.rtol) / h;
        const double der12 = std::max(der2, dnf);
        const double h1 =
            der12 > 1e-15 ? std::pow(0.01 / der12, 0.2) : std::max(1e-6 * span, h * 1e-3);
        h = std::min({100.0 * h, h1, span});
    }

    const double safe = 0.9, facl = 0.2, facr = 10.0, beta = 0.04;
    const double expo1 = 0.2 - beta * 0.75;
    double facold = 1e-4;
    bool rejected = false;
    std::int64_t n_steps = 0;

    while (t < t1) {
        if (++n_steps > opt.max_steps)
            throw IntegrationError("step limit exceeded", t);
        if (!(h > std::abs(t) * 1e-14) || !(t + h > t))
            throw IntegrationError("step size underflow", t);
        bool last = false;
        if (t + h >= t1) {
            h = t1 - t;
            last = true;
        }

        k2 = f(t + dp_c2 * h, y + h * (dp_a21 * k1));
        k3 = f(t + dp_c3 * h, y + h * (dp_a31 * k1 + dp_a32 * k2));
        k4 = f(t + dp_c4 * h, y + h * (dp_a41 * k1 + dp_a42 * k2 + dp_a43 * k3));
        k5 = f(t + dp_c5 * h,
               y + h * (dp_a51 * k1 + dp_a52 * k2 + dp_a53 * k3 + dp_a54 * k4));
        k6 = f(t + h,
               y + h * (dp_a61 * k1 + dp_a62 * k2 + dp_a63 * k3 + dp_a64 * k4 + dp_a65 * k5));
        const Matrix3c y_new =
            y + h * (dp_a71 * k1 + dp_a73 * k3 + dp_a74 * k4 + dp_a75 * k5 + dp_a76 * k6);
        k7 = f(t + h, y_new);

        const Matrix3c err_vec =
            h * (dp_e1 * k1 + dp_e3 * k3 + dp_e4 * k4 + dp_e5 * k5 + dp_e6 * k6 + dp_e7 * k7);
        const double err = error_norm(err_vec, y, y_new, opt.atol, opt.rtol);

        const double fac11 = std::pow(err, expo1);
        if (err <= 1.0) {
            // Accepted; build the interpolant and emit due samples.
            DenseSegment seg;
            seg.t = t;
            seg.h = h;
            seg.r1 = y;
            seg.r2 = y_new - y;
            seg.r3 = h * k1 - seg.r2;
            seg.r4 = seg.r2 - h * k7 - seg.r3;
            seg.r5 = h * (dp_d1 * k1 + dp_d3 * k3 + dp_d4 * k4 + dp_d5 * k5 + dp_d6 * k6 +
                          dp_d7 * k7);

            const double t_new = last ? t1 : t + h;
            while (next_sample <= t_new + 1e-9 * opt.sample_dt) {
                const double ts = std::min(next_sample, t_new);
                emit(ts, seg.eval(ts));
                ++sample_index;
                next_sample = t0 + static_cast<double>(sample_index) * opt.sample_dt;
            }

            facold = std::max(err, 1e-4);
            double fac = fac11 / std::pow(facold, beta);
            fac = std::max(1.0 / facr, std::min(1.0 / facl, fac / safe));
            double h_new = h / fac;
            if (rejected) h_new = std::min(h_new, h);
            rejected = false;
            t = t_new;
            y = y_new;
            k1 = k7;  // FSAL
            h = h_new;
        } else {
            rejected = true;
            h = h / std::min(1.0 / facl, fac11 / safe);
        }
    }
    return y;
}

}  // namespace detail

// Integrate the master equation for one velocity class over
// [t_start, t_end], sampling observables every sample_dt. Physicality is
// monitored at each sample but never enforced.
inline Trajectory propagate(const Matrix3c& rho0, double t_start, double t_end,
                            const DriveAtVelocity& drive, const DecayRates& g,
                            const SolverOptions& opt = {}) {
    if (!(t_end > t_start)) throw DomainError("propagate: t_end must exceed t_start");
    if (!(opt.sample_dt > 0.0)) throw DomainError("propagate: sample_dt must be > 0");

    Trajectory traj;
    const auto n_hint =
        static_cast<std::size_t>((t_end - t_start) / opt.sample_dt) + 2;
    traj.times.reserve(n_hint);
    traj.im_rho21.reserve(n_hint);
    traj.rho11.reserve(n_hint);
    traj.rho22.reserve(n_hint);
    traj.rho33.reserve(n_hint);

    const double purity0 = purity(rho0);
    auto emit = [&](double t, const Matrix3c& rho) {
        traj.times.push_back(t);
        traj.im_rho21.push_back(rho(1, 0).imag());
        traj.rho11.push_back(rho(0, 0).real());
        traj.rho22.push_back(rho(1, 1).real());
        traj.rho33.push_back(rho(2, 2).real());
        if (opt.record_states) traj.states.push_back(rho);
        traj.stats.record(rho, purity0);
    };
    auto f = [&](double t, const Matrix3c& rho) { return rhs(t, rho, drive, g); };

    traj.final_state = detail::dopri5_integrate(f, rho0, t_start, t_end, opt, emit);
    traj.final_time = t_end;
    traj.stats.record(traj.final_state, purity0);
    return traj;
}

}  // namespace rydsim
