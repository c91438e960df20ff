#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "rydsim/constants.hpp"
#include "rydsim/liouville.hpp"
#include "rydsim/trajectory.hpp"
#include "rydsim/types.hpp"

namespace rydsim {

struct GridSettings {
    int n_points = 201;
    double span = 4.0;  // in units of v_p
};

// 1-D thermal velocity grid along the probe axis. Uniform nodes over
// +-span*v_p with normalized Maxwell-Boltzmann weights, v_p = sqrt(2kT/m).
struct VelocityGrid {
    std::vector<double> nodes;    // m/s
    std::vector<double> weights;  // sum to 1
    double v_p = 0.0;             // m/s

    std::size_t size() const { return nodes.size(); }
};

inline double most_probable_speed(const VaporParams& vapor) {
    vapor.validate();
    return std::sqrt(2.0 * constants::boltzmann * vapor.temperature / vapor.atomic_mass);
}

inline VelocityGrid velocity_grid(const VaporParams& vapor, int n_points, double span) {
    if (n_points < 3 || n_points % 2 == 0)
        throw DomainError("velocity grid needs an odd n_points >= 3 so v = 0 is a node");
    if (!(span > 0.0)) throw DomainError("velocity grid span must be > 0");

    VelocityGrid grid;
    grid.v_p = most_probable_speed(vapor);
    grid.nodes.resize(n_points);
    grid.weights.resize(n_points);

    const double v_max = span * grid.v_p;
    const int half = n_points / 2;
    double total = 0.0;
    for (int i = 0; i < n_points; ++i) {
        // Node placement symmetric about zero by construction.
        const double v = v_max * static_cast<double>(i - half) / half;
        grid.nodes[i] = v;
        const double x = v / grid.v_p;
        grid.weights[i] = std::exp(-x * x);
        total += grid.weights[i];
    }
    for (auto& w : grid.weights) w /= total;
    return grid;
}

// Doppler-shifted detunings for one velocity class. v is the velocity
// component along the probe axis; an atom moving toward a beam sees it
// blue-shifted: delta_eff = delta_lab - k.v with k along propagation.
inline std::pair<double, double> shifted_detunings(double v, const LaserField& probe,
                                                   const LaserField& coupling) {
    probe.validate();
    coupling.validate();
    const double k_probe = constants::two_pi / probe.wavelength;
    const double k_coupling = constants::two_pi / coupling.wavelength;
    const double delta_780 = probe.detuning - k_probe * v;
    const double delta_480 =
        coupling.detuning - k_coupling * v * std::cos(coupling.propagation_angle);
    return {delta_780, delta_480};
}

inline DriveAtVelocity drive_at_velocity(const DriveConfig& drive, double v) {
    const auto [d780, d480] = shifted_detunings(v, drive.probe.field, drive.coupling.field);
    DriveAtVelocity out;
    out.omega_780_peak = drive.probe.field.rabi_peak;
    out.omega_480_peak = drive.coupling.field.rabi_peak;
    out.delta_780 = d780;
    out.delta_480 = d480;
    out.probe_envelope = drive.probe.envelope;
    out.coupling_envelope = drive.coupling.envelope;
    return out;
}

// Weighted average of per-class trajectories, summed in fixed class
// order so results are bit-identical across runs and worker counts.
inline Trajectory ensemble_average(const std::vector<Trajectory>& classes,
                                   const VelocityGrid& grid) {
    if (classes.size() != grid.size())
        throw ShapeError("ensemble_average: trajectory count != velocity grid size");
    if (classes.empty()) throw ShapeError("ensemble_average: no trajectories");

    const auto& ref = classes.front().times;
    for (const auto& traj : classes) {
        if (traj.times != ref)
            throw ShapeError("ensemble_average: trajectories have mismatched time grids");
    }

    Trajectory avg;
    avg.times = ref;
    const std::size_t n = ref.size();
    avg.im_rho21.assign(n, 0.0);
    avg.rho11.assign(n, 0.0);
    avg.rho22.assign(n, 0.0);
    avg.rho33.assign(n, 0.0);
    avg.final_state.setZero();
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const double w = grid.weights[c];
        const auto& traj = classes[c];
        for (std::size_t k = 0; k < n; ++k) {
            avg.im_rho21[k] += w * traj.im_rho21[k];
            avg.rho11[k] += w * traj.rho11[k];
            avg.rho22[k] += w * traj.rho22[k];
            avg.rho33[k] += w * traj.rho33[k];
        }
        avg.final_state += w * traj.final_state;
        avg.stats.merge(traj.stats);
    }
    avg.final_time = classes.front().final_time;
    return avg;
}

}  // namespace rydsim
