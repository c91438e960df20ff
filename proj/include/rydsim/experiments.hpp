#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "rydsim/analysis.hpp"
#include "rydsim/doppler.hpp"
#include "rydsim/integrate.hpp"
#include "rydsim/parallel.hpp"

namespace rydsim {

struct TimeWindow {
    double t_start = -1e-9;  // s
    double t_end = 8e-9;     // s
};

// Everything needed to run one Doppler-averaged scenario.
struct ScenarioParams {
    VaporParams vapor;
    DriveConfig drive;
    DecayRates decay;
    GridSettings grid;
    TimeWindow window;
    SolverOptions solver;

    void validate() const {
        vapor.validate();
        drive.validate();
        decay.validate();
        if (!(window.t_end > window.t_start))
            throw DomainError("time window must have t_end > t_start");
    }
};

namespace detail {

// One velocity class: steady state of the cw-driven lower transition at
// the class detuning, then the full pulse window.
inline Trajectory propagate_class(const ScenarioParams& s, double v) {
    const DriveAtVelocity drive_v = drive_at_velocity(s.drive, v);
    const double omega_780_initial = s.drive.probe.rabi_at(s.window.t_start);
    const Matrix3c rho0 = steady_state(omega_780_initial, drive_v.delta_780, s.decay);
    return propagate(rho0, s.window.t_start, s.window.t_end, drive_v, s.decay, s.solver);
}

inline Trajectory doppler_trace(const ScenarioParams& s, const VelocityGrid& grid,
                                int threads) {
    std::vector<Trajectory> classes(grid.size());
    parallel_for(grid.size(), threads,
                 [&](std::size_t i) { classes[i] = propagate_class(s, grid.nodes[i]); });
    return ensemble_average(classes, grid);
}

// Shared scan runner: rows and velocity classes form one task pool,
// processed in row chunks to bound memory; the weighted reduction runs
// in fixed order so results are identical for any worker count.
inline ScanResult run_scan(const std::vector<ScenarioParams>& rows,
                           const std::vector<double>& params, const std::string& param_name,
                           const VelocityGrid& grid, int threads) {
    ScanResult scan;
    scan.param_name = param_name;
    scan.params = params;
    scan.im_rho21.resize(rows.size());
    scan.rho33.resize(rows.size());

    const std::size_t n_classes = grid.size();
    const std::size_t chunk_rows = std::max<std::size_t>(1, 256 / n_classes);
    for (std::size_t row0 = 0; row0 < rows.size(); row0 += chunk_rows) {
        const std::size_t n_rows = std::min(chunk_rows, rows.size() - row0);
        std::vector<std::vector<Trajectory>> chunk(n_rows,
                                                   std::vector<Trajectory>(n_classes));
        parallel_for(n_rows * n_classes, threads, [&](std::size_t task) {
            const std::size_t r = task / n_classes;
            const std::size_t c = task % n_classes;
            chunk[r][c] = propagate_class(rows[row0 + r], grid.nodes[c]);
        });
        for (std::size_t r = 0; r < n_rows; ++r) {
            Trajectory avg = ensemble_average(chunk[r], grid);
            if (scan.times.empty()) scan.times = avg.times;
            scan.im_rho21[row0 + r] = std::move(avg.im_rho21);
            scan.rho33[row0 + r] = std::move(avg.rho33);
            scan.stats.merge(avg.stats);
        }
    }
    return scan;
}

}  // namespace detail

// Doppler-averaged trace of one scenario (Fig. 1(b)-style time series).
inline Trajectory run_trace(const ScenarioParams& s, int threads = 0) {
    s.validate();
    const VelocityGrid grid = velocity_grid(s.vapor, s.grid.n_points, s.grid.span);
    return detail::doppler_trace(s, grid, threads);
}

// One Doppler-averaged trace per pulse peak intensity, both lasers
// resonant or as configured. Intensities map to peak Rabi frequencies
// through the calibration anchor.
inline ScanResult intensity_scan(const ScenarioParams& s,
                                 const std::vector<double>& intensities,
                                 const RabiCalibration& calib, int threads = 0) {
    s.validate();
    if (!std::is_sorted(intensities.begin(), intensities.end()))
        throw DomainError("intensity_scan: intensities must be sorted ascending");
    for (double i : intensities)
        if (!(i >= 0.0)) throw DomainError("intensity_scan: intensities must be >= 0");

    std::vector<ScenarioParams> rows(intensities.size(), s);
    for (std::size_t r = 0; r < intensities.size(); ++r)
        rows[r].drive.coupling.field.rabi_peak = calib.rabi(intensities[r]);
    const VelocityGrid grid = velocity_grid(s.vapor, s.grid.n_points, s.grid.span);
    return detail::run_scan(rows, intensities, "intensity", grid, threads);
}

// One Doppler-averaged trace per pulse detuning at fixed peak intensity.
// The probe must be resonant, as in the measurement this reproduces.
inline ScanResult detuning_scan(const ScenarioParams& s,
                                const std::vector<double>& detunings_480, int threads = 0) {
    s.validate();
    if (s.drive.probe.field.detuning != 0.0)
        throw DomainError("detuning_scan: probe must be resonant (delta_780 = 0)");
    if (!std::is_sorted(detunings_480.begin(), detunings_480.end()))
        throw DomainError("detuning_scan: detunings must be sorted ascending");

    std::vector<ScenarioParams> rows(detunings_480.size(), s);
    for (std::size_t r = 0; r < detunings_480.size(); ++r)
        rows[r].drive.coupling.field.detuning = detunings_480[r];
    const VelocityGrid grid = velocity_grid(s.vapor, s.grid.n_points, s.grid.span);
    return detail::run_scan(rows, detunings_480, "detuning", grid, threads);
}

// Same pipeline with the velocity grid collapsed to the single class
// v = 0 (atom at rest), exposing the bare Autler-Townes mode structure.
inline ScanResult single_velocity_scan(const ScenarioParams& s,
                                       const std::vector<double>& detunings_480,
                                       int threads = 0) {
    s.validate();
    if (s.drive.probe.field.detuning != 0.0)
        throw DomainError("single_velocity_scan: probe must be resonant (delta_780 = 0)");
    if (!std::is_sorted(detunings_480.begin(), detunings_480.end()))
        throw DomainError("single_velocity_scan: detunings must be sorted ascending");

    std::vector<ScenarioParams> rows(detunings_480.size(), s);
    for (std::size_t r = 0; r < detunings_480.size(); ++r)
        rows[r].drive.coupling.field.detuning = detunings_480[r];
    VelocityGrid grid;
    grid.v_p = most_probable_speed(s.vapor);
    grid.nodes = {0.0};
    grid.weights = {1.0};
    return detail::run_scan(rows, detunings_480, "detuning", grid, threads);
}

// Mean Rydberg population over the nanosecond after the pulse. The
// Rydberg state is uncoupled once the pulse is off, so the window length
// barely matters (gamma_23 << 1/ns).
inline double rydberg_retention(const Trajectory& traj, double pulse_end) {
    if (traj.times.empty() || traj.times.front() > pulse_end ||
        traj.times.back() < pulse_end + 1e-9)
        throw RangeError("rydberg_retention: trajectory must cover 1 ns past pulse_end");

    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        if (traj.times[i] < pulse_end || traj.times[i] > pulse_end + 1e-9) continue;
        sum += traj.rho33[i];
        ++count;
    }
    return sum / static_cast<double>(count);
}

struct CycleCount {
    double cycles = 0.0;
    double phase = 0.0;  // rad, 2*pi per full population cycle
};

// Count Rabi cycles as local maxima of rho33 over the pulse window
// (topographic prominence >= 0.02 filters Doppler-damped ripple). The
// caller slices the series to the pulse; undersampled oscillations are
// rejected rather than miscounted.
inline CycleCount count_rabi_cycles(std::span<const double> rho33,
                                    std::span<const double> times) {
    if (rho33.size() != times.size())
        throw ShapeError("count_rabi_cycles: series/times length mismatch");
    const std::size_t n = rho33.size();
    CycleCount out;
    if (n < 3) return out;

    std::vector<std::size_t> maxima;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(rho33[i] > rho33[i - 1] && rho33[i] >= rho33[i + 1])) continue;
        const double peak = rho33[i];
        double left_min = peak, right_min = peak;
        for (std::size_t j = i; j-- > 0;) {
            if (rho33[j] > peak) break;
            left_min = std::min(left_min, rho33[j]);
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (rho33[j] > peak) break;
            right_min = std::min(right_min, rho33[j]);
        }
        const double prominence = peak - std::max(left_min, right_min);
        if (prominence >= 0.02) maxima.push_back(i);
    }
    for (std::size_t k = 1; k < maxima.size(); ++k) {
        if (maxima[k] - maxima[k - 1] < 20)
            throw ResolutionError(
                "count_rabi_cycles: fewer than 20 samples per cycle; refine sample_dt");
    }
    out.cycles = static_cast<double>(maxima.size());
    out.phase = constants::two_pi * out.cycles;
    return out;
}

}  // namespace rydsim
