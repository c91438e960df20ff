#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "rydsim/doppler.hpp"
#include "rydsim/integrate.hpp"
#include "rydsim/parallel.hpp"

namespace rydsim {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
};

// Standard Nelder-Mead on a box: candidates are clamped into the bounds
// before evaluation. Fully deterministic (stable ordering, fixed
// iteration count, no randomness).
template <class F>
NelderMeadResult nelder_mead_minimize(F&& f, const std::vector<double>& x0,
                                      const std::vector<double>& step,
                                      const std::vector<std::pair<double, double>>& bounds,
                                      int max_iter) {
    const std::size_t dim = x0.size();
    auto clamp_point = [&](std::vector<double> x) {
        for (std::size_t d = 0; d < dim; ++d)
            x[d] = std::clamp(x[d], bounds[d].first, bounds[d].second);
        return x;
    };

    std::vector<std::vector<double>> simplex;
    std::vector<double> values;
    simplex.push_back(clamp_point(x0));
    for (std::size_t d = 0; d < dim; ++d) {
        auto x = x0;
        x[d] += step[d];
        simplex.push_back(clamp_point(std::move(x)));
    }
    for (const auto& x : simplex) values.push_back(f(x));

    std::vector<std::size_t> order(simplex.size());
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    };

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        sort_simplex();
        const std::size_t best = order.front(), worst = order.back();

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t k = 0; k + 1 < order.size(); ++k)
            for (std::size_t d = 0; d < dim; ++d) centroid[d] += simplex[order[k]][d];
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto blend = [&](double coeff) {
            std::vector<double> x(dim);
            for (std::size_t d = 0; d < dim; ++d)
                x[d] = centroid[d] + coeff * (centroid[d] - simplex[worst][d]);
            return clamp_point(std::move(x));
        };

        const auto reflected = blend(alpha);
        const double f_reflected = f(reflected);
        const double f_best = values[best];
        const double f_second_worst = values[order[order.size() - 2]];

        if (f_reflected < f_best) {
            const auto expanded = blend(gamma);
            const double f_expanded = f(expanded);
            if (f_expanded < f_reflected) {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
        } else if (f_reflected < f_second_worst) {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
        } else {
            const auto contracted = blend(-rho);
            const double f_contracted = f(contracted);
            if (f_contracted < values[worst]) {
                simplex[worst] = contracted;
                values[worst] = f_contracted;
            } else {
                for (std::size_t k = 1; k < order.size(); ++k) {
                    auto& x = simplex[order[k]];
                    for (std::size_t d = 0; d < dim; ++d)
                        x[d] = simplex[best][d] + sigma * (x[d] - simplex[best][d]);
                    x = clamp_point(std::move(x));
                    values[order[k]] = f(x);
                }
            }
        }
    }
    sort_simplex();
    return {simplex[order.front()], values[order.front()], iter};
}

struct ParamBounds {
    double lo = 0.0;
    double hi = 0.0;

    bool fixed() const { return hi == lo; }
};

// Search space for the simultaneous two-pulse excitation: intensity FWHM
// and peak Rabi frequency of each pulse, plus the coupling-pulse delay
// relative to the probe pulse. Collapsed bounds (hi == lo) pin a
// parameter and drop it from the simplex.
struct PulseSearchSpace {
    ParamBounds fwhm_780;   // s
    ParamBounds fwhm_480;   // s
    ParamBounds omega_780;  // rad/s
    ParamBounds omega_480;  // rad/s
    ParamBounds delay;      // s
};

struct PulseOptimizationSettings {
    VaporParams vapor;
    DecayRates decay;
    LaserField probe_template;    // wavelength/angle/detuning; Rabi comes from the search
    LaserField coupling_template;
    GridSettings grid{25, 4.0};   // quadrature for the Doppler-averaged objective
    SolverOptions solver;
    double settle_time = 200e-12; // objective sampled this long after both pulses end
    int grid_points = 8;          // coarse grid per free dimension
    int simplex_iterations = 200;
    int threads = 0;
};

struct PulseOptimum {
    double fwhm_780 = 0.0;
    double fwhm_480 = 0.0;
    double omega_780 = 0.0;
    double omega_480 = 0.0;
    double delay = 0.0;
    double rho33 = 0.0;  // Doppler-averaged, at the end of the settle window
    long evaluations = 0;
};

namespace detail {

class PulseObjective {
  public:
    PulseObjective(const PulseOptimizationSettings& settings)
        : settings_(settings),
          grid_(velocity_grid(settings.vapor, settings.grid.n_points, settings.grid.span)) {}

    // Doppler-averaged final Rydberg population for one candidate,
    // starting from the undriven ground state in every class.
    double operator()(const std::array<double, 5>& p, bool parallel_classes) const {
        PulseEnvelope probe_env{PulseShape::Gaussian, 0.0, p[0], 1.0};
        PulseEnvelope coupling_env{PulseShape::Gaussian, p[4], p[1], 1.0};
        DriveConfig drive;
        drive.probe.field = settings_.probe_template;
        drive.probe.field.rabi_peak = p[2];
        drive.probe.envelope = probe_env;
        drive.coupling.field = settings_.coupling_template;
        drive.coupling.field.rabi_peak = p[3];
        drive.coupling.envelope = coupling_env;
        drive.validate();

        const double t0 = std::min(probe_env.off_start(), coupling_env.off_start());
        const double t1 =
            std::max(probe_env.off_end(), coupling_env.off_end()) + settings_.settle_time;
        SolverOptions opt = settings_.solver;
        opt.sample_dt = t1 - t0;  // only the final state matters

        std::vector<double> rho33(grid_.size());
        auto eval_class = [&](std::size_t c) {
            const auto drive_v = drive_at_velocity(drive, grid_.nodes[c]);
            const Trajectory traj =
                propagate(ground_state(), t0, t1, drive_v, settings_.decay, opt);
            rho33[c] = traj.final_state(2, 2).real();
        };
        if (parallel_classes) {
            parallel_for(grid_.size(), settings_.threads, eval_class);
        } else {
            for (std::size_t c = 0; c < grid_.size(); ++c) eval_class(c);
        }

        double avg = 0.0;
        for (std::size_t c = 0; c < grid_.size(); ++c) avg += grid_.weights[c] * rho33[c];
        return avg;
    }

  private:
    const PulseOptimizationSettings& settings_;
    VelocityGrid grid_;
};

}  // namespace detail

// Coarse grid search over the free pulse parameters followed by simplex
// refinement of the Doppler-averaged final Rydberg population. Grid
// points are evaluated concurrently; refinement is sequential with the
// velocity classes parallelized instead.
inline PulseOptimum optimize_simultaneous_pulses(const PulseSearchSpace& space,
                                                 const PulseOptimizationSettings& settings) {
    const std::array<ParamBounds, 5> bounds = {space.fwhm_780, space.fwhm_480,
                                               space.omega_780, space.omega_480, space.delay};
    for (const auto& b : bounds) {
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.hi < b.lo)
            throw DomainError("optimize_simultaneous_pulses: bounds must be finite with hi >= lo");
    }
    if (settings.grid_points < 2)
        throw DomainError("optimize_simultaneous_pulses: need at least 2 grid points");

    const detail::PulseObjective objective(settings);
    long evaluations = 0;

    // Full factorial grid over the free dimensions.
    std::array<std::vector<double>, 5> axes;
    std::size_t n_grid = 1;
    for (std::size_t d = 0; d < 5; ++d) {
        if (bounds[d].fixed()) {
            axes[d] = {bounds[d].lo};
        } else {
            axes[d].resize(settings.grid_points);
            for (int i = 0; i < settings.grid_points; ++i)
                axes[d][i] = bounds[d].lo + (bounds[d].hi - bounds[d].lo) *
                                                static_cast<double>(i) /
                                                (settings.grid_points - 1);
        }
        n_grid *= axes[d].size();
    }

    std::vector<double> grid_values(n_grid);
    parallel_for(n_grid, settings.threads, [&](std::size_t flat) {
        std::array<double, 5> p{};
        std::size_t rest = flat;
        for (std::size_t d = 0; d < 5; ++d) {
            p[d] = axes[d][rest % axes[d].size()];
            rest /= axes[d].size();
        }
        grid_values[flat] = objective(p, false);
    });
    evaluations += static_cast<long>(n_grid);

    std::size_t best_flat = 0;
    for (std::size_t i = 1; i < n_grid; ++i)
        if (grid_values[i] > grid_values[best_flat]) best_flat = i;

    std::array<double, 5> best{};
    {
        std::size_t rest = best_flat;
        for (std::size_t d = 0; d < 5; ++d) {
            best[d] = axes[d][rest % axes[d].size()];
            rest /= axes[d].size();
        }
    }
    double best_value = grid_values[best_flat];

    // Simplex refinement over the free dimensions only.
    std::vector<std::size_t> free_dims;
    for (std::size_t d = 0; d < 5; ++d)
        if (!bounds[d].fixed()) free_dims.push_back(d);

    if (!free_dims.empty() && settings.simplex_iterations > 0) {
        std::vector<double> x0, step;
        std::vector<std::pair<double, double>> box;
        for (std::size_t d : free_dims) {
            x0.push_back(best[d]);
            const double s = 0.05 * (bounds[d].hi - bounds[d].lo);
            step.push_back(best[d] + s <= bounds[d].hi ? s : -s);
            box.emplace_back(bounds[d].lo, bounds[d].hi);
        }
        auto f = [&](const std::vector<double>& x) {
            std::array<double, 5> p = best;
            for (std::size_t k = 0; k < free_dims.size(); ++k) p[free_dims[k]] = x[k];
            ++evaluations;
            return -objective(p, true);
        };
        const auto result =
            nelder_mead_minimize(f, x0, step, box, settings.simplex_iterations);
        if (-result.value > best_value) {
            best_value = -result.value;
            for (std::size_t k = 0; k < free_dims.size(); ++k)
                best[free_dims[k]] = result.x[k];
        }
    }

    return {best[0], best[1], best[2], best[3], best[4], best_value, evaluations};
}

}  // namespace rydsim
