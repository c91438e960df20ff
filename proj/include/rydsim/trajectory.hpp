#pragma once

#include <limits>
#include <string>
#include <vector>

#include "rydsim/types.hpp"

namespace rydsim {

// Worst-case physicality deviations seen over a trajectory (or merged
// over many). Recorded at every output sample; asserted by tests rather
// than enforced during integration, so integration bugs surface instead
// of being masked.
struct InvariantStats {
    double max_trace_dev = 0.0;
    double max_herm_dev = 0.0;
    double min_eigenvalue = std::numeric_limits<double>::infinity();
    double max_purity_drift = 0.0;

    void record(const Matrix3c& rho, double purity0) {
        max_trace_dev = std::max(max_trace_dev, trace_deviation(rho));
        max_herm_dev = std::max(max_herm_dev, hermiticity_deviation(rho));
        min_eigenvalue = std::min(min_eigenvalue, min_eigenvalue_hermitian(rho));
        max_purity_drift = std::max(max_purity_drift, std::abs(purity(rho) - purity0));
    }

    void merge(const InvariantStats& other) {
        max_trace_dev = std::max(max_trace_dev, other.max_trace_dev);
        max_herm_dev = std::max(max_herm_dev, other.max_herm_dev);
        min_eigenvalue = std::min(min_eigenvalue, other.min_eigenvalue);
        max_purity_drift = std::max(max_purity_drift, other.max_purity_drift);
    }
};

// Time series of the observables of one velocity class or of the
// ensemble average. Full density-matrix snapshots are kept only when
// requested (SolverOptions::record_states).
struct Trajectory {
    std::vector<double> times;  // s, strictly increasing, uniform
    std::vector<double> im_rho21;
    std::vector<double> rho11;
    std::vector<double> rho22;
    std::vector<double> rho33;
    std::vector<Matrix3c> states;

    Matrix3c final_state = Matrix3c::Zero();
    double final_time = 0.0;
    InvariantStats stats;

    std::size_t size() const { return times.size(); }

    const std::vector<double>& observable(const std::string& name) const {
        if (name == "im_rho21") return im_rho21;
        if (name == "rho11") return rho11;
        if (name == "rho22") return rho22;
        if (name == "rho33") return rho33;
        throw DomainError("unknown observable '" + name + "'");
    }
};

// Doppler-averaged observable maps over a swept parameter (pulse peak
// intensity in W/m^2 or pulse detuning in rad/s), one row per sweep
// point on a shared time axis.
struct ScanResult {
    std::string param_name;      // "intensity" or "detuning"
    std::vector<double> params;  // sweep axis, sorted
    std::vector<double> times;   // s
    std::vector<std::vector<double>> im_rho21;  // [param][time]
    std::vector<std::vector<double>> rho33;     // [param][time]
    InvariantStats stats;  // worst case over all rows and velocity classes

    const std::vector<std::vector<double>>& observable(const std::string& name) const {
        if (name == "im_rho21") return im_rho21;
        if (name == "rho33") return rho33;
        throw DomainError("unknown observable '" + name + "'");
    }
};

}  // namespace rydsim
