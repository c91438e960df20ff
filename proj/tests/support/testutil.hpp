#pragma once

#include <random>

#include "rydsim/config.hpp"

namespace rydsim::testutil {

// The documented default configuration doubles as the reference
// experiment parameters for tests.
inline ScenarioParams paper_scenario() { return default_config().scenario; }

inline RabiCalibration paper_calibration() { return default_config().calibration; }

inline Matrix3c random_hermitian(std::mt19937& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    Matrix3c a;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = complex(dist(rng), dist(rng));
    return 0.5 * (a + a.adjoint().eval());
}

// Random physical density matrix: normalized Gram matrix.
inline Matrix3c random_density(std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix3c a;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = complex(dist(rng), dist(rng));
    Matrix3c rho = a * a.adjoint();
    return rho / rho.trace();
}

}  // namespace rydsim::testutil
