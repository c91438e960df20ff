#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "rydsim/constants.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/trajectory.hpp"
#include "rydsim/types.hpp"

namespace rydsim {

// Oscillation modes extracted from a time series. Frequencies are
// angular (rad/s), sorted ascending; resolution is the Rayleigh limit
// 2*pi / window length.
struct ModeSpectrum {
    std::vector<double> frequencies;  // rad/s
    std::vector<double> amplitudes;
    double resolution = 0.0;  // rad/s

    bool empty() const { return frequencies.empty(); }

    // Frequency of the strongest mode, 0 if none.
    double dominant() const {
        if (frequencies.empty()) return 0.0;
        std::size_t best = 0;
        for (std::size_t i = 1; i < amplitudes.size(); ++i)
            if (amplitudes[i] > amplitudes[best]) best = i;
        return frequencies[best];
    }
};

namespace detail {

// In-place iterative radix-2 Cooley-Tukey; n must be a power of two.
inline void fft_inplace(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -constants::two_pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace detail

// Hann-windowed DFT with parabolic peak interpolation. Returns up to
// max_modes peaks above 10% of the strongest, ordered by frequency.
inline ModeSpectrum dominant_frequencies(std::span<const double> series,
                                         std::span<const double> times,
                                         std::size_t max_modes = 4) {
    if (series.size() != times.size())
        throw ShapeError("dominant_frequencies: series/times length mismatch");
    const std::size_t n = series.size();
    if (n < 32) throw ShapeError("dominant_frequencies: need at least 32 samples");

    const double dt = (times.back() - times.front()) / static_cast<double>(n - 1);
    if (!(dt > 0.0)) throw ShapeError("dominant_frequencies: times must increase");
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs((times[i] - times[i - 1]) - dt) > 1e-6 * dt)
            throw ShapeError("dominant_frequencies: non-uniform time sampling");
    }

    ModeSpectrum spec;
    spec.resolution = constants::two_pi / (dt * static_cast<double>(n - 1));

    double mean = 0.0;
    for (double x : series) mean += x;
    mean /= static_cast<double>(n);
    double max_dev = 0.0;
    for (double x : series) max_dev = std::max(max_dev, std::abs(x - mean));
    if (max_dev < 1e-14 * (1.0 + std::abs(mean))) return spec;  // constant input

    // Zero-pad 4x for smoother bins; resolution stays that of the data.
    const std::size_t n_fft = detail::next_pow2(4 * n);
    std::vector<std::complex<double>> buf(n_fft, 0.0);
    double window_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w =
            0.5 * (1.0 - std::cos(constants::two_pi * static_cast<double>(i) /
                                  static_cast<double>(n - 1)));
        buf[i] = (series[i] - mean) * w;
        window_sum += w;
    }
    detail::fft_inplace(buf);

    const std::size_t n_half = n_fft / 2;
    std::vector<double> mag(n_half);
    for (std::size_t k = 0; k < n_half; ++k) mag[k] = std::abs(buf[k]);

    struct Peak {
        double freq, amp;
    };
    std::vector<Peak> peaks;
    for (std::size_t k = 2; k + 1 < n_half; ++k) {
        if (!(mag[k] > mag[k - 1] && mag[k] >= mag[k + 1])) continue;
        const double alpha = mag[k - 1], beta = mag[k], gamma = mag[k + 1];
        const double denom = alpha - 2.0 * beta + gamma;
        const double delta = denom != 0.0 ? 0.5 * (alpha - gamma) / denom : 0.0;
        const double bin = static_cast<double>(k) + std::clamp(delta, -0.5, 0.5);
        const double freq = constants::two_pi * bin / (static_cast<double>(n_fft) * dt);
        const double amp = 2.0 * (beta - 0.25 * (alpha - gamma) * delta) / window_sum;
        peaks.push_back({freq, amp});
    }
    if (peaks.empty()) return spec;

    const double strongest =
        std::max_element(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
            return a.amp < b.amp;
        })->amp;
    std::erase_if(peaks, [&](const Peak& p) { return p.amp < 0.1 * strongest; });
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.amp > b.amp; });
    if (peaks.size() > max_modes) peaks.resize(max_modes);
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.freq < b.freq; });

    for (const auto& p : peaks) {
        spec.frequencies.push_back(p.freq);
        spec.amplitudes.push_back(p.amp);
    }
    return spec;
}

// Dressed-level energies of the pulsed 2<->3 transition,
// E+- = (-Delta +- sqrt(Delta^2 + Omega^2)) / 2. The probe coherence
// oscillates at |E+-|; returned as (slow, fast).
inline std::pair<double, double> autler_townes_modes(double omega_480, double delta_480) {
    if (!(omega_480 >= 0.0)) throw DomainError("autler_townes_modes: omega must be >= 0");
    const double root = std::hypot(delta_480, omega_480);
    const double e_plus = 0.5 * (-delta_480 + root);
    const double e_minus = 0.5 * (-delta_480 - root);
    const double a = std::abs(e_plus), b = std::abs(e_minus);
    return {std::min(a, b), std::max(a, b)};
}

// One row of the square-root scaling fit.
struct ScalingRow {
    double intensity = 0.0;   // W/m^2
    double omega_480 = 0.0;   // rad/s, peak at this intensity
    double predictor = 0.0;   // sqrt(omega_780^2 + omega_480^2)
    double frequency = 0.0;   // rad/s, extracted dominant rho33 mode
    double fitted = 0.0;      // rad/s
    double residual = 0.0;    // rad/s
    bool used = false;
};

struct SqrtScalingFit {
    double slope = 0.0;  // dimensionless, absorbs the population/coherence convention
    double r_squared = 0.0;
    std::vector<ScalingRow> rows;
    std::size_t rows_used = 0;
};

// Least-squares proportional fit f = a*x through the origin.
struct ProportionalFit {
    double slope = 0.0;
    double r_squared = 0.0;
};

inline ProportionalFit fit_proportional(std::span<const double> xs,
                                        std::span<const double> fs) {
    if (xs.size() != fs.size() || xs.empty())
        throw FitError("fit_proportional: need matching non-empty samples");
    double sxx = 0.0, sxy = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += xs[i] * xs[i];
        sxy += xs[i] * fs[i];
        mean += fs[i];
    }
    if (!(sxx > 0.0)) throw FitError("fit_proportional: degenerate predictor");
    mean /= static_cast<double>(fs.size());
    const double slope = sxy / sxx;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ss_res += (fs[i] - slope * xs[i]) * (fs[i] - slope * xs[i]);
        ss_tot += (fs[i] - mean) * (fs[i] - mean);
    }
    return {slope, ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0};
}

// Fit the dominant Rydberg-population frequency of a resonant intensity
// scan to f = a * sqrt(omega_780^2 + omega_480^2(I)). Rows without at
// least one oscillation cycle inside the window (the zero-intensity row
// in particular) are excluded automatically. The spectra are taken over
// [window_start, window_end], normally the pulse window.
inline SqrtScalingFit fit_sqrt_scaling(const ScanResult& scan, const RabiCalibration& calib,
                                       double omega_780, double window_start,
                                       double window_end) {
    if (scan.params.empty() || scan.times.empty())
        throw FitError("fit_sqrt_scaling: empty scan");

    std::size_t lo = 0, hi = scan.times.size();
    while (lo < hi && scan.times[lo] < window_start) ++lo;
    while (hi > lo && scan.times[hi - 1] > window_end) --hi;
    if (hi - lo < 32) throw FitError("fit_sqrt_scaling: analysis window too short");
    const double window = scan.times[hi - 1] - scan.times[lo];

    SqrtScalingFit fit;
    fit.rows.resize(scan.params.size());
    std::vector<double> xs, fs;
    for (std::size_t r = 0; r < scan.params.size(); ++r) {
        auto& row = fit.rows[r];
        row.intensity = scan.params[r];
        row.omega_480 = calib.rabi(row.intensity);
        row.predictor = std::hypot(omega_780, row.omega_480);

        const auto spec = dominant_frequencies(
            std::span(scan.rho33[r]).subspan(lo, hi - lo),
            std::span(scan.times).subspan(lo, hi - lo), 4);
        if (spec.empty()) continue;
        const double freq = spec.dominant();
        if (freq * window < constants::two_pi) continue;  // under one full cycle
        row.frequency = freq;
        row.used = true;
        ++fit.rows_used;
        xs.push_back(row.predictor);
        fs.push_back(row.frequency);
    }
    if (fit.rows_used < 8)
        throw FitError("fit_sqrt_scaling: fewer than 8 oscillatory rows (got " +
                       std::to_string(fit.rows_used) + ")");

    const ProportionalFit core = fit_proportional(xs, fs);
    fit.slope = core.slope;
    fit.r_squared = core.r_squared;
    for (auto& row : fit.rows) {
        if (!row.used) continue;
        row.fitted = fit.slope * row.predictor;
        row.residual = row.frequency - row.fitted;
    }
    return fit;
}

}  // namespace rydsim
