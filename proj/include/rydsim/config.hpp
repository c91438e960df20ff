#pragma once

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rydsim/constants.hpp"
#include "rydsim/experiments.hpp"
#include "rydsim/optimize.hpp"
#include "rydsim/units.hpp"

namespace rydsim {

struct ScanSettings {
    double intensity_min = 0.0;                         // W/m^2
    double intensity_max = 2.1e11;                      // 21 MW/cm^2
    int intensity_steps = 64;
    double detuning_min = -constants::two_pi * 2e9;     // rad/s
    double detuning_max = constants::two_pi * 2e9;
    int detuning_steps = 81;

    std::vector<double> intensity_axis() const {
        std::vector<double> axis(intensity_steps);
        for (int i = 0; i < intensity_steps; ++i)
            axis[i] = intensity_min + (intensity_max - intensity_min) *
                                          static_cast<double>(i) / (intensity_steps - 1);
        return axis;
    }
    std::vector<double> detuning_axis() const {
        std::vector<double> axis(detuning_steps);
        for (int i = 0; i < detuning_steps; ++i)
            axis[i] = detuning_min + (detuning_max - detuning_min) *
                                         static_cast<double>(i) / (detuning_steps - 1);
        return axis;
    }
};

struct OptimizerConfig {
    PulseSearchSpace space{
        {0.1e-9, 1e-9}, {0.1e-9, 1e-9},
        {constants::two_pi * 0.5e9, constants::two_pi * 6e9},
        {constants::two_pi * 0.5e9, constants::two_pi * 6e9},
        {0.0, 0.0}};
    int grid_points = 8;
    int simplex_iterations = 200;
    double settle_time = 200e-12;
    int velocity_points = 25;
};

// Fully resolved run configuration: scenario, sweep axes, calibration
// and optimizer settings, plus the key=value echo of every setting
// (defaults included) that gets embedded into output metadata.
struct RunConfig {
    ScenarioParams scenario;
    RabiCalibration calibration{2.1e11, constants::two_pi * 2.3e9};
    ScanSettings scan;
    OptimizerConfig optimizer;
    std::vector<std::pair<std::string, std::string>> resolved;

    void validate() const {
        scenario.validate();
        if (scan.intensity_steps < 1 || scan.detuning_steps < 1)
            throw DomainError("scan step counts must be >= 1");
        if (scan.intensity_min < 0.0 || scan.intensity_max < scan.intensity_min)
            throw DomainError("intensity scan range invalid");
        if (scan.detuning_max < scan.detuning_min)
            throw DomainError("detuning scan range invalid");
    }
};

namespace detail {

struct ConfigKey {
    std::string default_value;
    std::function<void(RunConfig&, const std::string&)> apply;
};

// One table drives parsing, defaults and the resolved-config echo.
inline const std::vector<std::pair<std::string, ConfigKey>>& config_keys() {
    using namespace units;
    static const std::vector<std::pair<std::string, ConfigKey>> keys = {
        {"temperature", {"130 C", [](RunConfig& c, const std::string& v) {
                             c.scenario.vapor.temperature = parse_temperature(v);
                         }}},
        {"atomic_mass", {"84.9118 u", [](RunConfig& c, const std::string& v) {
                             c.scenario.vapor.atomic_mass = parse_mass(v);
                         }}},
        {"number_density", {"7.4e12 cm-3", [](RunConfig& c, const std::string& v) {
                                c.scenario.vapor.number_density = parse_number_density(v);
                            }}},
        {"isotope", {"Rb85", [](RunConfig& c, const std::string& v) {
                         c.scenario.vapor.isotope = v;
                     }}},
        {"omega_780", {"220 MHz", [](RunConfig& c, const std::string& v) {
                           c.scenario.drive.probe.field.rabi_peak = parse_frequency(v);
                       }}},
        {"delta_780", {"0 MHz", [](RunConfig& c, const std::string& v) {
                           c.scenario.drive.probe.field.detuning = parse_frequency(v);
                       }}},
        {"wavelength_780", {"780 nm", [](RunConfig& c, const std::string& v) {
                                c.scenario.drive.probe.field.wavelength = parse_length(v);
                            }}},
        {"omega_480_peak", {"2.2 GHz", [](RunConfig& c, const std::string& v) {
                                c.scenario.drive.coupling.field.rabi_peak = parse_frequency(v);
                            }}},
        {"delta_480", {"0 MHz", [](RunConfig& c, const std::string& v) {
                           c.scenario.drive.coupling.field.detuning = parse_frequency(v);
                       }}},
        {"wavelength_480", {"480 nm", [](RunConfig& c, const std::string& v) {
                                c.scenario.drive.coupling.field.wavelength = parse_length(v);
                            }}},
        {"beam_angle", {"171.5 deg", [](RunConfig& c, const std::string& v) {
                            c.scenario.drive.coupling.field.propagation_angle = parse_angle(v);
                        }}},
        {"pulse_shape", {"gaussian", [](RunConfig& c, const std::string& v) {
                             if (v == "gaussian")
                                 c.scenario.drive.coupling.envelope->shape = PulseShape::Gaussian;
                             else if (v == "flattop")
                                 c.scenario.drive.coupling.envelope->shape = PulseShape::FlatTop;
                             else
                                 throw ConfigError("pulse_shape must be gaussian or flattop");
                         }}},
        {"pulse_fwhm", {"2.5 ns", [](RunConfig& c, const std::string& v) {
                            c.scenario.drive.coupling.envelope->intensity_fwhm = parse_time(v);
                        }}},
        {"pulse_center", {"2 ns", [](RunConfig& c, const std::string& v) {
                              c.scenario.drive.coupling.envelope->center_time = parse_time(v);
                          }}},
        {"gamma_12", {"6 MHz", [](RunConfig& c, const std::string& v) {
                          c.scenario.decay.gamma_12 = parse_frequency(v);
                      }}},
        {"gamma_23", {"8 kHz", [](RunConfig& c, const std::string& v) {
                          c.scenario.decay.gamma_23 = parse_frequency(v);
                      }}},
        {"calibration_intensity", {"21 MW/cm2", [](RunConfig& c, const std::string& v) {
                                       c.calibration.anchor_intensity = parse_intensity(v);
                                   }}},
        {"calibration_rabi", {"2.3 GHz", [](RunConfig& c, const std::string& v) {
                                  c.calibration.anchor_rabi = parse_frequency(v);
                              }}},
        {"velocity_points", {"201", [](RunConfig& c, const std::string& v) {
                                 c.scenario.grid.n_points = static_cast<int>(parse_integer(v));
                             }}},
        {"velocity_span", {"4", [](RunConfig& c, const std::string& v) {
                               c.scenario.grid.span = parse_dimensionless(v);
                           }}},
        {"t_start", {"-1 ns", [](RunConfig& c, const std::string& v) {
                         c.scenario.window.t_start = parse_time(v);
                     }}},
        {"t_end", {"8 ns", [](RunConfig& c, const std::string& v) {
                       c.scenario.window.t_end = parse_time(v);
                   }}},
        {"sample_dt", {"1 ps", [](RunConfig& c, const std::string& v) {
                           c.scenario.solver.sample_dt = parse_time(v);
                       }}},
        {"atol", {"1e-10", [](RunConfig& c, const std::string& v) {
                      c.scenario.solver.atol = parse_dimensionless(v);
                  }}},
        {"rtol", {"1e-8", [](RunConfig& c, const std::string& v) {
                      c.scenario.solver.rtol = parse_dimensionless(v);
                  }}},
        {"intensity_min", {"0 MW/cm2", [](RunConfig& c, const std::string& v) {
                               c.scan.intensity_min = parse_intensity(v);
                           }}},
        {"intensity_max", {"21 MW/cm2", [](RunConfig& c, const std::string& v) {
                               c.scan.intensity_max = parse_intensity(v);
                           }}},
        {"intensity_steps", {"64", [](RunConfig& c, const std::string& v) {
                                 c.scan.intensity_steps = static_cast<int>(parse_integer(v));
                             }}},
        {"detuning_min", {"-2 GHz", [](RunConfig& c, const std::string& v) {
                              c.scan.detuning_min = parse_frequency(v);
                          }}},
        {"detuning_max", {"2 GHz", [](RunConfig& c, const std::string& v) {
                              c.scan.detuning_max = parse_frequency(v);
                          }}},
        {"detuning_steps", {"81", [](RunConfig& c, const std::string& v) {
                                c.scan.detuning_steps = static_cast<int>(parse_integer(v));
                            }}},
        {"opt_fwhm_780_min", {"0.1 ns", [](RunConfig& c, const std::string& v) {
                                  c.optimizer.space.fwhm_780.lo = parse_time(v);
                              }}},
        {"opt_fwhm_780_max", {"1 ns", [](RunConfig& c, const std::string& v) {
                                  c.optimizer.space.fwhm_780.hi = parse_time(v);
                              }}},
        {"opt_fwhm_480_min", {"0.1 ns", [](RunConfig& c, const std::string& v) {
                                  c.optimizer.space.fwhm_480.lo = parse_time(v);
                              }}},
        {"opt_fwhm_480_max", {"1 ns", [](RunConfig& c, const std::string& v) {
                                  c.optimizer.space.fwhm_480.hi = parse_time(v);
                              }}},
        {"opt_omega_780_min", {"0.5 GHz", [](RunConfig& c, const std::string& v) {
                                   c.optimizer.space.omega_780.lo = parse_frequency(v);
                               }}},
        {"opt_omega_780_max", {"6 GHz", [](RunConfig& c, const std::string& v) {
                                   c.optimizer.space.omega_780.hi = parse_frequency(v);
                               }}},
        {"opt_omega_480_min", {"0.5 GHz", [](RunConfig& c, const std::string& v) {
                                   c.optimizer.space.omega_480.lo = parse_frequency(v);
                               }}},
        {"opt_omega_480_max", {"6 GHz", [](RunConfig& c, const std::string& v) {
                                   c.optimizer.space.omega_480.hi = parse_frequency(v);
                               }}},
        {"opt_delay_min", {"0 ps", [](RunConfig& c, const std::string& v) {
                               c.optimizer.space.delay.lo = parse_time(v);
                           }}},
        {"opt_delay_max", {"0 ps", [](RunConfig& c, const std::string& v) {
                               c.optimizer.space.delay.hi = parse_time(v);
                           }}},
        {"opt_grid_points", {"8", [](RunConfig& c, const std::string& v) {
                                 c.optimizer.grid_points = static_cast<int>(parse_integer(v));
                             }}},
        {"opt_simplex_iterations", {"200", [](RunConfig& c, const std::string& v) {
                                        c.optimizer.simplex_iterations =
                                            static_cast<int>(parse_integer(v));
                                    }}},
        {"opt_settle_time", {"200 ps", [](RunConfig& c, const std::string& v) {
                                 c.optimizer.settle_time = parse_time(v);
                             }}},
        {"opt_velocity_points", {"25", [](RunConfig& c, const std::string& v) {
                                     c.optimizer.velocity_points =
                                         static_cast<int>(parse_integer(v));
                                 }}},
    };
    return keys;
}

inline std::string strip_comment_and_quotes(const std::string& raw) {
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = units::trim(s);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        s = units::trim(s.substr(1, s.size() - 2));
    return s;
}

}  // namespace detail

// The documented default configuration: the parameters of the pulsed
// two-photon experiment this code models.
inline RunConfig default_config() {
    RunConfig config;
    config.scenario.drive.coupling.envelope = PulseEnvelope{};
    for (const auto& [key, entry] : detail::config_keys()) {
        entry.apply(config, detail::strip_comment_and_quotes(entry.default_value));
        config.resolved.emplace_back(key, entry.default_value);
    }
    return config;
}

// Set a single key, as from a "--set key=value" override.
inline void apply_setting(RunConfig& config, const std::string& key,
                          const std::string& value) {
    for (auto& [name, entry] : detail::config_keys()) {
        if (name != key) continue;
        const std::string cleaned = detail::strip_comment_and_quotes(value);
        entry.apply(config, cleaned);
        for (auto& [rkey, rvalue] : config.resolved)
            if (rkey == key) rvalue = cleaned;
        return;
    }
    throw ConfigError("unknown key '" + key + "'");
}

// Load a flat key = value file ('#' comments, optional quotes, unit
// suffixes). Unknown keys are rejected; all omitted keys take the
// documented defaults; the result always passes the physical invariants.
inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");

    RunConfig config = default_config();
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        std::string body = units::trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", line_no);
        const std::string key = units::trim(body.substr(0, eq));
        const std::string value = body.substr(eq + 1);
        try {
            apply_setting(config, key, value);
        } catch (const Error& e) {
            throw ConfigError(e.message() + " (key '" + key + "')", line_no);
        }
    }
    config.validate();
    return config;
}

}  // namespace rydsim
