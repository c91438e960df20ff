#pragma once

#include <cctype>
#include <cstdlib>
#include <string>

#include "rydsim/constants.hpp"
#include "rydsim/errors.hpp"

namespace rydsim::units {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Split "value [unit]" into the number and the (possibly empty) unit token.
struct Quantity {
    double value = 0.0;
    std::string unit;
};

inline Quantity parse_quantity(const std::string& text) {
    const std::string s = trim(text);
    if (s.empty()) throw ConfigError("empty value");
    const char* begin = s.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) throw ConfigError("not a number: '" + s + "'");
    return {value, trim(std::string(end))};
}

// Ordinary-frequency units convert with the 2*pi convention of the
// quoted values; "rad/s" passes through.
inline double parse_frequency(const std::string& text) {
    const auto [value, unit] = parse_quantity(text);
    if (unit == "Hz") return constants::two_pi * value;
    if (unit == "kHz") return constants::two_pi * value * 1e3;
    if (unit == "MHz") return constants::two_pi * value * 1e6;
    if (unit == "GHz") return constants::two_pi * value * 1e9;
    if (unit == "THz") return constants::two_pi * value * 1e12;
    if (unit == "rad/s") return value;
    throw ConfigError("expected a frequency unit (Hz..THz, rad/s), got '" + unit + "'");
}

inline double parse_time(const std::string& text) {
    const auto [value, unit] = parse_quantity(text);
    if (unit == "s") return value;
    if (unit == "ms") return value * 1e-3;
    if (unit == "us") return value * 1e-6;
    if (unit == "ns") return value * 1e-9;
    if (unit == "ps") return value * 1e-12;
    if (unit == "fs") return value * 1e-15;
    throw ConfigError("expected a time unit (s..fs), got '" + unit + "'");
}

inline double parse_temperature(const std::string& text) {
    const auto [value, unit] = parse_quantity(text);
    double kelvin;
    if (unit == "K")
        kelvin = value;
    else if (unit == "C")
        kelvin = value + constants::zero_celsius;
    else
        throw ConfigError("expected a temperature unit (K, C), got '" + unit + "'");
    if (kelvin < 0.0)
        throw DomainError("temperature " + text + " is below absolute zero");
    return kelvin;
}

inline double parse_intensity(const std::string& text) {
    const auto [value, unit] = parse_quantity(text);
    if (unit == "W/m2") return value;
    if (unit == "W/cm2") return value * 1e4;
    if (unit == "kW/cm2") return value * 1e7;
    if (unit == "MW/cm2") return value * 1e10;
    if (unit == "GW/cm2") return value * 1e13;
    throw ConfigError("expected an intensity unit (W/m2, W/cm2..GW/cm2), got '" + unit + "'");
}

inline double parse_length(const std::string& text) {
    const auto [value, unit] = parse_quantity(text);
    if (unit == "m") return value;
    if (unit == "cm") return value * 1e-2;
    if (unit == "mm") return value * 1e-3;
    if (unit == "um") return value * 1e-6;
    if (unit == "nm") return value * 1e-9;
    if (unit == "pm") return value * 1e-12;
    throw ConfigError("expected a length unit (m..pm), got '" + unit + "'");
}

inline double parse_angle(const std::string& text) {
    const auto [value, unit] = parse_quantity(text);
    if (unit == "rad") return value;
    if (unit == "deg") return value * constants::pi / 180.0;
    throw ConfigError("expected an angle unit (rad, deg), got '" + unit + "'");
}

inline double parse_mass(const std::string& text) {
    const auto [value, unit] = parse_quantity(text);
    if (unit == "kg") return value;
    if (unit == "u") return value * constants::atomic_mass_unit;
    throw ConfigError("expected a mass unit (kg, u), got '" + unit + "'");
}

inline double parse_number_density(const std::string& text) {
    const auto [value, unit] = parse_quantity(text);
    if (unit == "m-3" || unit == "m^-3") return value;
    if (unit == "cm-3" || unit == "cm^-3") return value * 1e6;
    throw ConfigError("expected a number density unit (m-3, cm-3), got '" + unit + "'");
}

inline double parse_dimensionless(const std::string& text) {
    const auto [value, unit] = parse_quantity(text);
    if (!unit.empty())
        throw ConfigError("expected a bare number, got unit '" + unit + "'");
    return value;
}

inline long parse_integer(const std::string& text) {
    const std::string s = trim(text);
    const char* begin = s.c_str();
    char* end = nullptr;
    const long value = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw ConfigError("not an integer: '" + s + "'");
    return value;
}

}  // namespace rydsim::units
