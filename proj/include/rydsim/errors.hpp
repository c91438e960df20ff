#pragma once

#include <stdexcept>
#include <string>

namespace rydsim {

// Error hierarchy mirrored by the CLI exit codes. Every error carries a
// short category tag so messages can be machine-filtered.
class Error : public std::runtime_error {
  public:
    Error(std::string category, std::string message)
        : std::runtime_error("[" + category + "] " + message),
          category_(std::move(category)),
          message_(std::move(message)) {}

    const std::string& category() const { return category_; }
    const std::string& message() const { return message_; }

  private:
    std::string category_;
    std::string message_;
};

// Invalid physical input (negative intensity, temperature below 0 K, ...).
class DomainError : public Error {
  public:
    explicit DomainError(const std::string& msg) : Error("domain", msg) {}
};

// Mismatched array shapes or sampling layout.
class ShapeError : public Error {
  public:
    explicit ShapeError(const std::string& msg) : Error("shape", msg) {}
};

// Requested window or index outside the available data.
class RangeError : public Error {
  public:
    explicit RangeError(const std::string& msg) : Error("range", msg) {}
};

// Input too coarsely sampled for the requested measurement.
class ResolutionError : public Error {
  public:
    explicit ResolutionError(const std::string& msg) : Error("resolution", msg) {}
};

// Linear algebra failure (singular system, non-finite result).
class NumericalError : public Error {
  public:
    explicit NumericalError(const std::string& msg) : Error("numerical", msg) {}
};

// Time stepper gave up; carries the time at which it failed.
class IntegrationError : public Error {
  public:
    IntegrationError(const std::string& msg, double t_fail)
        : Error("integration", msg + " (at t = " + std::to_string(t_fail) + " s)"),
          time_of_failure_(t_fail) {}

    double time_of_failure() const { return time_of_failure_; }

  private:
    double time_of_failure_;
};

// Regression/fit could not be performed on the given data.
class FitError : public Error {
  public:
    explicit FitError(const std::string& msg) : Error("fit", msg) {}
};

// Configuration file problems (missing file, parse error, unknown key,
// unit mismatch). Carries a line number when one is known.
class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& msg, int line = 0)
        : Error("config", line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    int line() const { return line_; }

  private:
    int line_;
};

// Filesystem failures, annotated with the offending path.
class IoError : public Error {
  public:
    explicit IoError(const std::string& msg) : Error("io", msg) {}
};

}  // namespace rydsim
