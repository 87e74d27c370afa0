#pragma once

#include <stdexcept>
#include <string>

namespace franson {

/// Input outside the physical domain of an operation (negative rate, V > 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed stream file, histogram range, or other structural input.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid scenario configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative fit failed to converge. Carries the moment-based estimates
/// so callers can still report something sensible.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double fallback_mu, double fallback_sigma,
                     double fallback_amplitude)
        : std::runtime_error(what),
          fallback_mu_(fallback_mu),
          fallback_sigma_(fallback_sigma),
          fallback_amplitude_(fallback_amplitude) {}

    double fallback_mu() const noexcept { return fallback_mu_; }
    double fallback_sigma() const noexcept { return fallback_sigma_; }
    double fallback_amplitude() const noexcept { return fallback_amplitude_; }

private:
    double fallback_mu_;
    double fallback_sigma_;
    double fallback_amplitude_;
};

}  // namespace franson
