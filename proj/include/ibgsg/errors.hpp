#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ibgsg {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented invariant. `field()` is a dotted path such as
/// `pll.ki` when the offending value came from a scenario document.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message, std::string field = {})
        : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// The delta-power-frequency model does not apply (zero reactive current).
class InapplicableModelError : public Error {
public:
    using Error::Error;
};

/// The sine-form coefficients were requested for an injection with an active
/// current component.
class UnsupportedInjectionError : public Error {
public:
    using Error::Error;
};

/// A closed-form result disagreed with its numerical cross-check.
class InternalError : public Error {
public:
    using Error::Error;
};

/// The fault-on initial angle already lies outside the UEP window.
class BeyondUepError : public Error {
public:
    BeyondUepError(const std::string& message, bool past_right_uep)
        : Error(message), past_right_uep_(past_right_uep) {}

    [[nodiscard]] bool past_right_uep() const noexcept { return past_right_uep_; }

private:
    bool past_right_uep_;
};

/// The integrator produced a non-finite state.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& message, double last_valid_time)
        : Error(message), last_valid_time_(last_valid_time) {}

    [[nodiscard]] double last_valid_time() const noexcept { return last_valid_time_; }

private:
    double last_valid_time_;
};

}  // namespace ibgsg
