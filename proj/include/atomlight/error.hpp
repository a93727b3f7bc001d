#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace atomlight {

// Bad input: config values, parameter combinations, grids that cannot hold the physics.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A field went non-finite during time stepping.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, std::size_t step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace atomlight
