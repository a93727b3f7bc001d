#pragma once

#include <cstddef>
#include <vector>

namespace atomlight {

// Uniform periodic grid in SI units plus the integration time step.
// Point i sits at x_min + i*dx; x_max itself is the periodic image of x_min.
struct Grid1D {
    double x_min = -2.5e-4;      // m
    double x_max = 1.25e-3;      // m
    std::size_t n_points = 4096; // power of two
    double dt = 5e-6;            // s
    std::size_t n_steps = 0;

    double dx() const { return (x_max - x_min) / static_cast<double>(n_points); }
    double length() const { return x_max - x_min; }
    double position(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
    std::vector<double> positions() const;

    // Largest kinetic frequency the grid can represent, rad/s.
    double max_kinetic_rate(double mass_kg) const;

    // Throws ValidationError on a non power-of-two size, an empty domain or a
    // time step that violates dt * omega_kmax < 0.5.
    void validate(double mass_kg) const;
};

} // namespace atomlight
