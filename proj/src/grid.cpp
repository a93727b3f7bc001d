#include "atomlight/grid.hpp"

#include "atomlight/error.hpp"
#include "atomlight/units.hpp"

#include <bit>
#include <cmath>

namespace atomlight {

std::vector<double> Grid1D::positions() const {
    std::vector<double> x(n_points);
    for (std::size_t i = 0; i < n_points; ++i) x[i] = position(i);
    return x;
}

double Grid1D::max_kinetic_rate(double mass_kg) const {
    const double kmax = units::pi / dx();
    return units::hbar * kmax * kmax / (2.0 * mass_kg);
}

void Grid1D::validate(double mass_kg) const {
    if (!(x_max > x_min)) throw ValidationError("grid.x_max: must exceed grid.x_min");
    if (n_points < 8 || !std::has_single_bit(n_points))
        throw ValidationError("grid.points: must be a power of two >= 8");
    if (!(dt > 0.0)) throw ValidationError("grid.dt: must be positive");
    if (!(dt * max_kinetic_rate(mass_kg) < 0.5))
        throw ValidationError("grid.dt: dt * omega_kmax must stay below 0.5 (got " +
                              std::to_string(dt * max_kinetic_rate(mass_kg)) + ")");
}

} // namespace atomlight
