#pragma once

#include <cmath>

// SI constants and the internal unit system.
//
// Internally lengths are in micrometres and times in milliseconds with hbar = 1,
// so the mass unit is hbar * 1 ms / (1 um)^2. Only hbar/m ever enters the
// dynamics, which keeps every coefficient within a few decades of unity.

namespace atomlight::units {

inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double epsilon0 = 8.8541878128e-12; // F m^-1
inline constexpr double c = 299792458.0;             // m s^-1
inline constexpr double pi = 3.14159265358979323846;

inline constexpr double length = 1e-6; // m per internal length unit
inline constexpr double time = 1e-3;   // s per internal time unit

inline constexpr double to_length(double metres) { return metres / length; }
inline constexpr double to_time(double seconds) { return seconds / time; }
inline constexpr double to_rate(double per_second) { return per_second * time; }
inline constexpr double to_wavenumber(double per_metre) { return per_metre * length; }
inline constexpr double to_speed(double metres_per_second) { return metres_per_second * time / length; }

// Field envelopes carry units of length^(-1/2).
inline double to_envelope(double per_sqrt_metre) { return per_sqrt_metre * std::sqrt(length); }
inline double from_envelope(double per_sqrt_internal) { return per_sqrt_internal / std::sqrt(length); }

// hbar/m in um^2/ms.
inline constexpr double hbar_over_mass(double mass_kg) { return hbar / mass_kg * time / (length * length); }

} // namespace atomlight::units
