#pragma once

#include <numbers>

namespace optomech {

// CODATA 2018 exact/recommended values. Not configurable.
struct PhysicalConstants {
    static constexpr double hbar = 1.054571817e-34;  // J s
    static constexpr double kB = 1.380649e-23;       // J / K
    static constexpr double c = 299792458.0;         // m / s
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Rates are stored internally as angular frequencies; files and the CLI use Hz.
constexpr double hz_to_rad(double f) { return kTwoPi * f; }
constexpr double rad_to_hz(double w) { return w / kTwoPi; }

} // namespace optomech
