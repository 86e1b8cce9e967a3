#pragma once

#include <numbers>

namespace pplnhom {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double kNanometre = 1e-9;
inline constexpr double kMicrometre = 1e-6;
inline constexpr double kMillimetre = 1e-3;

/// Angular frequency (rad/s) of light with vacuum wavelength `wavelength_m`.
constexpr double angular_frequency(double wavelength_m) {
  return kTwoPi * kSpeedOfLight / wavelength_m;
}

/// Vacuum wavelength (m) of light with angular frequency `omega`.
constexpr double wavelength_of(double omega) {
  return kTwoPi * kSpeedOfLight / omega;
}

}  // namespace pplnhom
