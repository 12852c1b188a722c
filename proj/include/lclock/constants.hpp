#pragma once

namespace lclock {

// SI throughout. c is kept explicit everywhere; dimensionless ratios are
// formed only at the point of use.
inline constexpr double kSpeedOfLight = 299'792'458.0;        // m/s
inline constexpr double kGravitationalConstant = 6.674e-11;   // m^3 kg^-1 s^-2
inline constexpr double kEarthMass = 5.972e24;                // kg
inline constexpr double kEarthRadius = 6.367e6;               // m

// 2*pi split into high/low doubles for extended-precision phase reduction.
inline constexpr double kTwoPiHi = 6.283185307179586;
inline constexpr double kTwoPiLo = 2.4492935982947064e-16;

}  // namespace lclock
