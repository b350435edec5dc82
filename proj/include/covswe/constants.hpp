#pragma once

namespace covswe {

inline constexpr double kEarthRadius = 6.37122e6;   // m
inline constexpr double kRotationRate = 7.292e-5;   // 1/s
inline constexpr double kGravity = 9.80616;         // m/s^2
inline constexpr double kSecondsPerDay = 86400.0;

}  // namespace covswe
