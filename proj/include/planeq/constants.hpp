#pragma once

#include <cmath>

namespace planeq {

// Physical constants (SI). Values are fixed at build time; everything in the
// library derives coupling strengths and frequencies from these four numbers.
namespace constants {

// 1H gyromagnetic ratio [rad s^-1 T^-1]
inline constexpr double gamma_H = 2.6752218744e8;

// mu0 / 4pi [T m / A]
inline constexpr double mu0_over_4pi = 1e-7;

// reduced Planck constant [J s]
inline constexpr double hbar = 1.054571817e-34;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

// magic angle: arccos(1/sqrt(3)), the zero of 3 cos^2(theta) - 1
inline const double magic_angle_rad = std::acos(1.0 / std::sqrt(3.0));

// gamma_H / 2pi [Hz/T], the frequency-per-field conversion used throughout
inline constexpr double gamma_H_hz_per_T = gamma_H / two_pi;

// prefactor of the secular dipolar coupling in Hz:
//   d(r, theta) = dipolar_prefactor_hz_m3 * (3 cos^2 theta - 1) / r^3
inline constexpr double dipolar_prefactor_hz_m3 =
    mu0_over_4pi * gamma_H * gamma_H * hbar / (2.0 * two_pi);

// unit conversions accepted at the config boundary
inline constexpr double angstrom_m = 1e-10;
inline constexpr double gauss_per_cm_T_per_m = 1e-2;

}  // namespace constants

}  // namespace planeq
