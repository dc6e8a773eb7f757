#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <string>

#include "core/error.hpp"

namespace bitorus {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

// Atoms closer than this in angle are merged into one.
inline constexpr double kAngleMergeTol = 1e-12;

// Membership threshold for the nonzero-mean class: the pipeline divides by
// marginal means, and smaller values make the eta-inversion ill-conditioned.
inline constexpr double kPxThreshold = 1e-9;

// Transforms are refused within this band around the unit circle.
inline constexpr double kTorusBand = 1e-9;

inline Complex unit(double angle) { return std::polar(1.0, angle); }

// Normalize an angle to (-pi, pi].
inline double normalize_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

inline bool near_torus(Complex z) { return std::abs(std::abs(z) - 1.0) < kTorusBand; }

inline void reject_near_torus(Complex z, const char* what) {
  if (near_torus(z))
    fail(Errc::domain, std::string(what) + ": evaluation within the unit-circle band refused");
}

// 1/conj(z); maps the evaluation point across the unit circle.
inline Complex circle_reflect(Complex z) { return 1.0 / std::conj(z); }

// Lossless double formatting (17 significant digits).
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace bitorus
