#include "lclock/spacetime.hpp"

#include <algorithm>
#include <cmath>

namespace lclock {

SchwarzschildGeometry::SchwarzschildGeometry(double schwarzschild_radius_m,
                                            double light_speed_m_s)
    : r_s_(schwarzschild_radius_m), c_(light_speed_m_s) {
  if (r_s_ < 0.0) throw std::invalid_argument("Schwarzschild radius < 0");
  if (c_ <= 0.0) throw std::invalid_argument("light speed must be positive");
}

SchwarzschildGeometry SchwarzschildGeometry::from_mass(double mass_kg,
                                                      double g_constant,
                                                      double light_speed_m_s) {
  const double r_s =
      2.0 * g_constant * mass_kg / (light_speed_m_s * light_speed_m_s);
  return SchwarzschildGeometry(r_s, light_speed_m_s);
}

void SchwarzschildGeometry::require_exterior(double r) const {
  if (r <= r_s_) {
    throw HorizonDomainError("radius inside or at the horizon");
  }
}

double SchwarzschildGeometry::lapse(double r) const {
  require_exterior(r);
  return 1.0 - r_s_ / r;
}

double SchwarzschildGeometry::tortoise(double r) const {
  require_exterior(r);
  if (r_s_ == 0.0) return r;
  return r + r_s_ * std::log(r / r_s_ - 1.0);
}

double SchwarzschildGeometry::radius_from_tortoise(double x) const {
  if (r_s_ == 0.0) return x;
  constexpr double kTol = 1e-9;  // m, on the tortoise residual
  constexpr int kMaxIter = 200;

  // Bracket: tortoise is strictly increasing, x <= tortoise(r) for r large,
  // and tortoise -> -inf at the horizon.
  double lo = r_s_ * (1.0 + 1e-14);
  double hi = std::max(x, 2.0 * r_s_);
  while (tortoise(hi) < x) hi *= 2.0;

  double r = std::clamp(x, lo, hi);
  for (int i = 0; i < kMaxIter; ++i) {
    const double g = tortoise(r) - x;
    if (std::abs(g) <= kTol) return r;
    if (g > 0.0) {
      hi = r;
    } else {
      lo = r;
    }
    // dx/dr = 1/f(r)
    const double step = -g * lapse(r);
    double next = r + step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    r = next;
  }
  throw ConvergenceError("radius_from_tortoise failed to converge");
}

double SchwarzschildGeometry::static_proper_acceleration(double r) const {
  require_exterior(r);
  if (r_s_ == 0.0) return 0.0;
  return c_ * c_ * r_s_ / (2.0 * std::sqrt(lapse(r)) * r * r);
}

double SchwarzschildGeometry::tidal_acceleration(double r,
                                                 double cavity_length) const {
  require_exterior(r);
  if (cavity_length <= 0.0) throw std::invalid_argument("length must be > 0");
  return c_ * c_ * r_s_ * cavity_length / (r * r * r);
}

double SchwarzschildGeometry::static_proper_time(double r,
                                                 double coordinate_time) const {
  require_exterior(r);
  if (coordinate_time < 0.0) throw std::invalid_argument("negative duration");
  return std::sqrt(lapse(r)) * coordinate_time;
}

}  // namespace lclock
