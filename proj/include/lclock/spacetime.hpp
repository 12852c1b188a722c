#pragma once

#include <stdexcept>

namespace lclock {

// Exterior Schwarzschild geometry in SI units. All members are pure and
// reentrant; r must lie outside the horizon (r > r_s) wherever a lapse is
// involved.
class SchwarzschildGeometry {
 public:
  // Direct construction from a Schwarzschild radius.
  explicit SchwarzschildGeometry(double schwarzschild_radius_m,
                                 double light_speed_m_s);

  // r_s = 2 G M / c^2.
  static SchwarzschildGeometry from_mass(double mass_kg, double g_constant,
                                         double light_speed_m_s);

  double schwarzschild_radius() const { return r_s_; }
  double light_speed() const { return c_; }

  // f(r) = 1 - r_s / r, the squared redshift factor of a static observer.
  double lapse(double r) const;

  // x = r + r_s ln(r / r_s - 1).
  double tortoise(double r) const;

  // Inverse of tortoise() on (r_s, inf); Newton iteration with bisection
  // fallback, |tortoise(r) - x| <= 1e-9 m.
  double radius_from_tortoise(double x) const;

  // a = c^2 r_s / (2 sqrt(f(r)) r^2), proper acceleration of a static
  // observer.
  double static_proper_acceleration(double r) const;

  // Leading-order differential free-fall acceleration between r and r + L:
  // a_tide = c^2 r_s L / r^3.
  double tidal_acceleration(double r, double cavity_length) const;

  // tau = sqrt(f(r)) * T for a static observer.
  double static_proper_time(double r, double coordinate_time) const;

 private:
  void require_exterior(double r) const;

  double r_s_;
  double c_;
};

struct HorizonDomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lclock
