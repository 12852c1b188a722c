#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "lclock/geodesics.hpp"
#include "lclock/interp.hpp"

namespace lclock {

using Complex = std::complex<double>;

// A field configuration on [x1, x2] at a fixed instant: value and time
// derivative. Used by the Klein-Gordon inner-product oracle.
struct FieldFunction {
  std::function<Complex(double)> value;
  std::function<Complex(double)> dt;
};

// Instantaneous Dirichlet mode basis of a static cavity [x1, x2]:
//   phi_m = sin(m pi (x - x1) / L) e^{-i w_m t} / sqrt(m pi c),
//   w_m = c m pi / L,
// normalized to (phi_m, phi_n) = delta_mn under the KG inner product.
class ModeBasis {
 public:
  ModeBasis(double x1, double x2, int n_max, double light_speed);

  double x1() const { return x1_; }
  double x2() const { return x2_; }
  double length() const { return x2_ - x1_; }
  int n_max() const { return n_max_; }
  double light_speed() const { return c_; }

  double omega(int m) const;

  // phi_m and its time derivative at t = 0, as a FieldFunction.
  FieldFunction mode(int m) const;
  FieldFunction conjugate_mode(int m) const;

  // d(phi_m)/d(x_j) at t = 0 (j = 1 bottom wall, j = 2 top wall), including
  // the induced frequency variation in the time derivative.
  FieldFunction boundary_derivative(int m, int j) const;

 private:
  double x1_, x2_;
  int n_max_;
  double c_;
};

// (u, v) = -i Int dx [u (dv/dt)* - v* du/dt], by composite Gauss-Legendre
// quadrature.
Complex kg_inner_product(const FieldFunction& u, const FieldFunction& v,
                         double x1, double x2, int panels = 400);

// Boundary-coupling inner products A^j_mn = (d phi_m / d x_j, phi_n) and
// B^j_mn = -(d phi_m / d x_j, phi_n*) in closed form. Entries are real and
// scale as 1/L.
class CouplingMatrices {
 public:
  CouplingMatrices(double length, int n_max);

  int n_max() const { return n_; }
  double length() const { return length_; }

  double a(int j, int m, int n) const;
  double b(int j, int m, int n) const;

 private:
  int n_;
  double length_;
};

CouplingMatrices coupling_matrices(const ModeBasis& basis);

// Accumulated phase Theta_1(t) = Int_0^t w_1, split as w_ref t + psi(t) with
// psi the compensated integral of the small frequency drift, so that the
// reduction mod 2 pi keeps absolute accuracy ~1e-10 rad even at 1e10 rad.
// Theta_m = m Theta_1 since w_m = m w_1.
class PhaseProfile {
 public:
  PhaseProfile(const CavityTrajectory& traj, double light_speed);

  double light_speed() const { return c_; }
  double omega_ref() const { return omega_ref_; }
  double omega1(double t) const { return omega_ref_ + delta_omega(t); }
  double omega_m(int m, double t) const {
    return static_cast<double>(m) * omega1(t);
  }
  double delta_omega(double t) const;
  double domega1_dt(double t) const;

  // psi(t) = Int_0^t (w_1 - w_ref); |psi| stays small in the drop scenario.
  double psi(double t) const { return psi_.value(t); }

  double theta1(double t) const { return omega_ref_ * t + psi_.value(t); }
  double theta_m(int m, double t) const {
    return static_cast<double>(m) * theta1(t);
  }
  // Theta_m(t) mod 2 pi via double-double reduction of the linear part.
  double theta_m_reduced(int m, double t) const;

  double duration() const { return traj_->duration(); }
  const CavityTrajectory& trajectory() const { return *traj_; }

 private:
  const CavityTrajectory* traj_;
  double c_;
  double omega_ref_;
  QuinticSeries psi_;
};

// w_m(t) = c m pi / (x2(t) - x1(t)).
double mode_frequency(const CavityTrajectory& traj, int m, double t,
                      double light_speed);

// Theta_m(t), raw accumulated value (also see PhaseProfile for the reduced
// form used in oscillatory kernels).
double accumulated_phase(const PhaseProfile& phases, int m, double t);

}  // namespace lclock
