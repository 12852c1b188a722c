#include "lclock/clock.hpp"

#include <cmath>

namespace lclock {

namespace {

constexpr double kZeroMeanFloor = 1e-300;

}  // namespace

bool is_physical_state(const GaussianClockState& state) {
  const auto& v = state.covariance;
  if (v[1] != v[2]) return false;
  if (v[0] <= 0.0 || v[3] <= 0.0) return false;
  return v[0] * v[3] - v[1] * v[2] >= 0.25 * (1.0 - 1e-12);
}

double mean_phase(const GaussianClockState& state) {
  if (std::abs(state.mean_q) < kZeroMeanFloor &&
      std::abs(state.mean_p) < kZeroMeanFloor) {
    throw UndefinedPhaseError("mean phase undefined for zero mean vector");
  }
  return std::atan2(state.mean_p, state.mean_q);
}

double transformed_phase(const GaussianClockState& state0, Complex a11,
                         Complex b11) {
  const Complex d = a11 - b11;
  const Complex s = a11 + b11;
  const double num = -d.imag() * state0.mean_q + s.real() * state0.mean_p;
  const double den = d.real() * state0.mean_q + s.imag() * state0.mean_p;
  if (std::abs(num) < kZeroMeanFloor && std::abs(den) < kZeroMeanFloor) {
    throw UndefinedPhaseError("transformed phase undefined: zero mean vector");
  }
  return std::atan2(num, den);
}

double state_independence_check(Complex a11, Complex b11,
                                const std::vector<GaussianClockState>& states) {
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto& s : states) {
    if (s.mean_p != 0.0 || s.mean_q == 0.0) {
      throw std::invalid_argument(
          "ensemble states must have <p>_0 = 0 and <q>_0 != 0");
    }
    const double th = transformed_phase(s, a11, b11);
    if (first) {
      lo = hi = th;
      first = false;
    } else {
      lo = std::min(lo, th);
      hi = std::max(hi, th);
    }
  }
  return hi - lo;
}

ClassicalPhases classical_phases(const PhaseProfile& phases) {
  return classical_phases(phases, phases.duration());
}

ClassicalPhases classical_phases(const PhaseProfile& phases, double t) {
  ClassicalPhases out;
  out.theta_A = -phases.omega_ref() * t;
  out.theta_B_cl = -phases.theta1(t);
  return out;
}

double classical_fraction(const PhaseProfile& phases, double t) {
  if (t == 0.0) return 0.0;
  // (theta_B_cl - theta_A)/theta_A = (-psi)/(-w_ref t)
  return phases.psi(t) / (phases.omega_ref() * t);
}

double quantum_phase_shift(Complex alpha1_11, Complex alpha2_11,
                           Complex beta1_11, Complex beta2_11) {
  const Complex d1 = alpha1_11 - beta1_11;
  const Complex d2 = alpha2_11 - beta2_11;
  return -(d1.imag() + d2.imag()) + d1.real() * d1.imag();
}

double closed_form_classical_fraction(const SchwarzschildGeometry& geom,
                                      double r_A, double L0, double T) {
  const double c = geom.light_speed();
  const double a_A = geom.static_proper_acceleration(r_A);
  const double u = c * T / r_A;
  return 0.5 * (a_A * L0 / (c * c) - geom.schwarzschild_radius() / (3.0 * r_A)) *
         u * u;
}

TidalRatioReport tidal_ratio_diagnostic(const SchwarzschildGeometry& geom,
                                        double r_A, double L0, double T,
                                        double f_cl_numeric,
                                        double f_tau_numeric) {
  TidalRatioReport rep;
  rep.f_cl_numeric = f_cl_numeric;
  rep.f_tau_numeric = f_tau_numeric;
  const double a_tide = geom.tidal_acceleration(r_A, L0);
  rep.combination = a_tide * T * T / (6.0 * L0);
  rep.product_reading = (1.0 - rep.combination) * f_tau_numeric;
  rep.product_discrepancy = f_cl_numeric - rep.product_reading;
  rep.combination_discrepancy = f_cl_numeric + rep.combination;
  return rep;
}

}  // namespace lclock
