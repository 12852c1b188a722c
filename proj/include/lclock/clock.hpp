#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "lclock/bogoliubov.hpp"
#include "lclock/cavity.hpp"
#include "lclock/spacetime.hpp"

namespace lclock {

class UndefinedPhaseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// First moments and covariance of a single-mode Gaussian state. The
// covariance is stored row-major as {Vqq, Vqp, Vqp, Vpp}; the default is the
// coherent-state value I/2.
struct GaussianClockState {
  double mean_q = 0.0;
  double mean_p = 0.0;
  std::array<double, 4> covariance{0.5, 0.0, 0.0, 0.5};

  // Clock initialization convention: reference phase chosen so <p> = 0.
  static GaussianClockState zero_phase(double mean_q) {
    GaussianClockState s;
    s.mean_q = mean_q;
    return s;
  }
};

// Heisenberg check: V + (i/2) Omega >= 0, i.e. det V >= 1/4 for a symmetric
// positive covariance.
bool is_physical_state(const GaussianClockState& state);

// atan2(<p>, <q>); throws UndefinedPhaseError on a zero mean vector.
double mean_phase(const GaussianClockState& state);

// Phase after a Bogoliubov transformation with (1,1) entries (a11, b11),
// from the first moments of the initial state.
double transformed_phase(const GaussianClockState& state0, Complex a11,
                         Complex b11);

// Max pairwise spread of transformed_phase over an ensemble; all states must
// have <p>_0 = 0 and <q>_0 != 0.
double state_independence_check(Complex a11, Complex b11,
                                const std::vector<GaussianClockState>& states);

struct ClassicalPhases {
  double theta_A = 0.0;     // -w_1(0) T
  double theta_B_cl = 0.0;  // -Int_0^T w_1(t) dt
};

ClassicalPhases classical_phases(const PhaseProfile& phases);
ClassicalPhases classical_phases(const PhaseProfile& phases, double t);

// (theta_B_cl - theta_A)/theta_A without forming the large totals:
// psi(t) / (w_ref t). Returns 0 at t = 0.
double classical_fraction(const PhaseProfile& phases, double t);

// theta_B^Qu from the stripped (1,1) entries, first plus second order.
double quantum_phase_shift(Complex alpha1_11, Complex alpha2_11,
                           Complex beta1_11, Complex beta2_11);

// Weak-field closed form for the end-of-fall classical fraction:
//   F = (a_A L0 / c^2 - r_s / (3 r_A)) (c T / r_A)^2 / 2.
double closed_form_classical_fraction(const SchwarzschildGeometry& geom,
                                      double r_A, double L0, double T);

// The multiplicative tidal-ratio formula F_cl = (1 - a_tide T^2/(6 L0)) F_tau
// evaluated under a_tide = c^2 r_s L0 / r_A^3, reported next to the measured
// fractions. The standalone combination a_tide T^2/(6 L0) is also reported;
// no pass/fail judgement is made here.
struct TidalRatioReport {
  double f_cl_numeric = 0.0;
  double f_tau_numeric = 0.0;
  double combination = 0.0;      // a_tide T^2 / (6 L0), L0-independent
  double product_reading = 0.0;  // (1 - combination) * F_tau
  double product_discrepancy = 0.0;      // f_cl_numeric - product_reading
  double combination_discrepancy = 0.0;  // f_cl_numeric + combination
};

TidalRatioReport tidal_ratio_diagnostic(const SchwarzschildGeometry& geom,
                                        double r_A, double L0, double T,
                                        double f_cl_numeric,
                                        double f_tau_numeric);

// Per-sample comparison of the two clocks over [0, T].
struct ClockComparison {
  std::vector<double> t;
  std::vector<double> theta_A, theta_B_cl, theta_B_qu;
  std::vector<double> F_cl, F_qu, F_tau;

  double theta_A_end() const { return theta_A.back(); }
  double f_cl_end() const { return F_cl.back(); }
  double f_qu_end() const { return F_qu.back(); }
  double f_tau_end() const { return F_tau.back(); }
};

}  // namespace lclock
