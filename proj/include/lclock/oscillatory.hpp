#pragma once

#include <complex>
#include <functional>
#include <stdexcept>

#include "lclock/cavity.hpp"

namespace lclock {

struct MethodInfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RemainderTooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Monotone phase Theta(t) presented in the forms the different integration
// methods need: raw value, value mod 2 pi (kept accurate at huge phase), an
// accurate two-point difference, and the first two derivatives.
struct PhaseFunction {
  std::function<double(double)> theta;
  std::function<double(double)> theta_reduced;
  std::function<double(double, double)> theta_diff;  // theta(t2) - theta(t1)
  std::function<double(double)> omega;               // dTheta/dt
  std::function<double(double)> domega;

  static PhaseFunction linear(double w);
  // mu * Theta_1(t) of a cavity phase profile.
  static PhaseFunction scaled_profile(const PhaseProfile& ph, double mu);
};

enum class OscMethod { kDirect, kFilon, kAsymptotic };

// Specification of I = Int_{t_a}^{t_b} g(t) e^{-i Theta(t)} dt.
struct OscillatoryIntegralSpec {
  std::function<Complex(double)> envelope;
  std::function<Complex(double)> envelope_d1;  // may be null: finite diff
  PhaseFunction phase;
  double t_a = 0.0;
  double t_b = 0.0;
  OscMethod method = OscMethod::kFilon;
  int panels = 512;       // filon panel count
  double rel_tol = 1e-10; // direct method target
};

struct OscResult {
  Complex value;
  double error_estimate;
};

OscResult oscillatory_integral(const OscillatoryIntegralSpec& spec);

namespace osc {

// M_k = Int_0^h s^k e^{-i Omega s} ds for k = 0..kmax (kmax <= 24).
void moments(double omega, double h, int kmax, Complex* out);

// Cubic polynomial c0 + c1 s + c2 s^2 + c3 s^3 through samples at
// s = 0, h/3, 2h/3, h.
void cubic_from_samples(const Complex u[4], double h, Complex c[4]);

// One Filon panel: Int_0^h p(s) e^{-i Omega s} ds for the cubic through the
// four samples (which should already absorb the phase-curvature factor).
Complex panel_integral(const Complex u[4], double h, double omega);

// T[k][l] = Int_0^h ds2 s2^k e^{-i Omega2 s2} Int_0^{s2} ds1 s1^l
//           e^{+i Omega1 s1}, k, l in {0, 1}.
void triangle_moments(double omega2, double omega1, double h, Complex t_out[2][2]);

}  // namespace osc

}  // namespace lclock
