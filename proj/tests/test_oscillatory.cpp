#include <cmath>
#include <complex>

#include "doctest.h"
#include "lclock/cavity.hpp"
#include "lclock/compensated.hpp"
#include "lclock/constants.hpp"
#include "lclock/geodesics.hpp"
#include "lclock/oscillatory.hpp"

using namespace lclock;

namespace {

using CL = std::complex<long double>;

// Long-double Simpson oracle for Int_0^h s^k e^{-i W s} ds.
CL moment_oracle(double w, double h, int k, int n = 200001) {
  const long double hh = h;
  const long double ww = w;
  CL s(0.0L, 0.0L);
  for (int i = 0; i < n; ++i) {
    const long double x = hh * i / (n - 1);
    const long double wt = (i == 0 || i == n - 1) ? 1.0L : (i % 2 ? 4.0L : 2.0L);
    s += wt * std::pow(x, static_cast<long double>(k)) *
         std::exp(CL(0.0L, -ww * x));
  }
  return s * (hh / (n - 1)) / 3.0L;
}

// Long-double oracle for the triangle moment: inner integral in closed form
// (series when the inner frequency is small), outer by Simpson.
CL triangle_oracle(double w2, double w1, double h, int k, int l,
                   int n = 40001) {
  const long double ww1 = w1;
  auto inner = [&](long double s2) -> CL {
    if (std::abs(ww1 * s2) < 0.3L) {
      CL acc(0.0L, 0.0L);
      CL c(1.0L, 0.0L);
      for (int j = 0; j <= 24; ++j) {
        acc += c * std::pow(s2, static_cast<long double>(l + j + 1)) /
               static_cast<long double>(l + j + 1);
        c *= CL(0.0L, ww1) / static_cast<long double>(j + 1);
      }
      return acc;
    }
    const CL iw1(0.0L, ww1);
    const CL e = std::exp(iw1 * s2);
    if (l == 0) return (e - CL(1.0L)) / iw1;
    return s2 * e / iw1 - (e - CL(1.0L)) / (iw1 * iw1);
  };
  const long double hh = h;
  const long double ww2 = w2;
  CL s(0.0L, 0.0L);
  for (int i = 0; i < n; ++i) {
    const long double x = hh * i / (n - 1);
    const long double wt = (i == 0 || i == n - 1) ? 1.0L : (i % 2 ? 4.0L : 2.0L);
    s += wt * std::pow(x, static_cast<long double>(k)) *
         std::exp(CL(0.0L, -ww2 * x)) * inner(x);
  }
  return s * (hh / (n - 1)) / 3.0L;
}

double cdist(Complex a, CL b) {
  return std::abs(a - Complex(static_cast<double>(b.real()),
                              static_cast<double>(b.imag())));
}

}  // namespace

TEST_CASE("moments match the long-double quadrature oracle") {
  for (double w : {0.0, 1e-6, -0.3, 2.7, -8.0, 40.0, 300.0}) {
    for (double h : {0.1, 1.0}) {
      if (std::abs(w) * h > 60.0) continue;  // keep the oracle resolved
      Complex m[7];
      osc::moments(w, h, 6, m);
      for (int k = 0; k <= 6; ++k) {
        const auto ref = moment_oracle(w, h, k);
        const double scale = std::pow(h, k + 1) / (k + 1);
        CHECK(cdist(m[k], ref) < 1e-13 * scale);
      }
    }
  }
}

TEST_CASE("series and recurrence branches agree at the same argument") {
  // kmax = 3 switches branches at |z| = 5, kmax = 2 at |z| = 4, so z = 4.5
  // is evaluated by the series in one call and the recurrence in the other.
  const double h = 1.0;
  Complex ser[4], rec[3];
  osc::moments(4.5, h, 3, ser);
  osc::moments(4.5, h, 2, rec);
  for (int k = 0; k <= 2; ++k) CHECK(std::abs(ser[k] - rec[k]) < 1e-13);
}

TEST_CASE("cubic fit reproduces a cubic exactly") {
  const double h = 0.7;
  const Complex c_in[4] = {{1.0, -2.0}, {0.5, 0.25}, {-3.0, 1.0}, {2.0, 0.0}};
  Complex u[4];
  for (int q = 0; q < 4; ++q) {
    const double s = h * q / 3.0;
    u[q] = c_in[0] + s * (c_in[1] + s * (c_in[2] + s * c_in[3]));
  }
  Complex c[4];
  osc::cubic_from_samples(u, h, c);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(c[k] - c_in[k]) < 1e-12);
}

TEST_CASE("unit envelope, linear phase: closed form") {
  const double w = 250.0, T = 2.0;
  const Complex exact = (1.0 - std::polar(1.0, -w * T)) / Complex(0.0, w);
  OscillatoryIntegralSpec spec;
  spec.envelope = [](double) { return Complex(1.0); };
  spec.phase = PhaseFunction::linear(w);
  spec.t_a = 0.0;
  spec.t_b = T;

  spec.method = OscMethod::kDirect;
  auto d = oscillatory_integral(spec);
  CHECK(std::abs(d.value - exact) < 1e-12);

  spec.method = OscMethod::kFilon;
  spec.panels = 64;
  auto f = oscillatory_integral(spec);
  CHECK(std::abs(f.value - exact) < 1e-12);

  // constant envelope, constant frequency: asymptotic series is exact
  spec.method = OscMethod::kAsymptotic;
  auto a = oscillatory_integral(spec);
  CHECK(std::abs(a.value - exact) < 1e-13);
  CHECK(a.error_estimate < 1e-13);
}

TEST_CASE("zero frequency reduces to the plain integral") {
  OscillatoryIntegralSpec spec;
  spec.envelope = [](double t) { return Complex(t * t); };
  spec.phase = PhaseFunction::linear(0.0);
  spec.t_a = 0.0;
  spec.t_b = 1.0;
  spec.method = OscMethod::kFilon;
  spec.panels = 32;
  auto f = oscillatory_integral(spec);
  CHECK(std::abs(f.value - Complex(1.0 / 3.0)) < 1e-13);
  spec.method = OscMethod::kDirect;
  auto d = oscillatory_integral(spec);
  CHECK(std::abs(d.value - Complex(1.0 / 3.0)) < 1e-13);
}

TEST_CASE("filon vs direct on a 1e4 rad swing") {
  const double w = 1000.0, T = 10.0;
  OscillatoryIntegralSpec spec;
  spec.envelope = [](double t) { return Complex(t * t * std::exp(-t)); };
  spec.phase = PhaseFunction::linear(w);
  spec.t_a = 0.0;
  spec.t_b = T;
  spec.method = OscMethod::kDirect;
  spec.rel_tol = 1e-12;
  auto d = oscillatory_integral(spec);
  spec.method = OscMethod::kFilon;
  spec.panels = 2000;
  auto f = oscillatory_integral(spec);
  CHECK(std::abs(f.value - d.value) < 1e-8 * std::abs(d.value));
  CHECK(f.error_estimate < 1e-6 * std::abs(d.value));
}

TEST_CASE("asymptotic vs direct on a smooth envelope") {
  const double w = 20000.0, T = 4.0;
  OscillatoryIntegralSpec spec;
  spec.envelope = [](double t) { return Complex(1.0 + 0.3 * t + 0.05 * t * t); };
  spec.envelope_d1 = [](double t) { return Complex(0.3 + 0.1 * t); };
  spec.phase = PhaseFunction::linear(w);
  spec.t_a = 0.0;
  spec.t_b = T;
  spec.method = OscMethod::kDirect;
  spec.rel_tol = 1e-12;
  auto d = oscillatory_integral(spec);
  spec.method = OscMethod::kAsymptotic;
  auto a = oscillatory_integral(spec);
  CHECK(std::abs(a.value - d.value) < 1e-7 * std::abs(d.value));
  CHECK(std::abs(a.value - d.value) <= 10.0 * a.error_estimate + 1e-16);
}

TEST_CASE("direct refuses an astronomically fast phase") {
  OscillatoryIntegralSpec spec;
  spec.envelope = [](double) { return Complex(1.0); };
  spec.phase = PhaseFunction::linear(4.5e9);
  spec.t_a = 0.0;
  spec.t_b = 4.7;
  spec.method = OscMethod::kDirect;
  CHECK_THROWS_AS(oscillatory_integral(spec), MethodInfeasibleError);
}

TEST_CASE("asymptotic refuses a slow phase") {
  OscillatoryIntegralSpec spec;
  spec.envelope = [](double) { return Complex(1.0); };
  spec.phase = PhaseFunction::linear(0.5);
  spec.t_a = 0.0;
  spec.t_b = 1.0;
  spec.method = OscMethod::kAsymptotic;
  CHECK_THROWS_AS(oscillatory_integral(spec), MethodInfeasibleError);
}

TEST_CASE("triangle moments match the oracle") {
  const struct {
    double w2, w1, h;
  } cases[] = {
      {7.0, 3.0, 1.0},    {30.0, 12.5, 1.0},  {5.0, 0.0, 0.8},
      {5.0, 1e-6, 0.8},   {12.0, 12.0, 1.0},  {-9.0, 4.0, 0.6},
      {4.0, -2.5, 1.2},   {0.0, 0.0, 1.0},    {2.0, 1e-4, 1.0},
  };
  for (const auto& cs : cases) {
    Complex t[2][2];
    osc::triangle_moments(cs.w2, cs.w1, cs.h, t);
    for (int k = 0; k < 2; ++k) {
      for (int l = 0; l < 2; ++l) {
        const auto ref = triangle_oracle(cs.w2, cs.w1, cs.h, k, l);
        const double scale =
            std::pow(cs.h, k + l + 2) / ((k + 1) * (l + 1));
        CHECK(cdist(t[k][l], ref) < 1e-11 * scale);
      }
    }
  }
}

TEST_CASE("profile-based phase: filon vs direct on a toy drift") {
  // slowly stretching toy cavity, effective light speed 1
  auto x = [](int j, double t) {
    return j == 1 ? 0.0 : 1.0 + 1e-3 * t * t;
  };
  auto v = [](int j, double t) { return j == 1 ? 0.0 : 2e-3 * t; };
  const auto traj = CavityTrajectory::from_motion(x, v, 3.0, 601);
  PhaseProfile ph(traj, 1.0);  // w_ref = pi
  const double mu = 700.0;     // swing ~ 6.6e3 rad
  OscillatoryIntegralSpec spec;
  spec.envelope = [&](double t) { return Complex(1.0 / traj.length_x(t)); };
  spec.phase = PhaseFunction::scaled_profile(ph, mu);
  spec.t_a = 0.0;
  spec.t_b = 3.0;
  spec.method = OscMethod::kDirect;
  spec.rel_tol = 1e-12;
  auto d = oscillatory_integral(spec);
  spec.method = OscMethod::kFilon;
  spec.panels = 1200;
  auto f = oscillatory_integral(spec);
  CHECK(std::abs(f.value - d.value) < 1e-8 * std::abs(d.value));

  // phase bookkeeping consistency
  CHECK(spec.phase.theta_diff(0.5, 2.5) ==
        doctest::Approx(spec.phase.theta(2.5) - spec.phase.theta(0.5))
            .epsilon(1e-10));
  const double red = spec.phase.theta_reduced(2.0);
  CHECK(std::remainder(red - spec.phase.theta(2.0), kTwoPiHi) ==
        doctest::Approx(0.0).epsilon(1e-6));
}
