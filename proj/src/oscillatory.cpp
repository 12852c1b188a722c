#include "lclock/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lclock/compensated.hpp"

namespace lclock {

namespace {

constexpr Complex kI(0.0, 1.0);

Complex unit_phase(double reduced_theta) {
  return std::polar(1.0, -reduced_theta);
}

// Gauss-7 / Kronrod-15 on [-1, 1].
constexpr double kKNode[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993944,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126};
constexpr double kKWeight[8] = {
    0.2094821410847278, 0.2044329400752989, 0.1903505780647854,
    0.1690047266392679, 0.1406532597155259, 0.1047900103222502,
    0.0630920926299786, 0.0229353220105292};
constexpr double kGWeight[4] = {0.4179591836734694, 0.3818300505051189,
                                0.2797053914892767, 0.1294849661688697};

}  // namespace

PhaseFunction PhaseFunction::linear(double w) {
  PhaseFunction p;
  p.theta = [w](double t) { return w * t; };
  p.theta_reduced = [w](double t) { return reduce_phase_2pi(w, t); };
  p.theta_diff = [w](double t1, double t2) { return w * (t2 - t1); };
  p.omega = [w](double) { return w; };
  p.domega = [](double) { return 0.0; };
  return p;
}

PhaseFunction PhaseFunction::scaled_profile(const PhaseProfile& ph, double mu) {
  PhaseFunction p;
  const PhaseProfile* pp = &ph;
  const double wr = ph.omega_ref();
  p.theta = [pp, mu](double t) { return mu * pp->theta1(t); };
  p.theta_reduced = [pp, mu, wr](double t) {
    return std::remainder(
        mu * reduce_phase_2pi(wr, t) + mu * pp->psi(t), kTwoPiHi);
  };
  p.theta_diff = [pp, mu, wr](double t1, double t2) {
    return mu * (wr * (t2 - t1) + (pp->psi(t2) - pp->psi(t1)));
  };
  p.omega = [pp, mu](double t) { return mu * pp->omega1(t); };
  p.domega = [pp, mu](double t) { return mu * pp->domega1_dt(t); };
  return p;
}

namespace osc {

void moments(double omega, double h, int kmax, Complex* out) {
  const double z = omega * h;
  const double az = std::abs(z);
  if (az < std::max(4.0, std::min(static_cast<double>(kmax) + 2.0, 8.0))) {
    // Taylor series in (-i z); stable because az stays below ~kmax + 2.
    const int terms = 40 + static_cast<int>(3.2 * az);
    std::vector<Complex> coeff(terms);
    Complex c(1.0, 0.0);
    for (int j = 0; j < terms; ++j) {
      coeff[j] = c;
      c *= Complex(0.0, -z) / static_cast<double>(j + 1);
    }
    double hp = h;
    for (int k = 0; k <= kmax; ++k) {
      CompensatedComplexSum s;
      for (int j = 0; j < terms; ++j) {
        s += coeff[j] / static_cast<double>(k + j + 1);
      }
      out[k] = hp * s.value();
      hp *= h;
    }
    return;
  }
  const Complex iw = kI * omega;
  const Complex e = std::polar(1.0, -z);
  out[0] = (1.0 - e) / iw;
  double hp = h;  // h^k at step k
  for (int k = 1; k <= kmax; ++k) {
    out[k] = (static_cast<double>(k) * out[k - 1] - hp * e) / iw;
    hp *= h;
  }
}

void cubic_from_samples(const Complex u[4], double h, Complex c[4]) {
  const double d = h / 3.0;
  const Complex d1 = u[1] - u[0];
  const Complex d2 = u[2] - 2.0 * u[1] + u[0];
  const Complex d3 = u[3] - 3.0 * u[2] + 3.0 * u[1] - u[0];
  c[0] = u[0];
  c[1] = (d1 - 0.5 * d2 + d3 / 3.0) / d;
  c[2] = (0.5 * d2 - 0.5 * d3) / (d * d);
  c[3] = d3 / (6.0 * d * d * d);
}

Complex panel_integral(const Complex u[4], double h, double omega) {
  Complex c[4];
  cubic_from_samples(u, h, c);
  Complex m[4];
  moments(omega, h, 3, m);
  return c[0] * m[0] + c[1] * m[1] + c[2] * m[2] + c[3] * m[3];
}

void triangle_moments(double omega2, double omega1, double h,
                      Complex t_out[2][2]) {
  const double z1 = omega1 * h;
  if (std::abs(z1) >= 0.05) {
    Complex a[3], b[3];
    moments(omega2, h, 2, a);
    moments(omega2 - omega1, h, 2, b);
    const Complex iw1 = kI * omega1;
    for (int k = 0; k < 2; ++k) {
      const Complex diff = (b[k] - a[k]) / iw1;
      t_out[k][0] = diff;
      t_out[k][1] = b[k + 1] / iw1 - diff / iw1;
    }
    return;
  }
  // Near-resonant inner kernel: expand e^{+i Omega1 s} in series.
  constexpr int kJ = 8;
  Complex m[1 + 1 + kJ + 1 + 1];
  moments(omega2, h, 1 + 1 + kJ + 1, m);
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      Complex acc(0.0, 0.0);
      Complex c(1.0, 0.0);  // (i Omega1)^j / j!
      for (int j = 0; j <= kJ; ++j) {
        acc += c / static_cast<double>(l + j + 1) * m[k + l + j + 1];
        c *= kI * omega1 / static_cast<double>(j + 1);
      }
      t_out[k][l] = acc;
    }
  }
}

}  // namespace osc

namespace {

Complex direct_kernel(const OscillatoryIntegralSpec& spec, double t) {
  return spec.envelope(t) * unit_phase(spec.phase.theta_reduced(t));
}

struct GkResult {
  Complex value;
  double error;
};

GkResult gk15(const OscillatoryIntegralSpec& spec, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Complex f0 = direct_kernel(spec, mid);
  Complex k = kKWeight[0] * f0;
  Complex g = kGWeight[0] * f0;
  for (int q = 1; q < 8; ++q) {
    const double dx = half * kKNode[q];
    const Complex pair =
        direct_kernel(spec, mid - dx) + direct_kernel(spec, mid + dx);
    k += kKWeight[q] * pair;
    if (q % 2 == 0) g += kGWeight[q / 2] * pair;
  }
  k *= half;
  g *= half;
  return {k, std::abs(k - g)};
}

OscResult direct_integral(const OscillatoryIntegralSpec& spec) {
  const double swing =
      std::abs(spec.phase.theta_diff(spec.t_a, spec.t_b));
  if (swing > 1e6) {
    throw MethodInfeasibleError(
        "direct oscillatory quadrature: phase swing exceeds 1e6 rad");
  }
  struct Interval {
    double a, b;
    GkResult r;
  };
  // Seed with enough intervals that each holds a modest phase swing.
  const int seed = std::clamp(static_cast<int>(swing / 30.0) + 1, 1, 40000);
  std::vector<Interval> stack;
  std::vector<Interval> done;
  stack.reserve(seed);
  const double h0 = (spec.t_b - spec.t_a) / seed;
  for (int i = 0; i < seed; ++i) {
    const double a = spec.t_a + i * h0;
    const double b = (i == seed - 1) ? spec.t_b : a + h0;
    stack.push_back({a, b, gk15(spec, a, b)});
  }
  const double span = spec.t_b - spec.t_a;
  double coarse_abs = 0.0;
  for (const auto& iv : stack) coarse_abs += std::abs(iv.r.value);
  const double tol =
      std::max(spec.rel_tol * coarse_abs, 1e-300);
  std::size_t evals = stack.size();
  while (!stack.empty()) {
    Interval iv = stack.back();
    stack.pop_back();
    if (iv.r.error <= tol * (iv.b - iv.a) / span || (iv.b - iv.a) < 1e-14 * span) {
      done.push_back(iv);
      continue;
    }
    if (++evals > 400000) {
      throw QuadratureError("direct oscillatory quadrature did not converge");
    }
    const double m = 0.5 * (iv.a + iv.b);
    stack.push_back({iv.a, m, gk15(spec, iv.a, m)});
    stack.push_back({m, iv.b, gk15(spec, m, iv.b)});
    ++evals;
  }
  CompensatedComplexSum total;
  CompensatedSum err;
  for (const auto& iv : done) {
    total += iv.r.value;
    err += iv.r.error;
  }
  return {total.value(), err.value()};
}

Complex filon_pass(const OscillatoryIntegralSpec& spec, int panels) {
  const double h = (spec.t_b - spec.t_a) / panels;
  CompensatedComplexSum total;
  Complex u[4];
  for (int p = 0; p < panels; ++p) {
    const double t0 = spec.t_a + p * h;
    const double hp = (p == panels - 1) ? (spec.t_b - t0) : h;
    const double wbar = spec.phase.theta_diff(t0, t0 + hp) / hp;
    for (int q = 0; q < 4; ++q) {
      const double s = hp * q / 3.0;
      const double rho = spec.phase.theta_diff(t0, t0 + s) - wbar * s;
      u[q] = spec.envelope(t0 + s) * unit_phase(rho);
    }
    total += unit_phase(spec.phase.theta_reduced(t0)) *
             osc::panel_integral(u, hp, wbar);
  }
  return total.value();
}

OscResult filon_integral(const OscillatoryIntegralSpec& spec) {
  const int n = std::max(1, spec.panels);
  const Complex coarse = filon_pass(spec, n);
  const Complex fine = filon_pass(spec, 2 * n);
  return {fine, std::abs(fine - coarse)};
}

OscResult asymptotic_integral(const OscillatoryIntegralSpec& spec) {
  const auto& ph = spec.phase;
  const double span = spec.t_b - spec.t_a;
  const double wa = ph.omega(spec.t_a);
  const double wb = ph.omega(spec.t_b);
  if (wa * wb <= 0.0 ||
      std::min(std::abs(wa), std::abs(wb)) * span < 10.0) {
    throw MethodInfeasibleError(
        "asymptotic oscillatory series: phase not fast or not monotone");
  }
  const double fd = span * 1e-6;
  auto d1 = [&](double t) {
    if (spec.envelope_d1) return spec.envelope_d1(t);
    const double tl = std::max(spec.t_a, t - fd);
    const double tr = std::min(spec.t_b, t + fd);
    return (spec.envelope(tr) - spec.envelope(tl)) / (tr - tl);
  };
  auto g1 = [&](double t) {
    const double w = ph.omega(t);
    return kI * d1(t) / w - kI * spec.envelope(t) * ph.domega(t) / (w * w);
  };
  auto g2 = [&](double t) {
    const double tl = std::max(spec.t_a, t - fd);
    const double tr = std::min(spec.t_b, t + fd);
    const Complex g1p = (g1(tr) - g1(tl)) / (tr - tl);
    const double w = ph.omega(t);
    return kI * g1p / w - kI * g1(t) * ph.domega(t) / (w * w);
  };
  auto boundary = [&](double t) {
    const double w = ph.omega(t);
    return (kI / w) * (spec.envelope(t) - g1(t)) *
           unit_phase(ph.theta_reduced(t));
  };
  const Complex value = boundary(spec.t_b) - boundary(spec.t_a);

  // Remainder bound: Int |(g1 / (-i w))'| dt, sampled.
  const int ns = 33;
  CompensatedSum bound;
  double gmax = 0.0;
  for (int i = 0; i < ns; ++i) {
    const double t = spec.t_a + span * (i + 0.5) / ns;
    bound += std::abs(g2(t)) * (span / ns);
    gmax = std::max(gmax, std::abs(spec.envelope(t)));
  }
  const double err = bound.value();
  const double floor_scale =
      1e-15 * span * gmax / std::min(std::abs(wa), std::abs(wb));
  if (err > 0.25 * std::abs(value) && err > floor_scale) {
    throw RemainderTooLargeError(
        "asymptotic oscillatory series: remainder not negligible");
  }
  return {value, err};
}

}  // namespace

OscResult oscillatory_integral(const OscillatoryIntegralSpec& spec) {
  if (!(spec.t_b > spec.t_a)) {
    throw std::invalid_argument("oscillatory_integral: empty interval");
  }
  switch (spec.method) {
    case OscMethod::kDirect:
      return direct_integral(spec);
    case OscMethod::kFilon:
      return filon_integral(spec);
    case OscMethod::kAsymptotic:
      return asymptotic_integral(spec);
  }
  throw std::invalid_argument("oscillatory_integral: unknown method");
}

}  // namespace lclock
