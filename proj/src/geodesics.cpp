#include "lclock/geodesics.hpp"

#include <cmath>

#include "lclock/ode.hpp"

namespace lclock {

namespace {

// Coordinate-time form of the radial geodesic, regular at release. The
// integrated radial variable is the offset rr = r - r0, so that the ~100 m
// fall is not buried under a ~6e6 m base value:
//   d(rr)/dt = u
//   du/dt    = -c^2 r_s f^2 / (2 r^2 f0) + (r_s / r^2) u^2 / f
//   dtau/dt  = f / sqrt(f0)
struct DripRhs {
  const SchwarzschildGeometry& geom;
  double r0;
  double f0;

  void operator()(double /*t*/, const std::vector<double>& y,
                  std::vector<double>& dydt) const {
    const double r = r0 + y[0];
    const double u = y[1];
    const double c = geom.light_speed();
    const double rs = geom.schwarzschild_radius();
    const double f = geom.lapse(r);
    dydt[0] = u;
    dydt[1] =
        -c * c * rs * f * f / (2.0 * r * r * f0) + rs / (r * r) * u * u / f;
    dydt[2] = f / std::sqrt(f0);
  }
};

double accel_of(const SchwarzschildGeometry& geom, double r, double u,
                double f0) {
  const double c = geom.light_speed();
  const double rs = geom.schwarzschild_radius();
  const double f = geom.lapse(r);
  return -c * c * rs * f * f / (2.0 * r * r * f0) + rs / (r * r) * u * u / f;
}

// x(r0 + rr) - x(r0) without forming the large tortoise values.
double tortoise_offset(const SchwarzschildGeometry& geom, double r0,
                       double rr) {
  const double rs = geom.schwarzschild_radius();
  if (rs == 0.0) return rr;
  return rr + rs * std::log1p(rr / (r0 - rs));
}

}  // namespace

class GeodesicIntegrator {
 public:
  static DripGeodesic drip_to_time(const SchwarzschildGeometry& geom,
                                   double r0, double t_end,
                                   std::size_t samples) {
    if (r0 <= geom.schwarzschild_radius()) {
      throw HorizonDomainError("release radius inside the horizon");
    }
    if (t_end < 0.0 || samples < 2) {
      throw std::invalid_argument("bad stop time or sample count");
    }
    const double f0 = geom.lapse(r0);
    DripRhs rhs{geom, r0, f0};
    Dopri5 solver(
        [&rhs](double t, const std::vector<double>& y,
               std::vector<double>& d) { rhs(t, y, d); },
        1e-12, 1e-12);

    const std::size_t n = samples;
    const double dt = t_end / static_cast<double>(n - 1);
    std::vector<double> r(n), u(n), a(n), x(n), vx(n), ax(n), tau(n), dtau(n),
        d2tau(n);
    std::vector<double> y = {0.0, 0.0, 0.0};
    double t = 0.0;
    const double rs = geom.schwarzschild_radius();
    const double sqrt_f0 = std::sqrt(f0);
    for (std::size_t i = 0; i < n; ++i) {
      const double ti = dt * static_cast<double>(i);
      if (i > 0) solver.integrate_to(t, y, ti);
      const double ri = r0 + y[0];
      if (ri <= rs * (1.0 + 1e-12)) {
        throw HorizonDomainError("trajectory reached the horizon");
      }
      const double f = geom.lapse(ri);
      r[i] = y[0];
      u[i] = y[1];
      a[i] = accel_of(geom, ri, y[1], f0);
      x[i] = tortoise_offset(geom, r0, y[0]);
      vx[i] = u[i] / f;
      ax[i] = a[i] / f - rs / (ri * ri) * u[i] * u[i] / (f * f);
      tau[i] = y[2];
      dtau[i] = f / sqrt_f0;
      d2tau[i] = rs / (ri * ri) * u[i] / sqrt_f0;
    }
    DripGeodesic g;
    g.r0_ = r0;
    g.r_base_ = r0;
    g.x_base_ = geom.tortoise(r0);
    g.r_ = QuinticSeries(0.0, dt, r, u, a);
    g.x_ = QuinticSeries(0.0, dt, x, vx, ax);
    g.tau_ = QuinticSeries(0.0, dt, tau, dtau, d2tau);
    return g;
  }

  static CavityTrajectory pair(const SchwarzschildGeometry& geom, double r_A,
                               double L0, double T, std::size_t samples) {
    if (r_A <= geom.schwarzschild_radius()) {
      throw HorizonDomainError("r_A inside the horizon");
    }
    if (L0 <= 0.0 || T <= 0.0 || samples < 2) {
      throw std::invalid_argument("bad cavity parameters");
    }
    const double rs = geom.schwarzschild_radius();
    const double r_top = r_A + L0;
    const double f0_bot = geom.lapse(r_A);
    const double f0_top = geom.lapse(r_top);
    const double sqrt_fA = std::sqrt(f0_bot);
    const double sqrt_ftop = std::sqrt(f0_top);

    // State: rr1, u1, tau1, rr2, u2, tau2, dr (=r2-r1), dtau
    // with rr_j the offset from each mirror's release radius and
    // dtau = tau1 - sqrt(f(r_A)) t.
    auto rhs = [&](double /*t*/, const std::vector<double>& y,
                   std::vector<double>& d) {
      const double r1 = r_A + y[0], u1 = y[1];
      const double r2 = r_top + y[3], u2 = y[4];
      const double f1 = geom.lapse(r1);
      d[0] = u1;
      d[1] = accel_of(geom, r1, u1, f0_bot);
      d[2] = f1 / sqrt_fA;
      d[3] = u2;
      d[4] = accel_of(geom, r2, u2, f0_top);
      d[5] = geom.lapse(r2) / sqrt_ftop;
      d[6] = u2 - u1;
      // f(r1) - f(r_A) formed stably from the fall depth.
      d[7] = rs * y[0] / (r1 * r_A) / sqrt_fA;
    };
    Dopri5 solver(rhs, 1e-12, 1e-12);

    const std::size_t n = samples;
    const double dt = T / static_cast<double>(n - 1);
    std::vector<double> y = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, L0, 0.0};
    double t = 0.0;

    std::vector<double> x1(n), v1(n), a1(n), x2(n), v2(n), a2(n);
    std::vector<double> dl(n), dlv(n), dla(n), dta(n), dtv(n), dt2(n);
    std::vector<double> r1s(n), u1s(n), ar1(n), r2s(n), u2s(n), ar2(n);
    std::vector<double> tau1(n), dtau1(n), d2tau1(n), tau2(n), dtau2(n),
        d2tau2(n);

    const double log0 = rs == 0.0 ? 0.0 : std::log1p(L0 / (r_A - rs));
    for (std::size_t i = 0; i < n; ++i) {
      const double ti = dt * static_cast<double>(i);
      if (i > 0) solver.integrate_to(t, y, ti);
      const double r1 = r_A + y[0], u1 = y[1];
      const double r2 = r_top + y[3], u2 = y[4];
      const double dr = y[6];
      if (r1 <= rs * (1.0 + 1e-12)) {
        throw HorizonDomainError("bottom mirror reached the horizon");
      }
      const double f1 = geom.lapse(r1);
      const double f2 = geom.lapse(r2);
      r1s[i] = y[0];
      u1s[i] = u1;
      ar1[i] = accel_of(geom, r1, u1, f0_bot);
      r2s[i] = y[3];
      u2s[i] = u2;
      ar2[i] = accel_of(geom, r2, u2, f0_top);
      x1[i] = tortoise_offset(geom, r_A, y[0]);
      x2[i] = tortoise_offset(geom, r_top, y[3]);
      v1[i] = u1 / f1;
      v2[i] = u2 / f2;
      a1[i] = ar1[i] / f1 - rs / (r1 * r1) * u1 * u1 / (f1 * f1);
      a2[i] = ar2[i] / f2 - rs / (r2 * r2) * u2 * u2 / (f2 * f2);
      tau1[i] = y[2];
      dtau1[i] = f1 / sqrt_fA;
      d2tau1[i] = rs / (r1 * r1) * u1 / sqrt_fA;
      tau2[i] = y[5];
      dtau2[i] = f2 / sqrt_ftop;
      d2tau2[i] = rs / (r2 * r2) * u2 / sqrt_ftop;

      // Tortoise-length change, cancellation-safe:
      //   x2 - x1 = dr + rs log1p(dr / (r1 - rs))
      const double dlog =
          rs == 0.0 ? 0.0 : rs * (std::log1p(dr / (r1 - rs)) - log0);
      dl[i] = (dr - L0) + dlog;
      const double du = u2 - u1;
      dlv[i] = du / f2 + u1 * (-rs * dr / (r1 * r2)) / (f1 * f2);
      dla[i] = a2[i] - a1[i];
      dta[i] = y[7];
      dtv[i] = rs * y[0] / (r1 * r_A) / sqrt_fA;
      dt2[i] = rs / (r1 * r1) * u1 / sqrt_fA;
    }

    CavityTrajectory traj;
    traj.T_ = T;
    traj.L0_r_ = L0;
    traj.Lx0_ = L0 + (rs == 0.0 ? 0.0 : rs * log0);
    traj.sqrt_f_A_ = sqrt_fA;
    traj.x1_base_ = geom.tortoise(r_A);
    traj.x2_base_ = geom.tortoise(r_top);
    traj.x1_ = QuinticSeries(0.0, dt, x1, v1, a1);
    traj.x2_ = QuinticSeries(0.0, dt, x2, v2, a2);
    traj.dlength_ = QuinticSeries(0.0, dt, dl, dlv, dla);
    traj.dtau_ = QuinticSeries(0.0, dt, dta, dtv, dt2);

    DripGeodesic bottom;
    bottom.r0_ = r_A;
    bottom.r_base_ = r_A;
    bottom.x_base_ = traj.x1_base_;
    bottom.r_ = QuinticSeries(0.0, dt, r1s, u1s, ar1);
    bottom.x_ = traj.x1_;
    bottom.tau_ = QuinticSeries(0.0, dt, tau1, dtau1, d2tau1);
    DripGeodesic top;
    top.r0_ = r_top;
    top.r_base_ = r_top;
    top.x_base_ = traj.x2_base_;
    top.r_ = QuinticSeries(0.0, dt, r2s, u2s, ar2);
    top.x_ = traj.x2_;
    top.tau_ = QuinticSeries(0.0, dt, tau2, dtau2, d2tau2);
    traj.bottom_ = std::move(bottom);
    traj.top_ = std::move(top);
    return traj;
  }
};

double DripGeodesic::energy_residual(const SchwarzschildGeometry& geom) const {
  const double f0 = geom.lapse(r0_);
  const double c = geom.light_speed();
  const double rs = geom.schwarzschild_radius();
  double worst = 0.0;
  for (std::size_t i = 0; i < r_.size(); ++i) {
    const double rr = r_.node_value(i);
    const double r = r_base_ + rr;
    const double u = r_.node_deriv(i);
    const double f = geom.lapse(r);
    const double v = u * std::sqrt(f0) / f;  // dr/dtau
    // eps = sqrt(f + v^2/c^2); compare eps^2 against f0 via the stable
    // difference f - f0 = rs * rr / (r r0).
    const double df = rs == 0.0 ? 0.0 : rs * rr / (r * r0_);
    const double resid = (df + v * v / (c * c)) / (2.0 * std::sqrt(f0));
    worst = std::max(worst, std::abs(resid));
  }
  return worst;
}

DripGeodesic integrate_drip(const SchwarzschildGeometry& geom, double r0,
                            StopAtTime stop, std::size_t samples) {
  return GeodesicIntegrator::drip_to_time(geom, r0, stop.t_end, samples);
}

DripGeodesic integrate_drip(const SchwarzschildGeometry& geom, double r0,
                            StopAtRadius stop, std::size_t samples) {
  const double T = fall_coordinate_time(geom, r0, stop.r_end);
  return GeodesicIntegrator::drip_to_time(geom, r0, T, samples);
}

double fall_coordinate_time(const SchwarzschildGeometry& geom, double r0,
                            double r_end) {
  const double rs = geom.schwarzschild_radius();
  if (rs <= 0.0) {
    throw std::invalid_argument("no free fall in flat spacetime");
  }
  if (!(rs < r_end && r_end < r0)) {
    throw std::invalid_argument("need r_s < r_end < r0");
  }
  const double c = geom.light_speed();
  const double g_newton = c * c * rs / (2.0 * r0 * r0);
  const double t_guess = std::sqrt(2.0 * (r0 - r_end) / g_newton);

  const double f0 = geom.lapse(r0);
  DripRhs rhs{geom, r0, f0};
  Dopri5 solver(
      [&rhs](double t, const std::vector<double>& y, std::vector<double>& d) {
        rhs(t, y, d);
      },
      1e-12, 1e-12);

  // March in coarse probes until r drops below r_end, then bisect by
  // re-integrating from the bracket start.
  const double target = r_end - r0;  // offset coordinates
  const double probe = t_guess / 64.0;
  double t = 0.0;
  std::vector<double> y = {0.0, 0.0, 0.0};
  double t_lo = 0.0;
  std::vector<double> y_lo = y;
  for (int i = 0; i < 100000; ++i) {
    t_lo = t;
    y_lo = y;
    solver.integrate_to(t, y, t + probe);
    if (y[0] <= target) break;
    if (r0 + y[0] <= rs * (1.0 + 1e-12)) {
      throw HorizonDomainError("fall approached the horizon");
    }
  }
  if (y[0] > target) throw ConvergenceError("fall event not bracketed");

  double a = t_lo, b = t;
  const double speed = std::abs(y[1]) + 1e-30;
  const double t_tol = 1e-9 / speed;
  while (b - a > t_tol) {
    const double mid = 0.5 * (a + b);
    double tm = t_lo;
    std::vector<double> ym = y_lo;
    solver.integrate_to(tm, ym, mid);
    if (ym[0] > target) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

CavityTrajectory CavityTrajectory::falling_pair(
    const SchwarzschildGeometry& geom, double r_A, double L0, double T,
    std::size_t samples) {
  return GeodesicIntegrator::pair(geom, r_A, L0, T, samples);
}

double CavityTrajectory::fractional_proper_time(double t) const {
  if (!bottom_) {
    throw std::logic_error("fractional_proper_time needs a geodesic build");
  }
  if (t <= 0.0) return 0.0;
  return dtau_.value(t) / (sqrt_f_A_ * t);
}

CavityTrajectory mirror_pair(const SchwarzschildGeometry& geom, double r_A,
                             double L0, double T, std::size_t samples) {
  return CavityTrajectory::falling_pair(geom, r_A, L0, T, samples);
}

double fractional_proper_time(const SchwarzschildGeometry& geom, double r_A,
                              double T) {
  if (geom.schwarzschild_radius() == 0.0) return 0.0;
  const auto traj = CavityTrajectory::falling_pair(geom, r_A, 1.0, T, 2001);
  return traj.fractional_proper_time(T);
}

}  // namespace lclock
