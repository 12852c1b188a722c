#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "lclock/interp.hpp"
#include "lclock/spacetime.hpp"

namespace lclock {

// Radial free fall from rest at r0 ("drip" worldline), sampled on a uniform
// coordinate-time grid. Node derivatives are the analytic right-hand sides,
// so the quintic interpolants are accurate to the integrator tolerance.
class DripGeodesic {
 public:
  double release_radius() const { return r0_; }
  double duration() const { return r_.t_back(); }
  std::size_t sample_count() const { return r_.size(); }

  double r(double t) const { return r_base_ + r_.value(t); }
  double drdt(double t) const { return r_.deriv(t); }
  double x(double t) const { return x_base_ + x_.value(t); }
  double dxdt(double t) const { return x_.deriv(t); }
  double proper_time(double t) const { return tau_.value(t); }

  // Offset series (relative to the t = 0 values); derivatives are unaffected.
  const QuinticSeries& r_series() const { return r_; }
  const QuinticSeries& x_series() const { return x_; }
  const QuinticSeries& tau_series() const { return tau_; }
  double r_base() const { return r_base_; }
  double x_base() const { return x_base_; }

  // Max over nodes of |sqrt(f + (dr/dtau)^2/c^2) - sqrt(f(r0))|, the
  // conserved-energy residual.
  double energy_residual(const SchwarzschildGeometry& geom) const;

 private:
  friend class GeodesicIntegrator;
  double r0_ = 0.0;
  double r_base_ = 0.0;
  double x_base_ = 0.0;
  QuinticSeries r_, x_, tau_;
};

// Stop condition for integrate_drip.
struct StopAtRadius {
  double r_end;
};
struct StopAtTime {
  double t_end;
};

DripGeodesic integrate_drip(const SchwarzschildGeometry& geom, double r0,
                            StopAtTime stop, std::size_t samples = 20001);
DripGeodesic integrate_drip(const SchwarzschildGeometry& geom, double r0,
                            StopAtRadius stop, std::size_t samples = 20001);

// Coordinate time at which the drip geodesic from r0 reaches r_end, to a
// positional tolerance of 1e-9 m.
double fall_coordinate_time(const SchwarzschildGeometry& geom, double r0,
                            double r_end);

// The two freely falling mirrors of clock B on a common uniform grid, with
// cancellation-safe series for the instantaneous tortoise-length change and
// the drip-vs-static proper-time difference.
class CavityTrajectory {
 public:
  // Geodesic pair released from rest at r_A and r_A + L0 (r-coordinate).
  static CavityTrajectory falling_pair(const SchwarzschildGeometry& geom,
                                       double r_A, double L0, double T,
                                       std::size_t samples = 20001);

  // Test/toy constructor from prescribed mirror motion x_j(t) with analytic
  // velocity and acceleration.
  template <class F, class G>
  static CavityTrajectory from_motion(F&& x_of_t, G&& v_of_t, double T,
                                      std::size_t samples);

  double duration() const { return T_; }
  double initial_length_x() const { return Lx0_; }
  double initial_length_r() const { return L0_r_; }

  double x1(double t) const { return x1_base_ + x1_.value(t); }
  double x2(double t) const { return x2_base_ + x2_.value(t); }
  double v1(double t) const { return x1_.deriv(t); }
  double v2(double t) const { return x2_.deriv(t); }
  double a1(double t) const { return x1_.deriv2(t); }
  double a2(double t) const { return x2_.deriv2(t); }
  double velocity(int j, double t) const { return j == 1 ? v1(t) : v2(t); }
  double accel(int j, double t) const { return j == 1 ? a1(t) : a2(t); }

  // x2(t) - x1(t), formed from the dedicated difference series.
  double length_x(double t) const { return Lx0_ + dlength_.value(t); }
  double delta_length_x(double t) const { return dlength_.value(t); }
  const QuinticSeries& delta_length_series() const { return dlength_; }
  const QuinticSeries& mirror_series(int j) const {
    return j == 1 ? x1_ : x2_;
  }

  bool has_geodesics() const { return bottom_.has_value(); }
  const DripGeodesic& bottom() const { return *bottom_; }
  const DripGeodesic& top() const { return *top_; }

  // (tau_B - tau_A) / tau_A at coordinate time t; tau_B follows the bottom
  // mirror, tau_A the static observer at r_A. Geodesic builds only.
  double fractional_proper_time(double t) const;

  std::size_t sample_count() const { return x1_.size(); }
  double grid_dt() const { return x1_.dt(); }

 private:
  double T_ = 0.0;
  double L0_r_ = 0.0;
  double Lx0_ = 0.0;
  double sqrt_f_A_ = 1.0;
  double x1_base_ = 0.0;
  double x2_base_ = 0.0;
  QuinticSeries x1_, x2_, dlength_;
  QuinticSeries dtau_;
  std::optional<DripGeodesic> bottom_, top_;

  friend class GeodesicIntegrator;
};

// Convenience wrapper per the module contract.
CavityTrajectory mirror_pair(const SchwarzschildGeometry& geom, double r_A,
                             double L0, double T, std::size_t samples = 20001);

double fractional_proper_time(const SchwarzschildGeometry& geom, double r_A,
                              double T);

template <class F, class G>
CavityTrajectory CavityTrajectory::from_motion(F&& x_of_t, G&& v_of_t,
                                               double T, std::size_t samples) {
  CavityTrajectory traj;
  traj.T_ = T;
  const std::size_t n = samples;
  const double dt = T / static_cast<double>(n - 1);
  std::vector<double> x1(n), v1(n), a1(n), x2(n), v2(n), a2(n), dl(n), dv(n),
      da(n);
  const double da_h = dt * 1e-3;  // FD step for the acceleration nodes
  const double x1_0 = x_of_t(1, 0.0);
  const double x2_0 = x_of_t(2, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = dt * static_cast<double>(i);
    x1[i] = x_of_t(1, t) - x1_0;
    x2[i] = x_of_t(2, t) - x2_0;
    v1[i] = v_of_t(1, t);
    v2[i] = v_of_t(2, t);
    const double tl = std::max(0.0, t - da_h);
    const double tr = std::min(T, t + da_h);
    a1[i] = (v_of_t(1, tr) - v_of_t(1, tl)) / (tr - tl);
    a2[i] = (v_of_t(2, tr) - v_of_t(2, tl)) / (tr - tl);
    dl[i] = x2[i] - x1[i];
    dv[i] = v2[i] - v1[i];
    da[i] = a2[i] - a1[i];
  }
  traj.L0_r_ = x2_0 - x1_0;
  traj.Lx0_ = traj.L0_r_;
  traj.x1_base_ = x1_0;
  traj.x2_base_ = x2_0;
  traj.x1_ = QuinticSeries(0.0, dt, x1, v1, a1);
  traj.x2_ = QuinticSeries(0.0, dt, x2, v2, a2);
  traj.dlength_ = QuinticSeries(0.0, dt, dl, dv, da);
  return traj;
}

}  // namespace lclock
