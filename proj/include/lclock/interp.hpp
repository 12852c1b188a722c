#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lclock {

// Globally C^2 quintic Hermite interpolant on a uniform grid: each node
// stores the value and its first two derivatives (known analytically from the
// ODE right-hand side), and each segment is the two-point Taylor quintic.
class QuinticSeries {
 public:
  QuinticSeries() = default;
  QuinticSeries(double t0, double dt, std::vector<double> value,
                std::vector<double> deriv1, std::vector<double> deriv2)
      : t0_(t0), dt_(dt), v_(std::move(value)), d1_(std::move(deriv1)),
        d2_(std::move(deriv2)) {
    if (v_.size() < 2 || v_.size() != d1_.size() || v_.size() != d2_.size()) {
      throw std::invalid_argument("QuinticSeries: inconsistent sample arrays");
    }
  }

  double t_front() const { return t0_; }
  double t_back() const { return t0_ + dt_ * static_cast<double>(v_.size() - 1); }
  double dt() const { return dt_; }
  std::size_t size() const { return v_.size(); }
  double node_value(std::size_t i) const { return v_[i]; }
  double node_deriv(std::size_t i) const { return d1_[i]; }
  double node_time(std::size_t i) const {
    return t0_ + dt_ * static_cast<double>(i);
  }

  double value(double t) const { return eval(t, 0); }
  double deriv(double t) const { return eval(t, 1); }
  double deriv2(double t) const { return eval(t, 2); }

 private:
  double eval(double t, int order) const {
    std::size_t i;
    double s;
    locate(t, i, s);
    const double h = dt_;
    const double A = v_[i + 1] - v_[i] - d1_[i] * h - 0.5 * d2_[i] * h * h;
    const double B = d1_[i + 1] - d1_[i] - d2_[i] * h;
    const double C = d2_[i + 1] - d2_[i];
    const double a3 = (10.0 * A - 4.0 * B * h + 0.5 * C * h * h) / (h * h * h);
    const double a4 =
        (-15.0 * A + 7.0 * B * h - C * h * h) / (h * h * h * h);
    const double a5 =
        (6.0 * A - 3.0 * B * h + 0.5 * C * h * h) / (h * h * h * h * h);
    if (order == 0) {
      return v_[i] + s * (d1_[i] + s * (0.5 * d2_[i] + s * (a3 + s * (a4 + s * a5))));
    }
    if (order == 1) {
      return d1_[i] + s * (d2_[i] + s * (3.0 * a3 + s * (4.0 * a4 + s * 5.0 * a5)));
    }
    return d2_[i] + s * (6.0 * a3 + s * (12.0 * a4 + s * 20.0 * a5));
  }

  void locate(double t, std::size_t& i, double& s) const {
    const double u = (t - t0_) / dt_;
    if (u < -1e-9 || u > static_cast<double>(v_.size() - 1) + 1e-9) {
      throw std::out_of_range("QuinticSeries: t outside sampled range");
    }
    double fi = std::floor(u);
    fi = std::min(std::max(fi, 0.0), static_cast<double>(v_.size() - 2));
    i = static_cast<std::size_t>(fi);
    s = (u - fi) * dt_;
  }

  double t0_ = 0.0;
  double dt_ = 1.0;
  std::vector<double> v_, d1_, d2_;
};

}  // namespace lclock
