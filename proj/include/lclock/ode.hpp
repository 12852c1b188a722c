#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace lclock {

struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Adaptive Dormand-Prince 5(4) integrator for small dense systems. The
// right-hand sides in this project are cheap, so steps are simply clipped to
// requested output times instead of maintaining a continuous extension.
class Dopri5 {
 public:
  using Rhs = std::function<void(double t, const std::vector<double>& y,
                                 std::vector<double>& dydt)>;

  Dopri5(Rhs rhs, double rtol, double atol)
      : rhs_(std::move(rhs)), rtol_(rtol), atol_(atol) {}

  // Advances (t, y) in place to exactly t_end.
  void integrate_to(double& t, std::vector<double>& y, double t_end) {
    if (t_end == t) return;
    const double dir = t_end > t ? 1.0 : -1.0;
    double h = h_init_ > 0.0 ? dir * h_init_ : dir * 1e-3 * std::abs(t_end - t);
    std::size_t n_reject = 0;
    std::vector<double> y_new(y.size()), err(y.size());
    while (dir * (t_end - t) > 0.0) {
      const double remaining = std::abs(t_end - t);
      const bool last = std::abs(h) >= remaining;
      h = dir * std::min(std::abs(h), remaining);
      const double err_norm = step(t, y, h, y_new, err);
      if (err_norm <= 1.0) {
        t = last ? t_end : t + h;
        y = y_new;
        n_reject = 0;
      } else if (++n_reject > 50) {
        throw IntegrationError("step size control failed to converge");
      }
      const double factor =
          std::clamp(0.9 * std::pow(std::max(err_norm, 1e-16), -0.2), 0.2, 5.0);
      h *= factor;
      h_init_ = std::abs(h);
      if (std::abs(h) < 1e-16 * std::max(1.0, std::abs(t))) {
        throw IntegrationError("step size underflow");
      }
    }
  }

 private:
  // One trial step of size h; fills y_new and returns the scaled error norm.
  double step(double t, const std::vector<double>& y, double h,
              std::vector<double>& y_new, std::vector<double>& err) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    const std::size_t n = y.size();
    auto& k1 = k_[0];
    auto& k2 = k_[1];
    auto& k3 = k_[2];
    auto& k4 = k_[3];
    auto& k5 = k_[4];
    auto& k6 = k_[5];
    auto& k7 = k_[6];
    for (auto& k : k_) k.resize(n);
    std::vector<double> tmp(n);

    rhs_(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    rhs_(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs_(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs_(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] =
          y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs_(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                           a64 * k4[i] + a65 * k5[i]);
    rhs_(t + h, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                             b5 * k5[i] + b6 * k6[i]);
    rhs_(t + h, y_new, k7);

    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                    e6 * k6[i] + e7 * k7[i]);
      const double scale =
          atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(y_new[i]));
      norm2 += (err[i] / scale) * (err[i] / scale);
    }
    return std::sqrt(norm2 / static_cast<double>(n));
  }

  Rhs rhs_;
  double rtol_;
  double atol_;
  double h_init_ = 0.0;
  std::vector<double> k_[7];
};

}  // namespace lclock
