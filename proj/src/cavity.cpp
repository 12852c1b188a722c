#include "lclock/cavity.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lclock/compensated.hpp"

namespace lclock {

namespace {

constexpr double kPi = std::numbers::pi;

// 10-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGlNode[5] = {0.14887433898163122, 0.4333953941292472,
                               0.6794095682990244, 0.8650633666889845,
                               0.9739065285171717};
constexpr double kGlWeight[5] = {0.29552422471475287, 0.26926671930999635,
                                 0.21908636251598204, 0.1494513491505806,
                                 0.06667134430868814};

template <class F>
Complex gl_integrate(const F& f, double a, double b, int panels) {
  CompensatedComplexSum sum;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int q = 0; q < 5; ++q) {
      const double dx = 0.5 * h * kGlNode[q];
      sum += (f(mid + dx) + f(mid - dx)) * (0.5 * h * kGlWeight[q]);
    }
  }
  return sum.value();
}

}  // namespace

ModeBasis::ModeBasis(double x1, double x2, int n_max, double light_speed)
    : x1_(x1), x2_(x2), n_max_(n_max), c_(light_speed) {
  if (!(x2 > x1) || n_max < 1 || light_speed <= 0.0) {
    throw std::invalid_argument("invalid mode basis");
  }
}

double ModeBasis::omega(int m) const { return c_ * m * kPi / length(); }

FieldFunction ModeBasis::mode(int m) const {
  const double L = length();
  const double k = m * kPi / L;
  const double norm = 1.0 / std::sqrt(m * kPi * c_);
  const double w = omega(m);
  const double x1 = x1_;
  FieldFunction f;
  f.value = [=](double x) { return Complex(norm * std::sin(k * (x - x1))); };
  f.dt = [=](double x) {
    return Complex(0.0, -w) * (norm * std::sin(k * (x - x1)));
  };
  return f;
}

FieldFunction ModeBasis::conjugate_mode(int m) const {
  FieldFunction f = mode(m);
  FieldFunction g;
  g.value = [f](double x) { return std::conj(f.value(x)); };
  g.dt = [f](double x) { return std::conj(f.dt(x)); };
  return g;
}

FieldFunction ModeBasis::boundary_derivative(int m, int j) const {
  const double L = length();
  const double k = m * kPi / L;
  const double norm = 1.0 / std::sqrt(m * kPi * c_);
  const double w = omega(m);
  const double x1 = x1_;
  // dw/dx_j: the frequency rises when the bottom wall moves up and falls
  // when the top wall moves up.
  const double dw = (j == 1 ? w / L : -w / L);
  FieldFunction f;
  if (j == 2) {
    f.value = [=](double x) {
      const double xi = x - x1;
      return Complex(-norm * (k / L) * xi * std::cos(k * xi));
    };
  } else {
    f.value = [=](double x) {
      const double xi = x - x1;
      return Complex(norm * k * (xi / L - 1.0) * std::cos(k * xi));
    };
  }
  auto shape = f.value;
  f.dt = [=](double x) {
    const double xi = x - x1;
    return Complex(0.0, -w) * shape(x) +
           Complex(0.0, -dw) * (norm * std::sin(k * xi));
  };
  return f;
}

Complex kg_inner_product(const FieldFunction& u, const FieldFunction& v,
                         double x1, double x2, int panels) {
  auto integrand = [&](double x) {
    return u.value(x) * std::conj(v.dt(x)) - std::conj(v.value(x)) * u.dt(x);
  };
  return Complex(0.0, -1.0) * gl_integrate(integrand, x1, x2, panels);
}

CouplingMatrices::CouplingMatrices(double length, int n_max)
    : n_(n_max), length_(length) {
  if (length <= 0.0 || n_max < 1) {
    throw std::invalid_argument("invalid coupling matrices");
  }
}

double CouplingMatrices::a(int j, int m, int n) const {
  if (m < 1 || n < 1 || m > n_ || n > n_ || (j != 1 && j != 2)) {
    throw std::out_of_range("coupling matrix index");
  }
  if (m == n) return 0.0;
  const double base =
      std::sqrt(static_cast<double>(m) * n) / ((n - m) * length_);
  if (j == 1) return -base;
  return ((m + n) % 2 == 0 ? base : -base);  // (-1)^{m+n} * base
}

double CouplingMatrices::b(int j, int m, int n) const {
  if (m < 1 || n < 1 || m > n_ || n > n_ || (j != 1 && j != 2)) {
    throw std::out_of_range("coupling matrix index");
  }
  const double base =
      std::sqrt(static_cast<double>(m) * n) / ((m + n) * length_);
  if (j == 1) return -base;
  return ((m + n) % 2 == 0 ? base : -base);
}

CouplingMatrices coupling_matrices(const ModeBasis& basis) {
  return CouplingMatrices(basis.length(), basis.n_max());
}

PhaseProfile::PhaseProfile(const CavityTrajectory& traj, double light_speed)
    : traj_(&traj), c_(light_speed) {
  const double L0 = traj.initial_length_x();
  omega_ref_ = c_ * kPi / L0;

  // psi(t) = Int (w1 - w_ref) with w1 - w_ref = -w_ref dL / (L0 + dL),
  // accumulated by per-interval Gauss-Legendre on the dL interpolant.
  const auto& dl = traj.delta_length_series();
  const std::size_t n = dl.size();
  const double dt = dl.dt();
  std::vector<double> psi(n), dpsi(n), d2psi(n);
  auto delta_omega_at = [&](double t) {
    const double d = dl.value(t);
    return -omega_ref_ * d / (L0 + d);
  };
  CompensatedSum acc;
  psi[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = dt * static_cast<double>(i);
    if (i > 0) {
      const double a = ti - dt;
      const double mid = a + 0.5 * dt;
      double inc = 0.0;
      for (int q = 0; q < 5; ++q) {
        const double dx = 0.5 * dt * kGlNode[q];
        inc += (delta_omega_at(mid + dx) + delta_omega_at(mid - dx)) *
               (0.5 * dt * kGlWeight[q]);
      }
      acc += inc;
      psi[i] = acc.value();
    }
    const double d = dl.value(ti);
    const double L = L0 + d;
    dpsi[i] = -omega_ref_ * d / L;
    d2psi[i] = -omega_ref_ * dl.deriv(ti) * L0 / (L * L);
  }
  psi_ = QuinticSeries(0.0, dt, psi, dpsi, d2psi);
}

double PhaseProfile::delta_omega(double t) const {
  const double d = traj_->delta_length_x(t);
  const double L0 = traj_->initial_length_x();
  return -omega_ref_ * d / (L0 + d);
}

double PhaseProfile::domega1_dt(double t) const {
  const double L0 = traj_->initial_length_x();
  const double L = L0 + traj_->delta_length_x(t);
  return -omega_ref_ * traj_->delta_length_series().deriv(t) * L0 / (L * L);
}

double PhaseProfile::theta_m_reduced(int m, double t) const {
  const double lin = reduce_phase_2pi(omega_ref_, t);
  const double md = static_cast<double>(m);
  return std::remainder(md * lin + md * psi_.value(t), kTwoPiHi);
}

double mode_frequency(const CavityTrajectory& traj, int m, double t,
                      double light_speed) {
  if (m < 1) throw std::invalid_argument("mode index must be >= 1");
  return light_speed * m * kPi / traj.length_x(t);
}

double accumulated_phase(const PhaseProfile& phases, int m, double t) {
  return phases.theta_m(m, t);
}

}  // namespace lclock
