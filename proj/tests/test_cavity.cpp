#include <cmath>
#include <random>

#include "doctest.h"
#include "lclock/cavity.hpp"
#include "lclock/compensated.hpp"
#include "lclock/constants.hpp"
#include "lclock/geodesics.hpp"

using namespace lclock;

namespace {

SchwarzschildGeometry earth() {
  return SchwarzschildGeometry::from_mass(kEarthMass, kGravitationalConstant,
                                          kSpeedOfLight);
}

// Closed-form entries checked entrywise against this quadrature oracle.
double oracle_a(const ModeBasis& basis, int j, int m, int n) {
  const auto ip = kg_inner_product(basis.boundary_derivative(m, j),
                                   basis.mode(n), basis.x1(), basis.x2());
  CHECK(std::abs(ip.imag()) < 1e-9 * std::max(1.0, std::abs(ip.real())));
  return ip.real();
}

double oracle_b(const ModeBasis& basis, int j, int m, int n) {
  const auto ip =
      kg_inner_product(basis.boundary_derivative(m, j),
                       basis.conjugate_mode(n), basis.x1(), basis.x2());
  CHECK(std::abs(ip.imag()) < 1e-9 * std::max(1.0, std::abs(ip.real())));
  return -ip.real();
}

}  // namespace

TEST_CASE("mode orthonormality under the KG inner product") {
  ModeBasis basis(0.3, 1.7, 6, 2.0);
  for (int m = 1; m <= 6; ++m) {
    for (int n = 1; n <= 6; ++n) {
      const auto ip = kg_inner_product(basis.mode(m), basis.mode(n),
                                       basis.x1(), basis.x2());
      const double expect = (m == n) ? 1.0 : 0.0;
      CHECK(std::abs(ip - Complex(expect)) < 1e-10);
      // negative-norm convention for conjugates
      const auto ipc =
          kg_inner_product(basis.conjugate_mode(m), basis.conjugate_mode(n),
                           basis.x1(), basis.x2());
      CHECK(std::abs(ipc - Complex(-expect)) < 1e-10);
      const auto cross = kg_inner_product(basis.mode(m),
                                          basis.conjugate_mode(n),
                                          basis.x1(), basis.x2());
      CHECK(std::abs(cross) < 1e-10);
    }
  }
}

TEST_CASE("coupling matrices match the quadrature oracle") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> len(0.2, 3.0);
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  for (int trial = 0; trial < 3; ++trial) {
    const double x1 = pos(rng);
    const double L = len(rng);
    ModeBasis basis(x1, x1 + L, 5, kSpeedOfLight);
    const auto cm = coupling_matrices(basis);
    for (int j : {1, 2}) {
      for (int m = 1; m <= 5; ++m) {
        for (int n = 1; n <= 5; ++n) {
          CHECK(cm.a(j, m, n) ==
                doctest::Approx(oracle_a(basis, j, m, n)).epsilon(1e-9));
          CHECK(cm.b(j, m, n) ==
                doctest::Approx(oracle_b(basis, j, m, n)).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("specific entry A^2_12 at L = 1 m") {
  ModeBasis basis(0.0, 1.0, 4, kSpeedOfLight);
  const auto cm = coupling_matrices(basis);
  // oracle value frozen from the KG quadrature: -sqrt(2) at L = 1
  CHECK(cm.a(2, 1, 2) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
  CHECK(oracle_a(basis, 2, 1, 2) ==
        doctest::Approx(-std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("coupling matrix structure") {
  ModeBasis basis(0.0, 0.37, 8, kSpeedOfLight);
  const auto cm = coupling_matrices(basis);
  const auto cm2 = CouplingMatrices(2.0 * 0.37, 8);
  for (int j : {1, 2}) {
    for (int m = 1; m <= 8; ++m) {
      for (int n = 1; n <= 8; ++n) {
        // first-order unitarity: A + A^T = 0 (entries real)
        CHECK(cm.a(j, m, n) + cm.a(j, n, m) ==
              doctest::Approx(0.0).epsilon(1e-10));
        // 1/L scaling
        if (cm.a(j, m, n) != 0.0) {
          CHECK(cm2.a(j, m, n) * 2.0 ==
                doctest::Approx(cm.a(j, m, n)).epsilon(1e-12));
        }
        CHECK(cm2.b(j, m, n) * 2.0 ==
              doctest::Approx(cm.b(j, m, n)).epsilon(1e-12));
        CHECK(std::isfinite(cm.a(j, m, n)));
        CHECK(std::isfinite(cm.b(j, m, n)));
      }
    }
  }
  // depends on L only: same length elsewhere gives identical oracles
  ModeBasis moved(5.1, 5.1 + 0.37, 3, kSpeedOfLight);
  for (int m = 1; m <= 3; ++m) {
    for (int n = 1; n <= 3; ++n) {
      CHECK(oracle_a(moved, 1, m, n) ==
            doctest::Approx(oracle_a(basis, 1, m, n)).epsilon(1e-9));
    }
  }
}

TEST_CASE("mode frequency") {
  SchwarzschildGeometry flat(0.0, kSpeedOfLight);
  const auto traj = CavityTrajectory::falling_pair(flat, 100.0, 1.0, 2.0, 201);
  const double w1 = mode_frequency(traj, 1, 0.7, kSpeedOfLight);
  CHECK(w1 == doctest::Approx(9.4248e8).epsilon(1e-3));
  CHECK(mode_frequency(traj, 7, 0.7, kSpeedOfLight) ==
        doctest::Approx(7.0 * w1).epsilon(1e-15));
  // static cavity: constant in t
  CHECK(mode_frequency(traj, 3, 0.0, kSpeedOfLight) ==
        mode_frequency(traj, 3, 1.9, kSpeedOfLight));
}

TEST_CASE("phase accumulation, static cavity") {
  SchwarzschildGeometry flat(0.0, kSpeedOfLight);
  const auto traj = CavityTrajectory::falling_pair(flat, 100.0, 1.0, 2.0, 201);
  PhaseProfile ph(traj, kSpeedOfLight);
  const double w = ph.omega_ref();
  CHECK(ph.theta1(0.0) == 0.0);
  CHECK(ph.theta1(1.3) == doctest::Approx(w * 1.3).epsilon(1e-14));
  CHECK(ph.theta_m(5, 1.3) == doctest::Approx(5.0 * w * 1.3).epsilon(1e-14));
  CHECK(ph.psi(1.7) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("phase reduction accuracy at large phase") {
  // against long-double reference
  const double w = 9.41825e8;
  for (double t : {0.123456789, 2.5, 4.7334999}) {
    const long double ref = static_cast<long double>(w) *
                            static_cast<long double>(t);
    const long double twopi = 6.283185307179586476925286766559L;
    long double red = std::fmod(ref, twopi);
    const double mine = reduce_phase_2pi(w, t);
    long double diff = std::fabs(red - static_cast<long double>(mine));
    diff = std::min(diff, std::fabs(twopi - diff));
    CHECK(static_cast<double>(diff) < 1e-8);
  }
}

TEST_CASE("phase linearity and superadditivity on the Earth drop") {
  const auto e = earth();
  const double r_A = kEarthRadius + 110.0;
  const double T = fall_coordinate_time(e, r_A, kEarthRadius);
  const auto traj = CavityTrajectory::falling_pair(e, r_A, 1.0, T, 4001);
  PhaseProfile ph(traj, kSpeedOfLight);

  // Theta_m = m Theta_1 by construction
  CHECK(ph.theta_m(7, 3.1) == doctest::Approx(7.0 * ph.theta1(3.1)).epsilon(1e-14));

  // Theta_1(T) ~ 4.46e9 rad (w1 T with rounded constants)
  CHECK(ph.theta1(T) == doctest::Approx(4.46e9).epsilon(2e-3));

  // strictly increasing, superadditive via psi
  double prev = -1.0;
  for (double t = 0.0; t <= T; t += 0.3) {
    const double th = ph.theta1(t);
    CHECK(th > prev);
    prev = th;
  }
  // Int_{t1}^{t2} w1 recomputed by fine Simpson equals psi(t2)-psi(t1)
  const double t1 = 1.0, t2 = 3.5;
  const int nq = 20001;
  const double h = (t2 - t1) / (nq - 1);
  CompensatedSum s;
  for (int i = 0; i < nq; ++i) {
    const double w = (i == 0 || i == nq - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * ph.delta_omega(t1 + i * h);
  }
  const double integral = s.value() * h / 3.0;
  CHECK(ph.psi(t2) - ph.psi(t1) ==
        doctest::Approx(integral).epsilon(1e-10));

  // tidal stretching lowers the frequency: psi < 0 and |theta_B^Cl| < |theta_A|
  CHECK(ph.psi(T) < 0.0);
  CHECK(ph.psi(T) == doctest::Approx(-5.14e4).epsilon(0.01));
}
