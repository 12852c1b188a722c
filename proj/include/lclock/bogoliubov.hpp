#pragma once

#include <complex>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "lclock/cavity.hpp"
#include "lclock/oscillatory.hpp"

namespace lclock {

// Dense 1-based complex matrix.
class CMat {
 public:
  CMat() = default;
  CMat(int rows, int cols)
      : r_(rows), c_(cols), d_(static_cast<std::size_t>(rows) * cols) {}

  int rows() const { return r_; }
  int cols() const { return c_; }
  Complex& at(int m, int n) {
    return d_[static_cast<std::size_t>(m - 1) * c_ + (n - 1)];
  }
  const Complex& at(int m, int n) const {
    return d_[static_cast<std::size_t>(m - 1) * c_ + (n - 1)];
  }

 private:
  int r_ = 0, c_ = 0;
  std::vector<Complex> d_;
};

struct BogoliubovParams {
  int n_max = 20;
  int p_max = 40;
  // Method for the first-order entries; the time-ordered double integrals
  // always use the grid scheme.
  OscMethod method = OscMethod::kFilon;
  // Freeze the coupling matrices at the initial length instead of scaling
  // them with 1/L(t).
  bool frozen_coupling = false;
  int workers = 1;
  bool with_second_order = true;
};

// Raw perturbative coefficients, prefactor included:
//   alpha_mn = e^{i Theta_m(T)} [delta_mn + a1 + a2],
//   beta_mn  = e^{i Theta_m(T)} [b1 + b2].
struct PerturbativeBogoliubov {
  CMat alpha1, alpha2, beta1, beta2;
  // Barred first-order entries extended to columns <= P_max, so that the
  // symplectic identity can be checked at a truncation consistent with the
  // intermediate sums inside alpha2/beta2.
  CMat alpha1_ext, beta1_ext;
  double theta_cl = 0.0;  // classical phase, Theta_m(T) = -m theta_cl
  int n_max = 0, p_max = 0;
  double err_first = 0.0, err_second = 0.0;
  const PhaseProfile* phases = nullptr;

  Complex prefactor(int m) const;  // e^{i Theta_m(T)}
};

struct BarredBogoliubov {
  CMat alpha1, alpha2, beta1, beta2;
};

struct SymplecticDefect {
  double first = 0.0;
  double second = 0.0;
};

// Shared grid machinery: panel Filon primitives of the velocity envelopes
// against e^{-i mu Theta_1}, their running integrals, and the second-order
// double-integral assembly.
class BogoliubovEngine {
 public:
  BogoliubovEngine(const CavityTrajectory& traj, const PhaseProfile& phases,
                   const CouplingMatrices& cm, BogoliubovParams params);

  PerturbativeBogoliubov compute();

  // G_{j,mu}(T) = Int_0^T s_j(t) e^{-i mu Theta_1(t)} dt with the envelope
  // s_j = (dx_j/dt) L0 / L(t) (or dx_j/dt when coupling is frozen).
  Complex g_integral(int j, int mu) const;

  // Barred entries (prefactor stripped).
  Complex barred_alpha1(int m, int n) const;
  Complex barred_beta1(int m, int n) const;

  // Running barred (1,1) entries on the grid nodes (alpha1_11 vanishes
  // identically: the diagonal A entries are zero).
  struct Running11 {
    int p_max = 0;
    std::vector<double> t;
    std::vector<Complex> beta1, alpha2, beta2;
  };
  Running11 running_entries_11(int p_max) const;

  // Entries at an arbitrary time: node value plus a partial-panel increment
  // evaluated with the same panel scheme. Resolves the sub-period phase
  // oscillation that the node series aliases.
  struct Entries11 {
    Complex beta1, alpha2, beta2;
  };
  Entries11 entries_11_at(const Running11& run, double t) const;

  const BogoliubovParams& params() const { return par_; }
  double duration() const { return T_; }

 private:
  struct Grid {
    double h = 0.0;
    std::size_t panels = 0;
    std::vector<double> lin, psi;          // per node
    std::vector<double> wbar;              // per panel
    std::vector<double> rho1, rho2;        // per panel, interior sub-samples
    std::vector<double> env[2];            // per panel, 4 sub-samples, packed
  };
  void build_grid(Grid& g, std::size_t stride) const;
  const std::vector<Complex>& panel_values(const Grid& g, int j, int mu) const;
  const std::vector<Complex>& g_nodes(const Grid& g, int j, int mu) const;
  Complex g_node_signed(const Grid& g, int j, int mu, std::size_t i) const;
  Complex panel_value_signed(const Grid& g, int j, int mu, std::size_t i) const;
  double reduced_phase(const Grid& g, int mu, std::size_t node) const;
  Complex double_integral(const Grid& g, int j, int mu, int k, int nu) const;
  Complex double_integral_nocache(const Grid& g, int j, int mu, int k,
                                  int nu) const;
  Complex first_order_entry_direct(int j, int mu, OscMethod method) const;

  const CavityTrajectory* traj_;
  const PhaseProfile* ph_;
  CouplingMatrices cm_;
  BogoliubovParams par_;
  double T_ = 0.0;
  double L0_ = 0.0;
  Grid fine_, coarse_;
  // cache slot per (grid id, j, mu)
  mutable std::unordered_map<std::uint64_t, std::vector<Complex>> pcache_;
  mutable std::unordered_map<std::uint64_t, std::vector<Complex>> gcache_;
  mutable std::unordered_map<std::uint64_t, Complex> icache_;
};

PerturbativeBogoliubov assemble_bogoliubov(const CavityTrajectory& traj,
                                           const PhaseProfile& phases,
                                           const CouplingMatrices& cm,
                                           const BogoliubovParams& params);

// Raw first-order matrices (prefactor included).
std::pair<CMat, CMat> first_order_coefficients(const CavityTrajectory& traj,
                                               const PhaseProfile& phases,
                                               const CouplingMatrices& cm,
                                               int n_max,
                                               OscMethod method = OscMethod::kFilon);

// Raw second-order matrices (prefactor included).
std::pair<CMat, CMat> second_order_coefficients(const CavityTrajectory& traj,
                                                const PhaseProfile& phases,
                                                const CouplingMatrices& cm,
                                                int n_max, int p_max,
                                                int workers = 1);

BarredBogoliubov strip_prefactor(const PerturbativeBogoliubov& coeffs);

// Order-collected identity defects. The second-order identity holds per
// intermediate mode, so with the internal k-sum truncated consistently with
// the p-sum (k_max = 0, the default) the defect measures quadrature error
// only; a smaller k_max exposes the truncation tail instead.
SymplecticDefect symplectic_defect(const PerturbativeBogoliubov& coeffs,
                                   int k_max = 0);

}  // namespace lclock
