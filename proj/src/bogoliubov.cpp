#include "lclock/bogoliubov.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <set>
#include <thread>

#include "lclock/compensated.hpp"

namespace lclock {

namespace {

std::uint64_t pg_key(int grid_id, int j, int mu) {
  return (static_cast<std::uint64_t>(grid_id) << 40) |
         (static_cast<std::uint64_t>(j) << 32) |
         static_cast<std::uint64_t>(mu);
}

std::uint64_t i_key(int grid_id, int j, int k, int mu, int nu) {
  const std::uint64_t a = static_cast<std::uint64_t>(mu + 512);
  const std::uint64_t b = static_cast<std::uint64_t>(nu + 512);
  return (((static_cast<std::uint64_t>(grid_id * 4 + (j - 1) * 2 + (k - 1))
            << 10) |
           a)
          << 10) |
         b;
}

}  // namespace

Complex PerturbativeBogoliubov::prefactor(int m) const {
  const double T = phases->duration();
  return std::polar(1.0, phases->theta_m_reduced(m, T));
}

BogoliubovEngine::BogoliubovEngine(const CavityTrajectory& traj,
                                   const PhaseProfile& phases,
                                   const CouplingMatrices& cm,
                                   BogoliubovParams params)
    : traj_(&traj),
      ph_(&phases),
      cm_(cm.length(),
          std::max(cm.n_max(), std::max(params.n_max, params.p_max))),
      par_(params),
      T_(traj.duration()),
      L0_(traj.initial_length_x()) {
  build_grid(fine_, 1);
  const std::size_t panels = traj_->sample_count() - 1;
  build_grid(coarse_, panels % 2 == 0 ? 2 : 1);
}

void BogoliubovEngine::build_grid(Grid& g, std::size_t stride) const {
  const std::size_t n_traj = traj_->sample_count();
  const std::size_t panels = (n_traj - 1) / stride;
  const double h = traj_->grid_dt() * static_cast<double>(stride);
  g.h = h;
  g.panels = panels;
  g.lin.resize(panels + 1);
  g.psi.resize(panels + 1);
  g.wbar.resize(panels);
  g.rho1.resize(panels);
  g.rho2.resize(panels);
  g.env[0].resize(4 * panels);
  g.env[1].resize(4 * panels);
  const double wr = ph_->omega_ref();
  for (std::size_t i = 0; i <= panels; ++i) {
    const double t = h * static_cast<double>(i);
    g.lin[i] = reduce_phase_2pi(wr, t);
    g.psi[i] = ph_->psi(std::min(t, T_));
  }
  auto envelope = [&](int j, double t) {
    const double v = traj_->velocity(j, t);
    if (par_.frozen_coupling) return v;
    return v * L0_ / traj_->length_x(t);
  };
  for (std::size_t p = 0; p < panels; ++p) {
    const double t0 = h * static_cast<double>(p);
    g.wbar[p] = wr + (g.psi[p + 1] - g.psi[p]) / h;
    const double drift = g.wbar[p] - wr;
    for (int q = 0; q < 4; ++q) {
      const double s = h * q / 3.0;
      const double t = std::min(t0 + s, T_);
      if (q == 1) g.rho1[p] = (ph_->psi(t) - g.psi[p]) - drift * s;
      if (q == 2) g.rho2[p] = (ph_->psi(t) - g.psi[p]) - drift * s;
      g.env[0][4 * p + q] = envelope(1, t);
      g.env[1][4 * p + q] = envelope(2, t);
    }
  }
}

double BogoliubovEngine::reduced_phase(const Grid& g, int mu,
                                       std::size_t node) const {
  const double md = static_cast<double>(mu);
  return std::remainder(md * g.lin[node] + md * g.psi[node], kTwoPiHi);
}

const std::vector<Complex>& BogoliubovEngine::panel_values(const Grid& g,
                                                           int j,
                                                           int mu) const {
  const int grid_id = (&g == &fine_) ? 0 : 1;
  const auto key = pg_key(grid_id, j, mu);
  auto it = pcache_.find(key);
  if (it != pcache_.end()) return it->second;
  std::vector<Complex> vals(g.panels);
  const double* env = g.env[j - 1].data();
  const double md = static_cast<double>(mu);
  Complex u[4];
  for (std::size_t p = 0; p < g.panels; ++p) {
    u[0] = Complex(env[4 * p]);
    u[1] = env[4 * p + 1] * std::polar(1.0, -md * g.rho1[p]);
    u[2] = env[4 * p + 2] * std::polar(1.0, -md * g.rho2[p]);
    u[3] = Complex(env[4 * p + 3]);
    vals[p] = std::polar(1.0, -reduced_phase(g, mu, p)) *
              osc::panel_integral(u, g.h, md * g.wbar[p]);
  }
  return pcache_.emplace(key, std::move(vals)).first->second;
}

const std::vector<Complex>& BogoliubovEngine::g_nodes(const Grid& g, int j,
                                                      int mu) const {
  const int grid_id = (&g == &fine_) ? 0 : 1;
  const auto key = pg_key(grid_id, j, mu);
  auto it = gcache_.find(key);
  if (it != gcache_.end()) return it->second;
  const auto& pv = panel_values(g, j, mu);
  std::vector<Complex> nodes(g.panels + 1);
  CompensatedComplexSum acc;
  nodes[0] = Complex(0.0);
  for (std::size_t p = 0; p < g.panels; ++p) {
    acc += pv[p];
    nodes[p + 1] = acc.value();
  }
  return gcache_.emplace(key, std::move(nodes)).first->second;
}

Complex BogoliubovEngine::g_node_signed(const Grid& g, int j, int mu,
                                        std::size_t i) const {
  if (mu >= 0) return g_nodes(g, j, mu)[i];
  return std::conj(g_nodes(g, j, -mu)[i]);
}

Complex BogoliubovEngine::panel_value_signed(const Grid& g, int j, int mu,
                                             std::size_t i) const {
  if (mu >= 0) return panel_values(g, j, mu)[i];
  return std::conj(panel_values(g, j, -mu)[i]);
}

Complex BogoliubovEngine::g_integral(int j, int mu) const {
  return g_node_signed(fine_, j, mu, fine_.panels);
}

Complex BogoliubovEngine::barred_alpha1(int m, int n) const {
  if (m == n) return Complex(0.0);
  Complex s(0.0);
  for (int j = 1; j <= 2; ++j) {
    s += cm_.a(j, m, n) * g_integral(j, m - n);
  }
  return s;
}

Complex BogoliubovEngine::barred_beta1(int m, int n) const {
  Complex s(0.0);
  for (int j = 1; j <= 2; ++j) {
    s += cm_.b(j, m, n) * g_integral(j, m + n);
  }
  return s;
}

Complex BogoliubovEngine::double_integral(const Grid& g, int j, int mu, int k,
                                          int nu) const {
  const int grid_id = (&g == &fine_) ? 0 : 1;
  const auto key = i_key(grid_id, j, k, mu, nu);
  auto it = icache_.find(key);
  if (it != icache_.end()) return it->second;
  const Complex val = double_integral_nocache(g, j, mu, k, nu);
  icache_.emplace(key, val);
  return val;
}

Complex BogoliubovEngine::double_integral_nocache(const Grid& g, int j, int mu,
                                                  int k, int nu) const {
  const double* envj = g.env[j - 1].data();
  const double* envk = g.env[k - 1].data();
  const double mud = static_cast<double>(mu);
  const double nud = static_cast<double>(nu);
  CompensatedComplexSum acc;
  Complex tri[2][2];
  for (std::size_t p = 0; p < g.panels; ++p) {
    // separable part: inner antiderivative frozen at the panel start
    acc += g_node_signed(g, k, nu, p) * panel_value_signed(g, j, mu, p);
    // within-panel (time-ordered) part, linearized phase and envelope
    const double w = g.wbar[p];
    osc::triangle_moments(mud * w, -nud * w, g.h, tri);
    const Complex pref = std::polar(1.0, -reduced_phase(g, mu + nu, p));
    const double aj0 = envj[4 * p];
    const double aj1 = (envj[4 * p + 3] - envj[4 * p]) / g.h;
    const double ak0 = envk[4 * p];
    const double ak1 = (envk[4 * p + 3] - envk[4 * p]) / g.h;
    acc += pref * (aj0 * (ak0 * tri[0][0] + ak1 * tri[0][1]) +
                   aj1 * (ak0 * tri[1][0] + ak1 * tri[1][1]));
  }
  return acc.value();
}

Complex BogoliubovEngine::first_order_entry_direct(int j, int mu,
                                                   OscMethod method) const {
  OscillatoryIntegralSpec spec;
  const CavityTrajectory* traj = traj_;
  const double L0 = L0_;
  const bool frozen = par_.frozen_coupling;
  spec.envelope = [traj, L0, frozen, j](double t) {
    const double v = traj->velocity(j, t);
    return Complex(frozen ? v : v * L0 / traj->length_x(t));
  };
  spec.envelope_d1 = [traj, L0, frozen, j](double t) {
    const double a = traj->accel(j, t);
    if (frozen) return Complex(a);
    const double L = traj->length_x(t);
    const double lp = traj->delta_length_series().deriv(t);
    return Complex(a * L0 / L - traj->velocity(j, t) * L0 * lp / (L * L));
  };
  spec.phase = PhaseFunction::scaled_profile(*ph_, static_cast<double>(mu));
  spec.t_a = 0.0;
  spec.t_b = T_;
  spec.method = method;
  spec.rel_tol = 1e-12;
  return oscillatory_integral(spec).value;
}

BogoliubovEngine::Running11 BogoliubovEngine::running_entries_11(
    int p_max) const {
  const Grid& g = fine_;
  Running11 out;
  out.p_max = p_max;
  const std::size_t nn = g.panels + 1;
  out.t.resize(nn);
  out.beta1.resize(nn);
  out.alpha2.resize(nn);
  out.beta2.resize(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    out.t[i] = g.h * static_cast<double>(i);
  }
  // first order
  for (std::size_t i = 0; i < nn; ++i) {
    Complex b(0.0);
    for (int j = 1; j <= 2; ++j) {
      b += cm_.b(j, 1, 1) * g_nodes(g, j, 2)[i];
    }
    out.beta1[i] = b;
  }
  // second order: running double integrals per (p, j, k, term)
  struct Pair {
    double coef;
    int j, k, mu, nu;
    bool to_alpha;
    CompensatedComplexSum run;
  };
  std::vector<Pair> pairs;
  for (int p = 1; p <= p_max; ++p) {
    for (int j = 1; j <= 2; ++j) {
      for (int k = 1; k <= 2; ++k) {
        const double ajp = cm_.a(j, 1, p), akp = cm_.a(k, p, 1);
        const double bjp = cm_.b(j, 1, p), bkp = cm_.b(k, p, 1);
        if (ajp * akp != 0.0) {
          pairs.push_back({ajp * akp, j, k, 1 - p, p - 1, true, {}});
        }
        if (bjp * bkp != 0.0) {
          pairs.push_back({bjp * bkp, j, k, 1 + p, -(1 + p), true, {}});
        }
        if (ajp * bkp != 0.0) {
          pairs.push_back({ajp * bkp, j, k, 1 - p, 1 + p, false, {}});
        }
        if (bjp * akp != 0.0) {
          pairs.push_back({bjp * akp, j, k, 1 + p, 1 - p, false, {}});
        }
      }
    }
  }
  // make sure the shared panel arrays exist before the tight loop
  for (const auto& pr : pairs) {
    panel_values(g, pr.j, std::abs(pr.mu));
    g_nodes(g, pr.k, std::abs(pr.nu));
  }
  out.alpha2[0] = Complex(0.0);
  out.beta2[0] = Complex(0.0);
  Complex tri[2][2];
  for (std::size_t p = 0; p < g.panels; ++p) {
    const double w = g.wbar[p];
    CompensatedComplexSum a2, b2;
    for (auto& pr : pairs) {
      const double* envj = g.env[pr.j - 1].data();
      const double* envk = g.env[pr.k - 1].data();
      pr.run += g_node_signed(g, pr.k, pr.nu, p) *
                panel_value_signed(g, pr.j, pr.mu, p);
      osc::triangle_moments(pr.mu * w, -pr.nu * w, g.h, tri);
      const Complex pref =
          std::polar(1.0, -reduced_phase(g, pr.mu + pr.nu, p));
      const double aj0 = envj[4 * p];
      const double aj1 = (envj[4 * p + 3] - envj[4 * p]) / g.h;
      const double ak0 = envk[4 * p];
      const double ak1 = (envk[4 * p + 3] - envk[4 * p]) / g.h;
      pr.run += pref * (aj0 * (ak0 * tri[0][0] + ak1 * tri[0][1]) +
                        aj1 * (ak0 * tri[1][0] + ak1 * tri[1][1]));
    }
    for (auto& pr : pairs) {
      if (pr.to_alpha) {
        a2 += pr.coef * pr.run.value();
      } else {
        b2 += pr.coef * pr.run.value();
      }
    }
    out.alpha2[p + 1] = a2.value();
    out.beta2[p + 1] = b2.value();
  }
  return out;
}

BogoliubovEngine::Entries11 BogoliubovEngine::entries_11_at(
    const Running11& run, double t) const {
  const Grid& g = fine_;
  const double tc = std::clamp(t, 0.0, T_);
  std::size_t i = static_cast<std::size_t>(std::floor(tc / g.h));
  if (i > g.panels) i = g.panels;
  double s = tc - g.h * static_cast<double>(i);
  if (i == g.panels) s = 0.0;
  Entries11 out{run.beta1[i], run.alpha2[i], run.beta2[i]};
  if (s <= 0.0) return out;

  // per-call memo for the partial first-order primitives and the partial
  // triangle moments (many pairs share them)
  std::unordered_map<int, Complex> pg;
  auto partial_g = [&](int j, int mu) -> Complex {
    const int key = j * 8192 + (mu + 2048);
    auto it = pg.find(key);
    if (it != pg.end()) return it->second;
    const double md = static_cast<double>(mu);
    const double* env = g.env[j - 1].data();
    Complex u[4] = {Complex(env[4 * i]),
                    env[4 * i + 1] * std::polar(1.0, -md * g.rho1[i]),
                    env[4 * i + 2] * std::polar(1.0, -md * g.rho2[i]),
                    Complex(env[4 * i + 3])};
    Complex c[4];
    osc::cubic_from_samples(u, g.h, c);
    Complex mm[4];
    osc::moments(md * g.wbar[i], s, 3, mm);
    const Complex val = std::polar(1.0, -reduced_phase(g, mu, i)) *
                        (c[0] * mm[0] + c[1] * mm[1] + c[2] * mm[2] +
                         c[3] * mm[3]);
    pg.emplace(key, val);
    return val;
  };
  struct Tri {
    Complex t[2][2];
  };
  std::unordered_map<int, Tri> trimemo;
  auto partial_pair = [&](int j, int mu, int k, int nu) -> Complex {
    Complex inc = g_node_signed(g, k, nu, i) * partial_g(j, mu);
    const int key = (mu + 2048) * 4096 + (nu + 2048);
    auto it = trimemo.find(key);
    if (it == trimemo.end()) {
      Tri tr;
      osc::triangle_moments(mu * g.wbar[i], -nu * g.wbar[i], s, tr.t);
      it = trimemo.emplace(key, tr).first;
    }
    const auto& tri = it->second.t;
    const double* envj = g.env[j - 1].data();
    const double* envk = g.env[k - 1].data();
    const double aj0 = envj[4 * i];
    const double aj1 = (envj[4 * i + 3] - envj[4 * i]) / g.h;
    const double ak0 = envk[4 * i];
    const double ak1 = (envk[4 * i + 3] - envk[4 * i]) / g.h;
    inc += std::polar(1.0, -reduced_phase(g, mu + nu, i)) *
           (aj0 * (ak0 * tri[0][0] + ak1 * tri[0][1]) +
            aj1 * (ak0 * tri[1][0] + ak1 * tri[1][1]));
    return inc;
  };

  for (int j = 1; j <= 2; ++j) {
    out.beta1 += cm_.b(j, 1, 1) * partial_g(j, 2);
  }
  for (int p = 1; p <= run.p_max; ++p) {
    for (int j = 1; j <= 2; ++j) {
      for (int k = 1; k <= 2; ++k) {
        const double ajp = cm_.a(j, 1, p), akp = cm_.a(k, p, 1);
        const double bjp = cm_.b(j, 1, p), bkp = cm_.b(k, p, 1);
        if (ajp * akp != 0.0) {
          out.alpha2 += ajp * akp * partial_pair(j, 1 - p, k, p - 1);
        }
        if (bjp * bkp != 0.0) {
          out.alpha2 += bjp * bkp * partial_pair(j, 1 + p, k, -(1 + p));
        }
        if (ajp * bkp != 0.0) {
          out.beta2 += ajp * bkp * partial_pair(j, 1 - p, k, 1 + p);
        }
        if (bjp * akp != 0.0) {
          out.beta2 += bjp * akp * partial_pair(j, 1 + p, k, 1 - p);
        }
      }
    }
  }
  return out;
}

PerturbativeBogoliubov BogoliubovEngine::compute() {
  const int N = par_.n_max;
  const int P = par_.p_max;
  PerturbativeBogoliubov out;
  out.n_max = N;
  out.p_max = P;
  out.phases = ph_;
  out.theta_cl = -ph_->theta1(T_);
  out.alpha1 = CMat(N, N);
  out.beta1 = CMat(N, N);
  out.alpha2 = CMat(N, N);
  out.beta2 = CMat(N, N);

  std::vector<Complex> pref(N + 1);
  for (int m = 1; m <= N; ++m) {
    pref[m] = std::polar(1.0, ph_->theta_m_reduced(m, T_));
  }

  // first order
  double err1 = 0.0;
  for (int m = 1; m <= N; ++m) {
    for (int n = 1; n <= N; ++n) {
      Complex a1, b1;
      if (par_.method == OscMethod::kFilon) {
        a1 = barred_alpha1(m, n);
        b1 = barred_beta1(m, n);
        double e = 0.0;
        for (int j = 1; j <= 2; ++j) {
          if (m != n) {
            e += std::abs(cm_.a(j, m, n)) *
                 std::abs(g_node_signed(fine_, j, m - n, fine_.panels) -
                          g_node_signed(coarse_, j, m - n, coarse_.panels));
          }
          e += std::abs(cm_.b(j, m, n)) *
               std::abs(g_node_signed(fine_, j, m + n, fine_.panels) -
                        g_node_signed(coarse_, j, m + n, coarse_.panels));
        }
        err1 = std::max(err1, e);
      } else {
        for (int j = 1; j <= 2; ++j) {
          if (m != n) {
            a1 += cm_.a(j, m, n) *
                  first_order_entry_direct(j, m - n, par_.method);
          }
          b1 += cm_.b(j, m, n) *
                first_order_entry_direct(j, m + n, par_.method);
        }
      }
      out.alpha1.at(m, n) = pref[m] * a1;
      out.beta1.at(m, n) = pref[m] * b1;
    }
  }
  out.err_first = err1;

  if (par_.method == OscMethod::kFilon) {
    out.alpha1_ext = CMat(N, P);
    out.beta1_ext = CMat(N, P);
    for (int m = 1; m <= N; ++m) {
      for (int k = 1; k <= P; ++k) {
        out.alpha1_ext.at(m, k) = barred_alpha1(m, k);
        out.beta1_ext.at(m, k) = barred_beta1(m, k);
      }
    }
  }

  if (!par_.with_second_order) return out;

  // second order: collect the needed double integrals, then evaluate them in
  // parallel (the panel arrays are built up front; the workers only read).
  struct Need {
    int j, k, mu, nu;
  };
  std::set<std::array<int, 4>> need_set;
  auto require = [&](int j, int mu, int k, int nu) {
    need_set.insert({j, k, mu, nu});
    panel_values(fine_, j, std::abs(mu));
    g_nodes(fine_, k, std::abs(nu));
  };
  for (int m = 1; m <= N; ++m) {
    for (int n = 1; n <= N; ++n) {
      for (int p = 1; p <= P; ++p) {
        for (int j = 1; j <= 2; ++j) {
          for (int k = 1; k <= 2; ++k) {
            if (cm_.a(j, m, p) * cm_.a(k, p, n) != 0.0) {
              require(j, m - p, k, p - n);
            }
            require(j, m + p, k, -(n + p));
            if (cm_.a(j, m, p) != 0.0) require(j, m - p, k, n + p);
            if (cm_.a(k, p, n) != 0.0) require(j, m + p, k, n - p);
          }
        }
      }
    }
  }
  std::vector<Need> needs;
  needs.reserve(need_set.size());
  for (const auto& q : need_set) needs.push_back({q[0], q[1], q[2], q[3]});

  const int workers = std::max(1, par_.workers);
  if (workers > 1) {
    std::vector<Complex> results(needs.size());
    std::vector<std::thread> pool;
    std::atomic<std::size_t> cursor{0};
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t idx = cursor.fetch_add(1);
          if (idx >= needs.size()) break;
          const auto& q = needs[idx];
          results[idx] = double_integral_nocache(fine_, q.j, q.mu, q.k, q.nu);
        }
      });
    }
    for (auto& th : pool) th.join();
    for (std::size_t idx = 0; idx < needs.size(); ++idx) {
      const auto& q = needs[idx];
      icache_.emplace(i_key(0, q.j, q.k, q.mu, q.nu), results[idx]);
    }
  }

  for (int m = 1; m <= N; ++m) {
    for (int n = 1; n <= N; ++n) {
      CompensatedComplexSum a2, b2;
      for (int p = 1; p <= P; ++p) {
        for (int j = 1; j <= 2; ++j) {
          for (int k = 1; k <= 2; ++k) {
            const double ajp = cm_.a(j, m, p), akp = cm_.a(k, p, n);
            const double bjp = cm_.b(j, m, p), bkp = cm_.b(k, p, n);
            if (ajp * akp != 0.0) {
              a2 += ajp * akp * double_integral(fine_, j, m - p, k, p - n);
            }
            a2 += bjp * bkp * double_integral(fine_, j, m + p, k, -(n + p));
            if (ajp * bkp != 0.0) {
              b2 += ajp * bkp * double_integral(fine_, j, m - p, k, n + p);
            }
            if (bjp * akp != 0.0) {
              b2 += bjp * akp * double_integral(fine_, j, m + p, k, n - p);
            }
          }
        }
      }
      out.alpha2.at(m, n) = pref[m] * a2.value();
      out.beta2.at(m, n) = pref[m] * b2.value();
    }
  }

  // error estimate anchored on the (1,1) entries: truncation (P halving)
  // plus grid sensitivity (coarse-grid evaluation)
  const auto run_full = running_entries_11(P);
  const auto run_half = running_entries_11(std::max(1, P / 2));
  const double trunc = std::abs(run_full.alpha2.back() -
                                run_half.alpha2.back()) +
                       std::abs(run_full.beta2.back() -
                                run_half.beta2.back());
  Complex a2c(0.0), b2c(0.0);
  for (int p = 1; p <= P; ++p) {
    for (int j = 1; j <= 2; ++j) {
      for (int k = 1; k <= 2; ++k) {
        const double ajp = cm_.a(j, 1, p), akp = cm_.a(k, p, 1);
        const double bjp = cm_.b(j, 1, p), bkp = cm_.b(k, p, 1);
        if (ajp * akp != 0.0) {
          a2c += ajp * akp * double_integral(coarse_, j, 1 - p, k, p - 1);
        }
        a2c += bjp * bkp * double_integral(coarse_, j, 1 + p, k, -(1 + p));
        if (ajp * bkp != 0.0) {
          b2c += ajp * bkp * double_integral(coarse_, j, 1 - p, k, 1 + p);
        }
        if (bjp * akp != 0.0) {
          b2c += bjp * akp * double_integral(coarse_, j, 1 + p, k, 1 - p);
        }
      }
    }
  }
  const double grid_err = std::abs(run_full.alpha2.back() - a2c) +
                          std::abs(run_full.beta2.back() - b2c);
  out.err_second = 2.0 * trunc + grid_err;
  return out;
}

PerturbativeBogoliubov assemble_bogoliubov(const CavityTrajectory& traj,
                                           const PhaseProfile& phases,
                                           const CouplingMatrices& cm,
                                           const BogoliubovParams& params) {
  BogoliubovEngine engine(traj, phases, cm, params);
  return engine.compute();
}

std::pair<CMat, CMat> first_order_coefficients(const CavityTrajectory& traj,
                                               const PhaseProfile& phases,
                                               const CouplingMatrices& cm,
                                               int n_max, OscMethod method) {
  BogoliubovParams p;
  p.n_max = n_max;
  p.p_max = n_max;
  p.method = method;
  p.with_second_order = false;
  BogoliubovEngine engine(traj, phases, cm, p);
  auto full = engine.compute();
  return {std::move(full.alpha1), std::move(full.beta1)};
}

std::pair<CMat, CMat> second_order_coefficients(const CavityTrajectory& traj,
                                                const PhaseProfile& phases,
                                                const CouplingMatrices& cm,
                                                int n_max, int p_max,
                                                int workers) {
  BogoliubovParams p;
  p.n_max = n_max;
  p.p_max = p_max;
  p.workers = workers;
  BogoliubovEngine engine(traj, phases, cm, p);
  auto full = engine.compute();
  return {std::move(full.alpha2), std::move(full.beta2)};
}

BarredBogoliubov strip_prefactor(const PerturbativeBogoliubov& coeffs) {
  const int N = coeffs.n_max;
  BarredBogoliubov out;
  out.alpha1 = CMat(N, N);
  out.alpha2 = CMat(N, N);
  out.beta1 = CMat(N, N);
  out.beta2 = CMat(N, N);
  for (int m = 1; m <= N; ++m) {
    const Complex inv = std::conj(coeffs.prefactor(m));
    for (int n = 1; n <= N; ++n) {
      out.alpha1.at(m, n) = inv * coeffs.alpha1.at(m, n);
      out.alpha2.at(m, n) = inv * coeffs.alpha2.at(m, n);
      out.beta1.at(m, n) = inv * coeffs.beta1.at(m, n);
      out.beta2.at(m, n) = inv * coeffs.beta2.at(m, n);
    }
  }
  return out;
}

SymplecticDefect symplectic_defect(const PerturbativeBogoliubov& coeffs,
                                   int k_max) {
  const auto barred = strip_prefactor(coeffs);
  const int N = coeffs.n_max;
  const bool have_ext = coeffs.alpha1_ext.cols() > 0;
  int ksum = have_ext ? coeffs.alpha1_ext.cols() : N;
  if (k_max > 0) ksum = std::min(ksum, k_max);
  SymplecticDefect d;
  for (int m = 1; m <= N; ++m) {
    for (int n = 1; n <= N; ++n) {
      const Complex o1 =
          barred.alpha1.at(m, n) + std::conj(barred.alpha1.at(n, m));
      d.first = std::max(d.first, std::abs(o1));
      Complex o2 =
          barred.alpha2.at(m, n) + std::conj(barred.alpha2.at(n, m));
      for (int k = 1; k <= ksum; ++k) {
        const Complex a_mk =
            have_ext ? coeffs.alpha1_ext.at(m, k) : barred.alpha1.at(m, k);
        const Complex a_nk =
            have_ext ? coeffs.alpha1_ext.at(n, k) : barred.alpha1.at(n, k);
        const Complex b_mk =
            have_ext ? coeffs.beta1_ext.at(m, k) : barred.beta1.at(m, k);
        const Complex b_nk =
            have_ext ? coeffs.beta1_ext.at(n, k) : barred.beta1.at(n, k);
        o2 += a_mk * std::conj(a_nk) - b_mk * std::conj(b_nk);
      }
      d.second = std::max(d.second, std::abs(o2));
    }
  }
  return d;
}

}  // namespace lclock
