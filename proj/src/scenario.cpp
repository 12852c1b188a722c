#include "lclock/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "json.hpp"
#include "lclock/constants.hpp"
#include "lclock/geodesics.hpp"
#include "lclock/oscillatory.hpp"

namespace lclock {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* method_name(OscMethod m) {
  switch (m) {
    case OscMethod::kDirect:
      return "direct";
    case OscMethod::kFilon:
      return "filon";
    case OscMethod::kAsymptotic:
      return "asymptotic";
  }
  return "?";
}

void write_config_header(const ScenarioConfig& c, std::ostream& os) {
  os << "# r_surface=" << fmt(c.r_surface) << " drop_height="
     << fmt(c.drop_height) << " length=" << fmt(c.length)
     << " r_s=" << fmt(c.r_s) << " duration=" << fmt(c.duration) << "\n";
  os << "# n_max=" << c.n_max << " p_max=" << c.p_max << " samples="
     << c.samples << " toy_scale=" << fmt(c.toy_scale) << " method="
     << c.method << " workers=" << c.workers << " output_rows="
     << c.output_rows << "\n";
}

struct LinearFit {
  double slope = 0.0, intercept = 0.0, r2 = 1.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit f;
  const std::size_t n = x.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

double resolve_duration(const ScenarioConfig& c) {
  if (c.duration > 0.0) return c.duration;
  const double r_A = c.r_surface + c.drop_height;
  const double rs = c.r_s > 0.0 ? c.r_s : earth_schwarzschild_radius();
  SchwarzschildGeometry geom(rs, kSpeedOfLight);
  return fall_coordinate_time(geom, r_A, c.r_surface);
}

}  // namespace

double earth_schwarzschild_radius() {
  return 2.0 * kGravitationalConstant * kEarthMass /
         (kSpeedOfLight * kSpeedOfLight);
}

OscMethod parse_method(const std::string& name) {
  if (name == "direct") return OscMethod::kDirect;
  if (name == "filon") return OscMethod::kFilon;
  if (name == "asymptotic") return OscMethod::kAsymptotic;
  throw ConfigError("unknown method '" + name + "'");
}

void ScenarioConfig::validate() const {
  if (r_surface <= 0.0 || length <= 0.0 || drop_height <= 0.0) {
    throw ConfigError("lengths must be positive");
  }
  if (r_s < 0.0) throw ConfigError("r_s must be non-negative");
  if (r_surface <= r_s) throw ConfigError("r_surface must exceed r_s");
  if (drop_height >= r_surface) {
    throw ConfigError("drop_height must be below r_surface");
  }
  if (duration < 0.0) throw ConfigError("duration must be non-negative");
  if (n_max < 1 || p_max < 1) throw ConfigError("truncations must be >= 1");
  if (samples < 101) throw ConfigError("samples must be >= 101");
  if (toy_scale <= 0.0) throw ConfigError("toy_scale must be positive");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (output_rows < 2) throw ConfigError("output_rows must be >= 2");
  if (method != "auto") parse_method(method);
}

DropResult run_drop(const ScenarioConfig& config) {
  config.validate();
  DropResult res;
  res.config = config;
  res.r_A = config.r_surface + config.drop_height;
  res.T = resolve_duration(config);

  SchwarzschildGeometry geom(config.r_s, kSpeedOfLight);
  const auto traj =
      mirror_pair(geom, res.r_A, config.length, res.T, config.samples);
  const double c_eff = kSpeedOfLight / config.toy_scale;
  PhaseProfile ph(traj, c_eff);

  const double swing = 2.0 * ph.omega_ref() * res.T;
  OscMethod requested;
  if (config.method == "auto") {
    requested = swing >= 1e6 ? OscMethod::kAsymptotic : OscMethod::kFilon;
  } else {
    requested = parse_method(config.method);
  }
  res.method_used = requested;

  CouplingMatrices cm(traj.initial_length_x(), std::max(config.n_max, 1));
  BogoliubovParams par;
  par.n_max = 1;  // only the (1,1) entries enter the clock readout
  par.p_max = config.p_max;
  par.workers = config.workers;
  par.method = OscMethod::kFilon;
  BogoliubovEngine engine(traj, ph, cm, par);
  const auto coeffs = engine.compute();
  res.err_first = coeffs.err_first;
  res.err_second = coeffs.err_second;
  const auto run = engine.running_entries_11(config.p_max);

  // cross-check of the first-order entry with the requested method
  if (requested != OscMethod::kFilon) {
    OscillatoryIntegralSpec spec;
    const CavityTrajectory* tp = &traj;
    const double L0 = traj.initial_length_x();
    Complex cross(0.0);
    double rem = 0.0;
    for (int j = 1; j <= 2; ++j) {
      spec.envelope = [tp, L0, j](double t) {
        return Complex(tp->velocity(j, t) * L0 / tp->length_x(t));
      };
      spec.envelope_d1 = [tp, L0, j](double t) {
        const double L = tp->length_x(t);
        const double lp = tp->delta_length_series().deriv(t);
        return Complex(tp->accel(j, t) * L0 / L -
                       tp->velocity(j, t) * L0 * lp / (L * L));
      };
      spec.phase = PhaseFunction::scaled_profile(ph, 2.0);
      spec.t_a = 0.0;
      spec.t_b = res.T;
      spec.method = requested;
      spec.rel_tol = 1e-12;
      const auto r = oscillatory_integral(spec);
      cross += cm.b(j, 1, 1) * r.value;
      rem += std::abs(cm.b(j, 1, 1)) * r.error_estimate;
    }
    res.err_first =
        std::max(res.err_first, std::abs(cross - run.beta1.back()) + rem);
  }

  const double theta_A_T = -ph.omega_ref() * res.T;
  res.f_qu_err_end = (res.err_first + res.err_second) / std::abs(theta_A_T);

  // oscillation near the end of the fall, resolved below its period
  res.osc_period = M_PI / ph.omega1(res.T);
  {
    const int nd = 256;
    std::vector<double> ts(nd + 1), th(nd + 1);
    for (int q = 0; q <= nd; ++q) {
      ts[q] =
          res.T - 2.0 * res.osc_period * (1.0 - static_cast<double>(q) / nd);
      const auto e = engine.entries_11_at(run, ts[q]);
      th[q] = quantum_phase_shift(Complex(0.0), e.alpha2, e.beta1, e.beta2);
    }
    // remove the secular drift so the reported amplitude is the genuine
    // sub-period oscillation
    const auto drift = fit_line(ts, th);
    double lo = 0.0, hi = 0.0;
    for (int q = 0; q <= nd; ++q) {
      const double r = th[q] - (drift.intercept + drift.slope * ts[q]);
      if (q == 0) {
        lo = hi = r;
      } else {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    }
    res.osc_amplitude = 0.5 * (hi - lo);
    res.osc_amplitude_fqu = res.osc_amplitude / std::abs(theta_A_T);
  }

  // time series on a row grid aligned with the node grid
  const std::size_t panels = run.t.size() - 1;
  const std::size_t stride =
      std::max<std::size_t>(1, panels / (config.output_rows - 1));
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < panels; i += stride) rows.push_back(i);
  rows.push_back(panels);

  auto smooth_at = [&](double t) {
    // one-period trapezoid average of theta_B_qu ending at t
    const double p = M_PI / ph.omega1(t);
    const int ns = 8;
    double acc = 0.0;
    for (int q = 0; q <= ns; ++q) {
      const double ts = std::max(0.0, t - p + p * q / ns);
      const auto e = engine.entries_11_at(run, ts);
      const double th =
          quantum_phase_shift(Complex(0.0), e.alpha2, e.beta1, e.beta2);
      acc += (q == 0 || q == ns) ? 0.5 * th : th;
    }
    return acc / ns;
  };

  for (const std::size_t i : rows) {
    const double t = run.t[i];
    res.series.t.push_back(t);
    const double th_A = -ph.omega_ref() * t;
    res.series.theta_A.push_back(th_A);
    res.series.theta_B_cl.push_back(th_A - ph.psi(t));
    const double th_qu = quantum_phase_shift(Complex(0.0), run.alpha2[i],
                                             run.beta1[i], run.beta2[i]);
    res.series.theta_B_qu.push_back(th_qu);
    res.series.F_cl.push_back(classical_fraction(ph, t));
    res.series.F_qu.push_back(t > 0.0 ? th_qu / th_A : 0.0);
    res.series.F_tau.push_back(
        traj.has_geodesics() ? traj.fractional_proper_time(t) : 0.0);
    res.f_qu_smooth.push_back(t > 0.0 ? smooth_at(t) / th_A : 0.0);
    res.f_qu_err.push_back(
        t > 0.0 ? (res.err_first + res.err_second) / (ph.omega_ref() * t)
                : 0.0);
    res.r1.push_back(traj.has_geodesics() ? traj.bottom().r(t) : traj.x1(t));
    res.r2.push_back(traj.has_geodesics() ? traj.top().r(t) : traj.x2(t));
    res.x1.push_back(traj.x1(t));
    res.x2.push_back(traj.x2(t));
    res.v1.push_back(traj.v1(t));
    res.v2.push_back(traj.v2(t));
    res.omega1.push_back(ph.omega1(t));
  }
  return res;
}

void write_drop_csv(const DropResult& res, std::ostream& os) {
  os << "# lightclock drop\n";
  write_config_header(res.config, os);
  os << "# T=" << fmt(res.T) << " r_A=" << fmt(res.r_A) << " method_used="
     << method_name(res.method_used) << "\n";
  os << "# err_first=" << fmt(res.err_first) << " err_second="
     << fmt(res.err_second) << " f_qu_err_end=" << fmt(res.f_qu_err_end)
     << "\n";
  os << "# osc_period=" << fmt(res.osc_period) << " osc_amplitude="
     << fmt(res.osc_amplitude) << " osc_amplitude_fqu="
     << fmt(res.osc_amplitude_fqu) << "\n";
  os << "t,r1,r2,x1,x2,v1,v2,omega1,theta_A,theta_B_cl,theta_B_qu,"
        "F_cl,F_qu,F_qu_smooth,F_tau,F_qu_err,method\n";
  for (std::size_t i = 0; i < res.series.t.size(); ++i) {
    os << fmt(res.series.t[i]) << ',' << fmt(res.r1[i]) << ','
       << fmt(res.r2[i]) << ',' << fmt(res.x1[i]) << ',' << fmt(res.x2[i])
       << ',' << fmt(res.v1[i]) << ',' << fmt(res.v2[i]) << ','
       << fmt(res.omega1[i]) << ',' << fmt(res.series.theta_A[i]) << ','
       << fmt(res.series.theta_B_cl[i]) << ','
       << fmt(res.series.theta_B_qu[i]) << ',' << fmt(res.series.F_cl[i])
       << ',' << fmt(res.series.F_qu[i]) << ',' << fmt(res.f_qu_smooth[i])
       << ',' << fmt(res.series.F_tau[i]) << ',' << fmt(res.f_qu_err[i])
       << ',' << method_name(res.method_used) << "\n";
  }
}

LengthSweepResult sweep_length(ScenarioConfig config,
                               const std::vector<double>& lengths) {
  config.validate();
  if (lengths.empty()) throw ConfigError("no lengths given");
  for (double L : lengths) {
    if (L < 1e-7 || L > 10.0) {
      throw ConfigError("lengths must lie in [1e-7, 10] m");
    }
  }
  LengthSweepResult out;
  out.config = config;
  config.duration = resolve_duration(config);  // shared across lengths
  for (double L : lengths) {
    ScenarioConfig c = config;
    c.length = L;
    out.lengths.push_back(L);
    out.runs.push_back(run_drop(c));
  }
  // pairwise deviation of the smoothed curves, away from the t -> 0 blowup
  const auto& t = out.runs.front().series.t;
  for (std::size_t a = 0; a < out.runs.size(); ++a) {
    for (std::size_t b = a + 1; b < out.runs.size(); ++b) {
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < 0.1 * out.runs.front().T) continue;
        const double dev = std::abs(out.runs[a].f_qu_smooth[i] -
                                    out.runs[b].f_qu_smooth[i]);
        const double bound =
            out.runs[a].f_qu_err[i] + out.runs[b].f_qu_err[i];
        if (dev > out.max_smooth_deviation) {
          out.max_smooth_deviation = dev;
        }
        out.deviation_error_bound = std::max(out.deviation_error_bound, bound);
      }
    }
  }
  return out;
}

void write_length_csv(const LengthSweepResult& res, std::ostream& os) {
  os << "# lightclock sweep-length\n";
  write_config_header(res.config, os);
  os << "# max_smooth_deviation=" << fmt(res.max_smooth_deviation)
     << " deviation_error_bound=" << fmt(res.deviation_error_bound) << "\n";
  for (std::size_t k = 0; k < res.runs.size(); ++k) {
    os << "# length=" << fmt(res.lengths[k]) << " osc_amplitude_fqu="
       << fmt(res.runs[k].osc_amplitude_fqu) << " osc_period="
       << fmt(res.runs[k].osc_period) << " f_qu_end="
       << fmt(res.runs[k].series.F_qu.back()) << "\n";
  }
  os << "length,t,F_qu,F_qu_smooth,F_qu_err,method\n";
  for (std::size_t k = 0; k < res.runs.size(); ++k) {
    const auto& r = res.runs[k];
    for (std::size_t i = 0; i < r.series.t.size(); ++i) {
      os << fmt(res.lengths[k]) << ',' << fmt(r.series.t[i]) << ','
         << fmt(r.series.F_qu[i]) << ',' << fmt(r.f_qu_smooth[i]) << ','
         << fmt(r.f_qu_err[i]) << ',' << method_name(r.method_used) << "\n";
    }
  }
}

RsSweepResult sweep_schwarzschild(ScenarioConfig config,
                                  const std::vector<double>& r_s_values) {
  config.validate();
  if (r_s_values.empty()) throw ConfigError("no r_s values given");
  for (double rs : r_s_values) {
    if (rs <= 0.0 || rs > 100.0) {
      throw ConfigError("r_s values must lie in (0, 100] m");
    }
  }
  RsSweepResult out;
  out.config = config;
  // each point falls through the same height, taking its own fall time
  for (double rs : r_s_values) {
    ScenarioConfig c = config;
    c.r_s = rs;
    c.duration = 0.0;
    const auto run = run_drop(c);
    out.T_values.push_back(run.T);
    out.r_s_values.push_back(rs);
    out.f_cl.push_back(run.series.F_cl.back());
    out.f_qu.push_back(run.f_qu_smooth.back());
    out.f_tau.push_back(run.series.F_tau.back());
    out.f_qu_err.push_back(run.f_qu_err.back());
    out.methods.push_back(run.method_used);
  }
  if (out.r_s_values.size() >= 2) {
    const auto fc = fit_line(out.r_s_values, out.f_cl);
    const auto fq = fit_line(out.r_s_values, out.f_qu);
    out.slope_cl = fc.slope;
    out.intercept_cl = fc.intercept;
    out.r2_cl = fc.r2;
    out.slope_qu = fq.slope;
    out.intercept_qu = fq.intercept;
    out.r2_qu = fq.r2;
  }
  return out;
}

void write_rs_csv(const RsSweepResult& res, std::ostream& os) {
  os << "# lightclock sweep-rs\n";
  write_config_header(res.config, os);
  os << "# fit_cl slope=" << fmt(res.slope_cl) << " intercept="
     << fmt(res.intercept_cl) << " r2=" << fmt(res.r2_cl) << "\n";
  os << "# fit_qu slope=" << fmt(res.slope_qu) << " intercept="
     << fmt(res.intercept_qu) << " r2=" << fmt(res.r2_qu) << "\n";
  os << "r_s,T,F_cl,F_qu,F_tau,F_qu_err,method\n";
  for (std::size_t i = 0; i < res.r_s_values.size(); ++i) {
    os << fmt(res.r_s_values[i]) << ',' << fmt(res.T_values[i]) << ','
       << fmt(res.f_cl[i]) << ','
       << fmt(res.f_qu[i]) << ',' << fmt(res.f_tau[i]) << ','
       << fmt(res.f_qu_err[i]) << ',' << method_name(res.methods[i]) << "\n";
  }
}

bool ValidationReport::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

namespace {

void add_check(ValidationReport& rep, const std::string& name, double residual,
               double bound) {
  rep.checks.push_back(
      {name, residual, bound, std::isfinite(residual) && residual <= bound});
}

CavityTrajectory stretch_traj(double eps, double T, std::size_t samples) {
  return CavityTrajectory::from_motion(
      [eps](int j, double t) { return j == 1 ? 0.0 : 1.0 + eps * t; },
      [eps](int j, double) { return j == 1 ? 0.0 : eps; }, T, samples);
}

CavityTrajectory rigid_traj(double scale, double T, std::size_t samples) {
  const double amp = 0.03, w0 = 0.7;
  return CavityTrajectory::from_motion(
      [scale, amp, w0](int j, double t) {
        return (j == 1 ? 0.0 : 1.0) + scale * amp * (1.0 - std::cos(w0 * t));
      },
      [scale, amp, w0](int, double t) {
        return scale * amp * w0 * std::sin(w0 * t);
      },
      T, samples);
}

}  // namespace

ValidationReport validate_scenario(const ScenarioConfig& config,
                                   bool corrupt_coupling) {
  config.validate();
  ValidationReport rep;

  // mode orthonormality under the KG inner product
  {
    ModeBasis basis(0.0, 1.0, 6, 1.0);
    double resid = 0.0;
    for (int m = 1; m <= 6; ++m) {
      for (int n = 1; n <= 6; ++n) {
        const auto ip = kg_inner_product(basis.mode(m), basis.mode(n), 0.0,
                                         1.0);
        const double expect = m == n ? 1.0 : 0.0;
        resid = std::max(resid, std::abs(ip - Complex(expect)));
      }
    }
    add_check(rep, "mode_orthonormality", resid, 1e-9);
  }

  // closed-form couplings against the quadrature oracle
  {
    ModeBasis basis(0.2, 1.5, 5, 1.7);
    const auto cm = coupling_matrices(basis);
    double resid = 0.0;
    for (int j = 1; j <= 2; ++j) {
      for (int m = 1; m <= 5; ++m) {
        for (int n = 1; n <= 5; ++n) {
          const auto ipa =
              kg_inner_product(basis.boundary_derivative(m, j), basis.mode(n),
                               basis.x1(), basis.x2());
          const auto ipb = kg_inner_product(basis.boundary_derivative(m, j),
                                            basis.conjugate_mode(n),
                                            basis.x1(), basis.x2());
          resid = std::max(resid, std::abs(cm.a(j, m, n) - ipa.real()));
          resid = std::max(resid, std::abs(cm.b(j, m, n) + ipb.real()));
        }
      }
    }
    add_check(rep, "coupling_closed_form", resid, 1e-9);
  }

  // first-order panel scheme against direct adaptive quadrature
  {
    const double eps = 2e-3, T = 12.0;
    const auto traj = stretch_traj(eps, T, 2401);
    PhaseProfile ph(traj, 1.0);
    CouplingMatrices cm(1.0, 16);
    BogoliubovParams par;
    par.n_max = 3;
    par.p_max = 3;
    par.with_second_order = false;
    BogoliubovEngine engine(traj, ph, cm, par);
    double resid = 0.0;
    for (int m = 1; m <= 3; ++m) {
      for (int n = 1; n <= 3; ++n) {
        for (bool beta : {false, true}) {
          if (!beta && m == n) continue;
          const double entry = beta ? cm.b(2, m, n) : cm.a(2, m, n);
          if (entry == 0.0) continue;
          OscillatoryIntegralSpec spec;
          const CavityTrajectory* tp = &traj;
          spec.envelope = [tp, eps](double t) {
            return Complex(eps / tp->length_x(t));
          };
          spec.phase = PhaseFunction::scaled_profile(
              ph, static_cast<double>(beta ? m + n : m - n));
          spec.t_a = 0.0;
          spec.t_b = T;
          spec.method = OscMethod::kDirect;
          spec.rel_tol = 1e-13;
          const Complex ref = entry * oscillatory_integral(spec).value;
          const Complex got =
              beta ? engine.barred_beta1(m, n) : engine.barred_alpha1(m, n);
          resid = std::max(resid, std::abs(got - ref) / std::abs(ref));
        }
      }
    }
    add_check(rep, "first_order_vs_direct", resid, 1e-8);
  }

  // second-order (1,1) against the nested brute-force quadrature
  {
    const double T = 6.0;
    const auto traj = rigid_traj(1.0, T, 1201);
    PhaseProfile ph(traj, 1.0);
    CouplingMatrices cm(1.0, 8);
    const int P = 4;
    auto vel = [](double t) { return 0.03 * 0.7 * std::sin(0.7 * t); };
    auto nested = [&](int mu, int nu) {
      auto inner_at = [&](double t2) {
        OscillatoryIntegralSpec inner;
        inner.envelope = [&](double t) { return Complex(vel(t)); };
        inner.phase = PhaseFunction::linear(nu * ph.omega_ref());
        inner.t_a = 0.0;
        inner.t_b = t2;
        inner.method = OscMethod::kDirect;
        inner.rel_tol = 1e-12;
        return oscillatory_integral(inner).value;
      };
      OscillatoryIntegralSpec outer;
      outer.envelope = [&](double t2) { return vel(t2) * inner_at(t2); };
      outer.phase = PhaseFunction::linear(mu * ph.omega_ref());
      outer.t_a = 1e-12;
      outer.t_b = T;
      outer.method = OscMethod::kDirect;
      outer.rel_tol = 1e-10;
      return oscillatory_integral(outer).value;
    };
    Complex a2_ref(0.0), b2_ref(0.0);
    for (int p = 1; p <= P; ++p) {
      const double ca_l = cm.a(1, 1, p) + cm.a(2, 1, p);
      const double ca_r = cm.a(1, p, 1) + cm.a(2, p, 1);
      const double cb_l = cm.b(1, 1, p) + cm.b(2, 1, p);
      const double cb_r = cm.b(1, p, 1) + cm.b(2, p, 1);
      if (ca_l * ca_r != 0.0) a2_ref += ca_l * ca_r * nested(1 - p, p - 1);
      a2_ref += cb_l * cb_r * nested(1 + p, -(1 + p));
      if (ca_l * cb_r != 0.0) b2_ref += ca_l * cb_r * nested(1 - p, 1 + p);
      if (cb_l * ca_r != 0.0) b2_ref += cb_l * ca_r * nested(1 + p, 1 - p);
    }
    BogoliubovParams par;
    par.n_max = 1;
    par.p_max = P;
    const auto coeffs = assemble_bogoliubov(traj, ph, cm, par);
    const auto barred = strip_prefactor(coeffs);
    const double resid =
        std::max(std::abs(barred.alpha2.at(1, 1) - a2_ref) / std::abs(a2_ref),
                 std::abs(barred.beta2.at(1, 1) - b2_ref) / std::abs(b2_ref));
    add_check(rep, "second_order_vs_nested", resid, 1e-6);
  }

  // symplectic identity defects, with the fault-injection hook
  {
    const auto traj = rigid_traj(1.0, 9.0, 1801);
    PhaseProfile ph(traj, 1.0);
    CouplingMatrices cm(1.0, 24);
    BogoliubovParams par;
    par.n_max = 6;
    par.p_max = 12;
    auto coeffs = assemble_bogoliubov(traj, ph, cm, par);
    if (corrupt_coupling) {
      // equivalent to a wrong mode-mixing coupling entry
      coeffs.alpha1.at(1, 2) += Complex(1e-3);
      coeffs.alpha1_ext.at(1, 2) += Complex(1e-3);
    }
    const auto d = symplectic_defect(coeffs);
    add_check(rep, "symplectic_first_order", d.first, 1e-8);
    add_check(rep, "symplectic_second_order", d.second, 1e-6);
  }

  // velocity-scaling laws
  {
    BogoliubovParams par;
    par.n_max = 3;
    par.p_max = 6;
    const auto t1 = rigid_traj(1.0, 6.0, 1201);
    const auto t2 = rigid_traj(2.0, 6.0, 1201);
    PhaseProfile p1(t1, 1.0), p2(t2, 1.0);
    CouplingMatrices cm(1.0, 24);
    const auto c1 = assemble_bogoliubov(t1, p1, cm, par);
    const auto c2 = assemble_bogoliubov(t2, p2, cm, par);
    double s1 = 0.0, s2 = 0.0;
    for (int m = 1; m <= 3; ++m) {
      for (int n = 1; n <= 3; ++n) {
        s1 = std::max({s1, std::abs(c1.alpha1.at(m, n)),
                       std::abs(c1.beta1.at(m, n))});
        s2 = std::max({s2, std::abs(c1.alpha2.at(m, n)),
                       std::abs(c1.beta2.at(m, n))});
      }
    }
    double r1 = 0.0, r2 = 0.0;
    for (int m = 1; m <= 3; ++m) {
      for (int n = 1; n <= 3; ++n) {
        if (m != n) {
          r1 = std::max(r1, std::abs(c2.alpha1.at(m, n) -
                                     2.0 * c1.alpha1.at(m, n)) /
                                s1);
        }
        r1 = std::max(r1,
                      std::abs(c2.beta1.at(m, n) - 2.0 * c1.beta1.at(m, n)) /
                          s1);
        r2 = std::max(r2, std::abs(c2.alpha2.at(m, n) -
                                   4.0 * c1.alpha2.at(m, n)) /
                              s2);
        r2 = std::max(r2,
                      std::abs(c2.beta2.at(m, n) - 4.0 * c1.beta2.at(m, n)) /
                          s2);
      }
    }
    add_check(rep, "velocity_scaling_first", r1, 1e-8);
    add_check(rep, "velocity_scaling_second", r2, 1e-6);
  }

  // flat spacetime: all discrepancies vanish
  {
    ScenarioConfig flat = config;
    flat.r_s = 0.0;
    flat.samples = std::min<std::size_t>(config.samples, 2001);
    flat.n_max = 1;
    flat.p_max = std::min(config.p_max, 8);
    flat.output_rows = 51;
    const auto run = run_drop(flat);
    double resid = 0.0;
    for (std::size_t i = 0; i < run.series.t.size(); ++i) {
      resid = std::max({resid, std::abs(run.series.F_cl[i]),
                        std::abs(run.series.F_qu[i]),
                        std::abs(run.series.F_tau[i])});
    }
    add_check(rep, "flat_spacetime_zero", resid, 1e-14);
  }

  // Gaussian state-independence of the readout
  {
    const auto traj = stretch_traj(2e-3, 12.0, 1201);
    PhaseProfile ph(traj, 1.0);
    CouplingMatrices cm(1.0, 16);
    BogoliubovParams par;
    par.n_max = 1;
    par.p_max = 8;
    const auto coeffs = assemble_bogoliubov(traj, ph, cm, par);
    const auto barred = strip_prefactor(coeffs);
    const Complex a11 =
        coeffs.prefactor(1) *
        (1.0 + barred.alpha1.at(1, 1) + barred.alpha2.at(1, 1));
    const Complex b11 = coeffs.prefactor(1) *
                        (barred.beta1.at(1, 1) + barred.beta2.at(1, 1));
    std::mt19937 rng(7321);
    std::uniform_real_distribution<double> amp(0.1, 10.0);
    std::vector<GaussianClockState> states;
    for (int i = 0; i < 100; ++i) {
      states.push_back(GaussianClockState::zero_phase(amp(rng)));
    }
    add_check(rep, "state_independence",
              state_independence_check(a11, b11, states), 1e-12);
  }

  return rep;
}

void write_validation_json(const ValidationReport& report, std::ostream& os) {
  nlohmann::json j;
  j["pass"] = report.all_pass();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : report.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"residual", c.residual},
                           {"bound", c.bound},
                           {"pass", c.pass}});
  }
  os << j.dump(2) << "\n";
}

}  // namespace lclock
