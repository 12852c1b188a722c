#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lclock/bogoliubov.hpp"
#include "lclock/clock.hpp"

namespace lclock {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 2 G M_earth / c^2, the default curvature scale.
double earth_schwarzschild_radius();

struct ScenarioConfig {
  double r_surface = 6.367e6;  // m
  double drop_height = 110.0;  // m
  double length = 1.0;         // initial mirror separation, r-coordinate, m
  double r_s = earth_schwarzschild_radius();
  // 0 selects the free-fall time from drop_height to the surface (computed
  // with the Earth-default r_s when r_s itself is 0, so flat-spacetime runs
  // still cover a finite interval).
  double duration = 0.0;
  int n_max = 20;
  int p_max = 40;
  std::size_t samples = 20001;
  // Divides the light speed entering the mode frequencies, shrinking the
  // total phase swing while leaving the trajectories untouched.
  double toy_scale = 1.0;
  std::string method = "auto";  // auto|direct|filon|asymptotic
  int workers = 1;
  std::size_t output_rows = 2001;

  void validate() const;  // throws ConfigError
};

OscMethod parse_method(const std::string& name);  // throws ConfigError

struct DropResult {
  ScenarioConfig config;
  double T = 0.0;
  double r_A = 0.0;
  OscMethod method_used = OscMethod::kFilon;

  ClockComparison series;
  std::vector<double> r1, r2, x1, x2, v1, v2, omega1;
  std::vector<double> f_qu_smooth;  // one-oscillation average of F_qu
  std::vector<double> f_qu_err;     // error bound on F_qu per row

  double err_first = 0.0;    // absolute, on the first-order (1,1) entries
  double err_second = 0.0;   // absolute, on the second-order (1,1) entries
  double f_qu_err_end = 0.0;
  double osc_period = 0.0;         // pi / omega_1(T)
  double osc_amplitude = 0.0;      // of theta_B_qu near t = T, rad
  double osc_amplitude_fqu = 0.0;  // same, as a fraction of theta_A
};

DropResult run_drop(const ScenarioConfig& config);
void write_drop_csv(const DropResult& res, std::ostream& os);

struct LengthSweepResult {
  ScenarioConfig config;
  std::vector<double> lengths;
  std::vector<DropResult> runs;
  // max pairwise deviation of the smoothed F_qu curves over t >= T/10, and
  // the corresponding quadrature error bound
  double max_smooth_deviation = 0.0;
  double deviation_error_bound = 0.0;
};

LengthSweepResult sweep_length(ScenarioConfig config,
                               const std::vector<double>& lengths);
void write_length_csv(const LengthSweepResult& res, std::ostream& os);

struct RsSweepResult {
  ScenarioConfig config;
  std::vector<double> r_s_values;
  std::vector<double> T_values;  // per-point free-fall time
  std::vector<double> f_cl, f_qu, f_tau, f_qu_err;
  std::vector<OscMethod> methods;  // resolved per point
  double slope_cl = 0.0, intercept_cl = 0.0, r2_cl = 0.0;
  double slope_qu = 0.0, intercept_qu = 0.0, r2_qu = 0.0;
};

RsSweepResult sweep_schwarzschild(ScenarioConfig config,
                                  const std::vector<double>& r_s_values);
void write_rs_csv(const RsSweepResult& res, std::ostream& os);

struct ValidationCheck {
  std::string name;
  double residual = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_pass() const;
};

// Toy-regime invariant suite. corrupt_coupling is a fault-injection hook: it
// perturbs a mode-mixing entry before the symplectic check, which must then
// fail.
ValidationReport validate_scenario(const ScenarioConfig& config,
                                   bool corrupt_coupling = false);
void write_validation_json(const ValidationReport& report, std::ostream& os);

}  // namespace lclock
