#include <cmath>
#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "lclock/constants.hpp"
#include "lclock/scenario.hpp"

using namespace lclock;

namespace {

// Reduced-cost Earth drop: enough resolution for the classical readouts and
// smoke-level quantum ones, cheap enough to run several times per suite.
ScenarioConfig quick_config() {
  ScenarioConfig c;
  c.samples = 2001;
  c.n_max = 1;
  c.p_max = 6;
  c.output_rows = 101;
  c.workers = 2;
  return c;
}

}  // namespace

TEST_CASE("config validation accepts defaults and rejects bad fields") {
  ScenarioConfig c;
  CHECK_NOTHROW(c.validate());

  auto expect_bad = [](ScenarioConfig bad) {
    CHECK_THROWS_AS(bad.validate(), ConfigError);
  };
  ScenarioConfig b;

  b = ScenarioConfig{};
  b.length = 0.0;
  expect_bad(b);
  b = ScenarioConfig{};
  b.drop_height = -1.0;
  expect_bad(b);
  b = ScenarioConfig{};
  b.r_s = -1e-3;
  expect_bad(b);
  b = ScenarioConfig{};
  b.r_s = b.r_surface;
  expect_bad(b);
  b = ScenarioConfig{};
  b.drop_height = b.r_surface;
  expect_bad(b);
  b = ScenarioConfig{};
  b.duration = -1.0;
  expect_bad(b);
  b = ScenarioConfig{};
  b.n_max = 0;
  expect_bad(b);
  b = ScenarioConfig{};
  b.p_max = 0;
  expect_bad(b);
  b = ScenarioConfig{};
  b.samples = 100;
  expect_bad(b);
  b = ScenarioConfig{};
  b.toy_scale = 0.0;
  expect_bad(b);
  b = ScenarioConfig{};
  b.workers = 0;
  expect_bad(b);
  b = ScenarioConfig{};
  b.output_rows = 1;
  expect_bad(b);
  b = ScenarioConfig{};
  b.method = "simpson";
  expect_bad(b);
}

TEST_CASE("method names parse") {
  CHECK(parse_method("direct") == OscMethod::kDirect);
  CHECK(parse_method("filon") == OscMethod::kFilon);
  CHECK(parse_method("asymptotic") == OscMethod::kAsymptotic);
  CHECK_THROWS_AS(parse_method("auto"), ConfigError);  // resolved upstream
  CHECK_THROWS_AS(parse_method(""), ConfigError);
}

TEST_CASE("drop CSV is byte-deterministic across pipeline reruns") {
  const auto cfg = quick_config();
  const auto res1 = run_drop(cfg);
  const auto res2 = run_drop(cfg);  // workers=2: ordered assembly must hold
  std::ostringstream a, b, c;
  write_drop_csv(res1, a);
  write_drop_csv(res1, b);
  write_drop_csv(res2, c);
  CHECK(a.str() == b.str());
  CHECK(a.str() == c.str());
  CHECK(a.str().find("F_qu_err") != std::string::npos);
  CHECK(a.str().find("method") != std::string::npos);
}

TEST_CASE("flat spacetime zeroes every discrepancy column") {
  auto cfg = quick_config();
  cfg.r_s = 0.0;
  cfg.p_max = 4;
  const auto res = run_drop(cfg);
  CHECK(res.T > 0.0);  // Earth-default fall window, not a degenerate span
  for (std::size_t i = 0; i < res.series.t.size(); ++i) {
    CHECK(std::fabs(res.series.F_cl[i]) <= 1e-14);
    CHECK(std::fabs(res.series.F_qu[i]) <= 1e-14);
    CHECK(std::fabs(res.series.F_tau[i]) <= 1e-14);
    CHECK(res.series.theta_B_cl[i] == doctest::Approx(res.series.theta_A[i]));
  }
}

TEST_CASE("earth drop summary readouts at reduced cost") {
  auto cfg = quick_config();
  cfg.samples = 4001;
  cfg.p_max = 8;
  const auto res = run_drop(cfg);

  CHECK(res.T == doctest::Approx(4.7304).epsilon(1e-3));
  CHECK(res.method_used == OscMethod::kAsymptotic);  // auto at full swing

  const double f_cl = res.series.f_cl_end();
  SchwarzschildGeometry geom(cfg.r_s, kSpeedOfLight);
  const double closed =
      closed_form_classical_fraction(geom, res.r_A, cfg.length, res.T);
  CHECK(f_cl < 0.0);
  CHECK(std::fabs(f_cl - closed) <= 0.01 * std::fabs(closed));
  CHECK(std::fabs(f_cl) == doctest::Approx(1.1517e-5).epsilon(1e-3));

  const double f_tau = res.series.f_tau_end();
  CHECK(f_tau < 0.0);
  CHECK(std::fabs(f_tau) == doctest::Approx(8.02e-15).epsilon(0.05));
  CHECK(std::fabs(f_cl) / std::fabs(f_tau) >= 1e8);

  // oscillation bookkeeping: half the clock-mode period, positive amplitude
  CHECK(res.osc_period == doctest::Approx(3.34e-9).epsilon(1e-2));
  CHECK(res.osc_amplitude > 0.0);
  CHECK(res.osc_amplitude_fqu < 1e-18);
}

TEST_CASE("curvature sweep: per-point fall time, fits, and CSV") {
  auto cfg = quick_config();
  cfg.p_max = 4;
  const std::vector<double> rs = {25.0, 50.0, 75.0, 100.0};
  const auto sw = sweep_schwarzschild(cfg, rs);

  REQUIRE(sw.r_s_values.size() == 4);
  REQUIRE(sw.methods.size() == 4);
  for (std::size_t i = 1; i < 4; ++i) {
    CHECK(sw.T_values[i] < sw.T_values[i - 1]);          // faster falls
    CHECK(std::fabs(sw.f_qu[i]) > std::fabs(sw.f_qu[i - 1]));
    CHECK(std::fabs(sw.f_tau[i]) > std::fabs(sw.f_tau[i - 1]));
  }
  CHECK(sw.r2_qu >= 0.99);
  CHECK(sw.slope_qu < 0.0);  // F_qu negative, growing in magnitude
  for (double f : sw.f_cl) {
    CHECK(f == doctest::Approx(-1.1517e-5).epsilon(1e-3));
  }

  std::ostringstream a, b;
  write_rs_csv(sw, a);
  write_rs_csv(sw, b);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("fit_qu") != std::string::npos);

  CHECK_THROWS_AS(sweep_schwarzschild(cfg, {}), ConfigError);
  CHECK_THROWS_AS(sweep_schwarzschild(cfg, {0.0}), ConfigError);
  CHECK_THROWS_AS(sweep_schwarzschild(cfg, {150.0}), ConfigError);
}

TEST_CASE("length sweep: identical lengths give identical curves") {
  auto cfg = quick_config();
  cfg.p_max = 4;
  const auto sw = sweep_length(cfg, {0.5, 0.5});
  REQUIRE(sw.runs.size() == 2);
  CHECK(sw.runs[0].T == sw.runs[1].T);  // shared fall window
  CHECK(sw.max_smooth_deviation == 0.0);
  CHECK(sw.deviation_error_bound > 0.0);

  std::ostringstream a, b;
  write_length_csv(sw, a);
  write_length_csv(sw, b);
  CHECK(a.str() == b.str());

  CHECK_THROWS_AS(sweep_length(cfg, {}), ConfigError);
  CHECK_THROWS_AS(sweep_length(cfg, {1e-8}), ConfigError);
  CHECK_THROWS_AS(sweep_length(cfg, {20.0}), ConfigError);
}

TEST_CASE("validation suite passes on defaults and flags injected faults") {
  const ScenarioConfig cfg;
  const auto rep = validate_scenario(cfg);
  CHECK(rep.all_pass());
  CHECK(rep.checks.size() >= 8);
  for (const auto& c : rep.checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
    CHECK(c.residual <= c.bound);
  }

  std::ostringstream os;
  write_validation_json(rep, os);
  const auto doc = nlohmann::json::parse(os.str());
  CHECK(doc.at("pass").get<bool>());
  CHECK(doc.at("checks").size() == rep.checks.size());

  const auto bad = validate_scenario(cfg, /*corrupt_coupling=*/true);
  CHECK_FALSE(bad.all_pass());
  bool symplectic_failed = false;
  for (const auto& c : bad.checks) {
    if (!c.pass && c.name.find("symplectic") != std::string::npos) {
      symplectic_failed = true;
    }
  }
  CHECK(symplectic_failed);
}
