#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lclock/scenario.hpp"

using namespace lclock;

namespace {

struct Common {
  ScenarioConfig cfg;
  std::string output = "-";
};

void add_common(CLI::App* sub, Common& c) {
  sub->set_config("--config", "", "key = value configuration file");
  sub->add_option("--rs", c.cfg.r_s, "Schwarzschild radius [m]");
  sub->add_option("--r-surface", c.cfg.r_surface, "surface radius [m]");
  sub->add_option("--height", c.cfg.drop_height, "drop height above the surface [m]");
  sub->add_option("--length", c.cfg.length, "initial mirror separation [m]");
  sub->add_option("--duration", c.cfg.duration,
                  "coordinate-time span [s]; 0 = free-fall time to the surface");
  sub->add_option("--nmax", c.cfg.n_max, "mode truncation");
  sub->add_option("--pmax", c.cfg.p_max, "intermediate-mode truncation");
  sub->add_option("--samples", c.cfg.samples, "trajectory grid nodes");
  sub->add_option("--toy-scale", c.cfg.toy_scale,
                  "phase-swing reduction factor (toy regime)");
  sub->add_option("--method", c.cfg.method, "auto|direct|filon|asymptotic");
  sub->add_option("--workers", c.cfg.workers, "worker threads");
  sub->add_option("--output-rows", c.cfg.output_rows, "CSV row budget");
  sub->add_option("--output,-o", c.output, "output path ('-' for stdout)");
}

void emit(const std::string& path,
          const std::function<void(std::ostream&)>& writer) {
  if (path == "-") {
    writer(std::cout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output path '" + path + "'");
  writer(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phase comparison of a stationary and a freely falling "
               "cavity light-clock"};
  app.require_subcommand(1);

  Common drop_c, len_c, rs_c, val_c;
  auto* drop = app.add_subcommand("drop", "single drop experiment");
  add_common(drop, drop_c);

  auto* swl = app.add_subcommand("sweep-length", "initial-length sweep");
  add_common(swl, len_c);
  std::vector<double> lengths = {0.01, 0.1, 1.0};
  swl->add_option("--lengths", lengths, "initial lengths [m]")->delimiter(',');

  auto* swr = app.add_subcommand("sweep-rs", "curvature sweep, per-point fall time");
  add_common(swr, rs_c);
  std::vector<double> rs_values = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  swr->add_option("--rs-values", rs_values, "Schwarzschild radii [m]")
      ->delimiter(',');

  auto* val = app.add_subcommand("validate", "toy-regime invariant suite");
  add_common(val, val_c);
  bool corrupt = false;
  val->add_flag("--corrupt-coupling", corrupt, "fault-injection test hook");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (*drop) {
      const auto res = run_drop(drop_c.cfg);
      emit(drop_c.output, [&](std::ostream& os) { write_drop_csv(res, os); });
      return 0;
    }
    if (*swl) {
      const auto res = sweep_length(len_c.cfg, lengths);
      emit(len_c.output, [&](std::ostream& os) { write_length_csv(res, os); });
      return 0;
    }
    if (*swr) {
      const auto res = sweep_schwarzschild(rs_c.cfg, rs_values);
      emit(rs_c.output, [&](std::ostream& os) { write_rs_csv(res, os); });
      return 0;
    }
    const auto rep = validate_scenario(val_c.cfg, corrupt);
    emit(val_c.output,
         [&](std::ostream& os) { write_validation_json(rep, os); });
    return rep.all_pass() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
