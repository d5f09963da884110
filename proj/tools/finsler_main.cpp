#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finsler/errors.hpp"
#include "finsler/run.hpp"

namespace {

using finsler::run::Options;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical engine for generalized m-th root Finsler metrics"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may appear after the subcommand

  Options opts;
  std::string interpretation = "paper";
  std::vector<double> box = {opts.box.x_lo, opts.box.x_hi};
  std::vector<double> ybox = {opts.box.y_lo, opts.box.y_hi};
  app.add_option("--spec", opts.spec_path, "JSON metric spec file (metric names resolve here first)");
  app.add_option("--seed", opts.seed, "sampling seed")->capture_default_str();
  app.add_option("--tol", opts.tol, "residual tolerance (scale-normalized)")->capture_default_str();
  app.add_option("--samples", opts.samples, "sample point count")->capture_default_str();
  app.add_option("--box", box, "x sampling box LO HI")->expected(2);
  app.add_option("--ybox", ybox, "y sampling box LO HI")->expected(2);
  app.add_option("--json", opts.json_path, "write the JSON report to this path");
  app.add_option("--interpretation", interpretation,
                 "metric that raises d^k in the rank-one projective machinery: paper | gbar")
      ->check(CLI::IsMember({"paper", "gbar"}));
  app.add_flag("--irreducible", opts.irreducible_asserted,
               "assert that A is irreducible (recorded in dual-flat reports)");

  auto* eval = app.add_subcommand("eval", "evaluate metric tensors at one point");
  std::string eval_metric;
  std::vector<double> eval_x, eval_y;
  eval->add_option("metric", eval_metric, "metric name")->required();
  eval->add_option("--x", eval_x, "base point x^1..x^n")->required()->delimiter(',');
  eval->add_option("--y", eval_y, "direction y^1..y^n")->required()->delimiter(',');

  auto* check = app.add_subcommand("check", "verify structural conditions on a sample");
  std::string check_which;
  std::vector<std::string> check_metrics;
  check->add_option("which", check_which, "dual-flat | projective | conformal")->required();
  check->add_option("metrics", check_metrics, "metric name(s); pairs are FBAR F")->required();

  auto* geod = app.add_subcommand("geodesic", "integrate the spray ODE");
  std::string geod_metric, geod_csv;
  std::vector<double> geod_x0, geod_y0;
  double t_end = 1.0, step = 1e-3;
  geod->add_option("metric", geod_metric, "metric name")->required();
  geod->add_option("--x0", geod_x0, "start position")->required()->delimiter(',');
  geod->add_option("--y0", geod_y0, "start velocity")->required()->delimiter(',');
  geod->add_option("--t-end", t_end, "integration horizon")->capture_default_str();
  geod->add_option("--step", step, "fixed RK4 step")->capture_default_str();
  geod->add_option("--out", geod_csv, "trace CSV path");

  auto* builtin = app.add_subcommand("builtin", "built-in example metrics");
  auto* builtin_list = builtin->add_subcommand("list", "list built-in metrics");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return finsler::run::kExitUsage;
  }

  opts.box.x_lo = box[0];
  opts.box.x_hi = box[1];
  opts.box.y_lo = ybox[0];
  opts.box.y_hi = ybox[1];
  opts.interp = interpretation == "gbar" ? finsler::verify::RaisingMetric::generalized
                                         : finsler::verify::RaisingMetric::root;

  try {
    if (eval->parsed())
      return finsler::run::cmd_eval(opts, eval_metric, eval_x, eval_y, std::cout);
    if (check->parsed())
      return finsler::run::cmd_check(opts, check_which, check_metrics, std::cout);
    if (geod->parsed())
      return finsler::run::cmd_geodesic(opts, geod_metric, geod_x0, geod_y0, t_end, step,
                                        geod_csv, std::cout);
    if (builtin->parsed()) {
      if (builtin_list->parsed()) return finsler::run::cmd_builtin_list(std::cout);
      std::cerr << "builtin: expected the 'list' subcommand\n";
      return finsler::run::kExitUsage;
    }
  } catch (const finsler::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return finsler::run::kExitUsage;
  } catch (const finsler::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return finsler::run::kExitFail;
  }
  return finsler::run::kExitUsage;
}
