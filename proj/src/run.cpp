#include "finsler/run.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>

#include <json.hpp>

#include "finsler/builtins.hpp"
#include "finsler/errors.hpp"
#include "finsler/metric.hpp"
#include "finsler/specio.hpp"
#include "finsler/spray.hpp"

namespace finsler {
namespace run {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

namespace {

struct Context {
  std::optional<specio::SpecFile> file;
};

Context load_context(const Options& opts) {
  Context ctx;
  if (!opts.spec_path.empty()) ctx.file = specio::parse_spec(opts.spec_path);
  return ctx;
}

const MetricSpec& resolve(const Context& ctx, const std::string& name) {
  if (ctx.file)
    if (const MetricSpec* spec = ctx.file->find(name)) return *spec;
  if (const MetricSpec* spec = builtins::find(name)) return *spec;
  throw InputError("unknown metric '" + name + "' (not in the spec file or builtin list)");
}

json vec_json(std::span<const double> v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

json report_json(const verify::ResidualReport& r) {
  json out;
  out["name"] = r.name;
  out["verdict"] = verify::to_string(r.verdict);
  out["max_residual"] = r.max_residual;
  out["tolerance"] = r.tolerance;
  out["points_attempted"] = r.attempted;
  out["points_skipped"] = r.skipped;
  // top-3 worst points, residual-descending with index ties in point order
  std::vector<int> order(r.per_point.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (r.per_point[a].residual != r.per_point[b].residual)
      return r.per_point[a].residual > r.per_point[b].residual;
    return a < b;
  });
  json worst = json::array();
  for (size_t k = 0; k < order.size() && k < 3; ++k) {
    const auto& p = r.per_point[order[k]];
    worst.push_back({{"x", vec_json(p.at.x)}, {"y", vec_json(p.at.y)}, {"residual", p.residual}});
  }
  out["worst_points"] = worst;
  return out;
}

json base_report(const Options& opts, const std::string& command) {
  json out;
  out["tool"] = "finsler";
  out["version"] = kToolVersion;
  out["command"] = command;
  out["seed"] = opts.seed;
  out["sample"] = {{"samples", opts.samples},
                   {"box_x", {opts.box.x_lo, opts.box.x_hi}},
                   {"box_y", {opts.box.y_lo, opts.box.y_hi}}};
  out["interpretation"] =
      opts.interp == verify::RaisingMetric::root ? "paper" : "gbar";
  return out;
}

void emit(const json& report, const Options& opts, std::ostream& out) {
  if (!opts.json_path.empty()) {
    std::ofstream f(opts.json_path);
    if (!f) throw InputError("cannot write JSON report to " + opts.json_path);
    f << report.dump(2) << "\n";
  } else {
    out << report.dump(2) << "\n";
  }
}

int verdict_exit(verify::Verdict v) {
  switch (v) {
    case verify::Verdict::pass: return kExitPass;
    case verify::Verdict::fail: return kExitFail;
    default: return kExitInconclusive;
  }
}

verify::CheckOptions check_options(const Options& opts) {
  verify::CheckOptions c;
  c.samples = opts.samples;
  c.box = opts.box;
  c.seed = opts.seed;
  c.tol = opts.tol;
  c.interp = opts.interp;
  c.irreducible_asserted = opts.irreducible_asserted;
  return c;
}

}  // namespace

int cmd_builtin_list(std::ostream& out) {
  for (const auto& b : builtins::all()) {
    out << b.name << "  (kind ";
    switch (b.spec.kind()) {
      case MetricKind::mroot: out << "mroot"; break;
      case MetricKind::generalized: out << "generalized"; break;
      case MetricKind::generalized_rank1: out << "generalized_rank1"; break;
    }
    out << ", n=" << b.spec.dimension() << ", m=" << b.spec.root_order() << ")\n    "
        << b.description << "\n";
  }
  return kExitPass;
}

int cmd_eval(const Options& opts, const std::string& metric, const Vec& x, const Vec& y,
             std::ostream& out) {
  const Context ctx = load_context(opts);
  const MetricSpec& spec = resolve(ctx, metric);
  if (static_cast<int>(x.size()) != spec.dimension() ||
      static_cast<int>(y.size()) != spec.dimension())
    throw InputError("point dimension does not match metric dimension " +
                     std::to_string(spec.dimension()));
  json report = base_report(opts, "eval " + metric);
  report["metric"] = metric;
  report["point"] = {{"x", vec_json(x)}, {"y", vec_json(y)}};
  const EvalPoint pt{x, y};
  try {
    const MetricEval ev = evaluate_metric(spec, pt);
    const SprayEval sp = spray_eval(spec, pt, /*with_douglas=*/true);
    json result;
    result["F"] = ev.f_value;
    result["A"] = ev.a_value;
    result["B"] = ev.b_value;
    result["g"] = matrix_json(ev.g);
    result["g_inv"] = matrix_json(ev.g_inv);
    result["y_low"] = vec_json(ev.y_low);
    result["positive_definite"] = ev.positive_definite;
    result["g_condition"] = ev.g_condition;
    result["cartan_score"] = riemannian_score(spec, pt);
    result["spray"] = vec_json(sp.g_coeffs);
    result["berwald_norm"] = sp.berwald.max_abs();
    result["mean_berwald_norm"] = sp.mean_berwald.max_abs();
    result["douglas_norm"] = sp.douglas.max_abs();
    report["result"] = result;
    emit(report, opts, out);
    out << "F = " << fmt_double(ev.f_value) << ", cartan score = "
        << fmt_double(result["cartan_score"].get<double>()) << "\n";
    return kExitPass;
  } catch (const InadmissiblePointError& e) {
    report["error"] = {{"type", "inadmissible-point"},
                       {"message", e.what()},
                       {"A", e.a_value},
                       {"F2", e.f2_value}};
    emit(report, opts, out);
    out << "inadmissible point: " << e.what() << "\n";
    return kExitFail;
  }
}

int cmd_check(const Options& opts, const std::string& which,
              const std::vector<std::string>& metrics, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  const Context ctx = load_context(opts);
  const verify::CheckOptions copts = check_options(opts);
  std::string command = "check " + which;
  for (const auto& m : metrics) command += " " + m;
  json report = base_report(opts, command);
  report["metrics"] = metrics;
  json checks = json::array();
  verify::Verdict overall = verify::Verdict::inconclusive;

  if (which == "dual-flat") {
    if (metrics.size() != 1) throw InputError("check dual-flat takes exactly one metric name");
    const MetricSpec& spec = resolve(ctx, metrics[0]);
    const verify::DualFlatCheck check = verify::check_dual_flat(spec, copts);
    checks.push_back(report_json(check.definition));
    checks.push_back(report_json(check.coefficient_form));
    checks.push_back(report_json(check.conditions->b_condition));
    checks.push_back(report_json(check.conditions->theta_condition));
    json theta = json::array();
    for (size_t i = 0; i < check.conditions->theta.theta_per_x.size(); ++i)
      theta.push_back({{"x", vec_json(check.conditions->theta.x_samples[i])},
                       {"theta_l", vec_json(check.conditions->theta.theta_per_x[i])}});
    report["theta_recovery"] = {
        {"per_x", theta},
        {"linearity_residual", check.conditions->theta.linearity_residual}};
    report["irreducibility"] = {
        {"asserted_by_user", opts.irreducible_asserted},
        {"note", "irreducibility of A is not machine-checked; the flatness-structure verdicts assume it"}};
    overall = check.overall;
  } else if (which == "projective") {
    if (metrics.size() != 2)
      throw InputError("check projective takes two metric names: FBAR F");
    const MetricSpec& bar = resolve(ctx, metrics[0]);
    const MetricSpec& base = resolve(ctx, metrics[1]);
    const verify::ProjectiveCheck check = verify::check_projective(bar, base, copts);
    checks.push_back(report_json(check.spray_comparison));
    if (check.sufficiency) checks.push_back(report_json(*check.sufficiency));
    if (check.reduction) checks.push_back(report_json(*check.reduction));
    double pmin = 0.0, pmax = 0.0, pmean = 0.0;
    if (!check.p_per_point.empty()) {
      pmin = *std::min_element(check.p_per_point.begin(), check.p_per_point.end());
      pmax = *std::max_element(check.p_per_point.begin(), check.p_per_point.end());
      pmean = std::accumulate(check.p_per_point.begin(), check.p_per_point.end(), 0.0) /
              static_cast<double>(check.p_per_point.size());
    }
    report["projective_factor"] = {{"min", pmin}, {"max", pmax}, {"mean", pmean}};
    if (check.rigidity_available)
      report["rigidity_scalar"] = {{"min_abs", check.rigidity_min_abs}, {"max_abs", check.rigidity_max_abs}};
    overall = check.overall;
  } else if (which == "conformal") {
    if (metrics.size() != 2)
      throw InputError("check conformal takes two metric names: FBAR FTILDE");
    const MetricSpec& bar = resolve(ctx, metrics[0]);
    const MetricSpec& tilde = resolve(ctx, metrics[1]);
    const verify::ConformalCheck check = verify::check_conformal(bar, tilde, copts);
    json alphas = json::array();
    for (size_t i = 0; i < check.alpha_per_x.size(); ++i)
      alphas.push_back({{"x", vec_json(check.x_samples[i])}, {"alpha", check.alpha_per_x[i]}});
    json c;
    c["name"] = "conformal";
    c["verdict"] = verify::to_string(check.overall);
    c["is_conformal"] = check.is_conformal;
    c["isometry"] = check.isometry;
    c["ratio_variation"] = check.ratio_variation;
    c["alpha_per_x"] = alphas;
    c["points_attempted"] = check.attempted;
    c["points_skipped"] = check.skipped;
    if (check.cartan_bar >= 0.0) {
      c["cartan_score_bar"] = check.cartan_bar;
      c["cartan_score_tilde"] = check.cartan_tilde;
    }
    if (check.reconstruction_residual >= 0.0)
      c["reconstruction_residual"] = check.reconstruction_residual;
    checks.push_back(c);
    overall = check.overall;
  } else {
    throw InputError("unknown check '" + which + "' (expected dual-flat, projective, conformal)");
  }

  report["checks"] = checks;
  report["verdict"] = verify::to_string(overall);
  emit(report, opts, out);
  for (const auto& c : checks)
    out << c["name"].get<std::string>() << ": " << c["verdict"].get<std::string>() << "\n";
  // timing goes to the console only; the JSON report stays byte-deterministic
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();
  out << "overall: " << verify::to_string(overall) << "  [" << elapsed << " ms]\n";
  return verdict_exit(overall);
}

int cmd_geodesic(const Options& opts, const std::string& metric, const Vec& x0, const Vec& y0,
                 double t_end, double step, const std::string& csv_path, std::ostream& out) {
  const Context ctx = load_context(opts);
  const MetricSpec& spec = resolve(ctx, metric);
  const int n = spec.dimension();
  if (static_cast<int>(x0.size()) != n || static_cast<int>(y0.size()) != n)
    throw InputError("start point dimension does not match metric dimension " +
                     std::to_string(n));
  json report = base_report(opts, "geodesic " + metric);
  report["metric"] = metric;
  report["geodesic_input"] = {{"x0", vec_json(x0)},
                              {"y0", vec_json(y0)},
                              {"t_end", t_end},
                              {"step", step}};
  GeodesicTrace trace;
  try {
    trace = geodesic_integrate(spec, x0, y0, t_end, step);
  } catch (const IntegrationError& e) {
    report["error"] = {{"type", "integration"}, {"message", e.what()}};
    emit(report, opts, out);
    out << "integration error: " << e.what() << "\n";
    return kExitFail;
  }

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw InputError("cannot write trace CSV to " + csv_path);
    csv << "t";
    for (int i = 1; i <= n; ++i) csv << ",x" << i;
    for (int i = 1; i <= n; ++i) csv << ",y" << i;
    csv << ",F\n";
    for (size_t s = 0; s < trace.times.size(); ++s) {
      csv << fmt_double(trace.times[s]);
      for (int i = 0; i < n; ++i) csv << "," << fmt_double(trace.positions[s][i]);
      for (int i = 0; i < n; ++i) csv << "," << fmt_double(trace.velocities[s][i]);
      csv << "," << fmt_double(trace.f_values[s]) << "\n";
    }
  }

  json summary;
  summary["steps"] = trace.times.empty() ? 0 : trace.times.size() - 1;
  summary["completed"] = trace.completed;
  if (!trace.stop_reason.empty()) summary["stop_reason"] = trace.stop_reason;
  summary["energy_drift"] = trace.energy_drift;
  summary["final_t"] = trace.times.empty() ? 0.0 : trace.times.back();
  if (!trace.positions.empty()) {
    summary["final_x"] = vec_json(trace.positions.back());
    summary["final_y"] = vec_json(trace.velocities.back());
  }
  report["geodesic"] = summary;
  emit(report, opts, out);
  out << "drift = " << fmt_double(trace.energy_drift)
      << (trace.completed ? "" : "  [truncated: " + trace.stop_reason + "]") << "\n";
  return trace.completed ? kExitPass : kExitFail;
}

}  // namespace run
}  // namespace finsler
