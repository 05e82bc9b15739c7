// rmt_lab: command-line front end for the random-matrix laboratory.
#include <CLI11.hpp>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <json.hpp>

#include "rmt/charflow.hpp"
#include "rmt/config.hpp"
#include "rmt/errors.hpp"
#include "rmt/laws.hpp"
#include "rmt/montecarlo.hpp"
#include "rmt/output.hpp"
#include "rmt/variance.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rmt;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::string input;
};

int resolve_workers(const Options& opt, const LabConfig& cfg) {
  if (opt.workers) return *opt.workers;
  if (cfg.workers) return *cfg.workers;
  if (const char* env = std::getenv("RMT_LAB_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 4096)
      throw ConfigError("RMT_LAB_WORKERS: expected a positive integer, got '" + std::string(env) + "'");
    return static_cast<int>(v);
  }
  return hardware_workers();
}

json summary_head(const LabConfig& cfg) {
  return {{"command", to_string(cfg.command)}, {"config", json::parse(cfg.resolved_json)}, {"config_hash", cfg.hash}};
}

void write_summary(const fs::path& dir, const json& summary) {
  write_text_file(dir / "summary.json", summary.dump(2) + "\n");
}

json variance_json(const VarianceResult& v) {
  return {{"formula", to_string(v.formula)}, {"gaussian_part", v.gaussian_part},
          {"kappa4_part", v.kappa4_part},    {"total", v.total},
          {"est_error", v.est_error},        {"quadrature_order", v.quadrature_order},
          {"clamped", v.clamped}};
}

json reports_json(const std::vector<CltReport>& reports) {
  json out = json::array();
  for (const auto& r : reports) {
    json j = {{"n", r.n},
              {"part", r.part},
              {"outside_hypotheses", r.outside_hypotheses},
              {"replicas", r.replicas},
              {"sample_mean", r.sample_mean},
              {"sample_variance", r.sample_variance},
              {"variance_se", r.variance_se},
              {"variance_se_note", "Gaussian-limit approximation sqrt(2/(R-1)) * variance"},
              {"theory", variance_json(r.theory)},
              {"degenerate", r.degenerate}};
    if (r.distributional) {
      j["ks_statistic"] = r.ks_statistic;
      j["ks_pvalue"] = r.ks_pvalue;
      j["excess_kurtosis"] = r.excess_kurtosis;
      j["ecf_deviation"] = r.ecf_deviation;
    } else {
      j["distributional_tests"] = r.degenerate ? "skipped: zero theory variance" : "skipped: fewer than 30 replicas";
    }
    if (r.bound_check) {
      const auto& b = *r.bound_check;
      j["bound_check"] = b.applicable ? json{{"bound", b.bound}, {"margin", b.margin}, {"holds", b.holds}}
                                      : json{{"applicable", false}, {"note", b.note}};
    }
    out.push_back(j);
  }
  return out;
}

void print_reports(const std::vector<CltReport>& reports) {
  std::cout << std::setw(7) << "n" << std::setw(5) << "part" << std::setw(14) << "mean" << std::setw(14) << "variance" << std::setw(12)
            << "se" << std::setw(12) << "theory" << std::setw(10) << "ks" << '\n';
  for (const auto& r : reports) {
    std::cout << std::setw(7) << r.n << std::setw(5) << (r.part.empty() ? "-" : r.part) << std::setw(14) << r.sample_mean << std::setw(14) << r.sample_variance
              << std::setw(12) << r.variance_se << std::setw(12) << r.theory.total << std::setw(10);
    if (r.distributional)
      std::cout << r.ks_statistic;
    else
      std::cout << "-";
    std::cout << '\n';
  }
}

int cmd_simulate(const Options& opt, const LabConfig& cfg, const fs::path& out) {
  const ExperimentResult result = run_experiment(cfg.experiment(resolve_workers(opt, cfg)));
  const auto reports = clt_reports(cfg.experiment(1), result);
  write_replicas_csv(out / "replicas.csv", result, cfg.hash);
  write_report_csv(out / "report.csv", reports, cfg.hash);
  json summary = summary_head(cfg);
  summary["outputs"] = {"replicas.csv", "report.csv"};
  summary["reports"] = reports_json(reports);
  write_summary(out, summary);
  print_reports(reports);
  return 0;
}

int cmd_report(const Options& opt, const LabConfig& cfg, const fs::path& out) {
  const fs::path input = opt.input.empty() ? out / "replicas.csv" : fs::path(opt.input);
  std::string stored_hash;
  const ExperimentResult result = read_replicas_csv(input, &stored_hash);
  if (stored_hash != cfg.hash)
    std::cerr << "warning: " << input.string() << " was produced with config hash " << stored_hash
              << ", current config hashes to " << cfg.hash << '\n';
  const auto reports = clt_reports(cfg.experiment(1), result);
  write_report_csv(out / "report.csv", reports, cfg.hash);
  json summary = summary_head(cfg);
  summary["input"] = input.string();
  summary["input_config_hash"] = stored_hash;
  summary["outputs"] = {"report.csv"};
  summary["reports"] = reports_json(reports);
  write_summary(out, summary);
  print_reports(reports);
  return 0;
}

int cmd_theory(const LabConfig& cfg, const fs::path& out) {
  const TestFunction phi = cfg.test_function->make();
  const EnsembleSpec& spec = *cfg.ensemble;
  const VarianceResult v = theory_variance(spec, phi, cfg.order);
  std::ostringstream params;
  if (is_covariance(spec.family))
    params << "a2=" << spec.a2 << ";c=" << spec.aspect_ratio();
  else
    params << "w2=" << spec.w2;
  if (spec.family == Family::wigner || spec.family == Family::sample_covariance)
    params << ";kappa4=" << spec.kappa4();
  for (const auto& [k, val] : cfg.test_function->params) params << ";" << k << "=" << val;
  const TheoryRow row{v, phi.name(), params.str()};
  write_theory_csv(out / "theory.csv", {row}, cfg.hash);
  json summary = summary_head(cfg);
  summary["outputs"] = {"theory.csv"};
  summary["variance"] = variance_json(v);
  write_summary(out, summary);
  std::cout << "formula_tag,phi,parameters,gaussian_part,kappa4_part,total,est_error\n"
            << std::setprecision(12) << to_string(v.formula) << ',' << row.function << ',' << row.parameters
            << ',' << v.gaussian_part << ',' << v.kappa4_part << ',' << v.total << ',' << v.est_error << '\n';
  return 0;
}

int cmd_laws(const LabConfig& cfg, const fs::path& out) {
  const LawsRequest& req = *cfg.laws;
  json summary = summary_head(cfg);
  json outputs = {"density.csv"};
  write_density_csv(out / "density.csv", req.law, req.points, cfg.hash);
  const bool kernel = req.law.kind == LimitLaw::Kind::semicircle || req.law.c >= 1.0;
  if (kernel) {
    write_kernel_csv(out / "kernel.csv", req.law, 1.0 / 20.0, 20.0, cfg.hash);
    outputs.push_back("kernel.csv");
  } else {
    summary["kernel"] = "skipped: v_MP requires c >= 1";
  }
  summary["outputs"] = outputs;
  summary["law"] = {{"description", req.law.describe()},
                    {"lower_edge", req.law.lower_edge()},
                    {"upper_edge", req.law.upper_edge()},
                    {"atom_mass", req.law.atom_mass()}};
  write_summary(out, summary);
  std::cout << req.law.describe() << ": support [" << req.law.lower_edge() << ", " << req.law.upper_edge()
            << "], " << req.points << " density rows\n";
  return 0;
}

int cmd_volterra(const LabConfig& cfg, const fs::path& out) {
  const VolterraRequest& req = *cfg.volterra;
  const TestFunction phi = cfg.test_function->make();
  const VarianceResult v = variance_wigner(phi, req.w, req.kappa4, req.order);
  const double z = limiting_Z(req.x, v.total);
  const VolterraProblem problem =
      wigner_volterra_problem(phi, req.w, req.x, z, req.kappa4, req.step, req.horizon, req.order);
  const GridFunction y = solve_volterra(problem.kernel, problem.forcing);
  const GridFunction closed = closed_form_Y_grid(req.x, phi, req.w, z, req.step, req.horizon, req.order);
  write_volterra_csv(out / "volterra.csv", y, closed, cfg.hash);

  double sup = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) sup = std::max(sup, std::abs(y[k] - closed[k]));
  json summary = summary_head(cfg);
  summary["outputs"] = {"volterra.csv"};
  summary["variance"] = variance_json(v);
  summary["Z"] = z;
  summary["sup_abs_diff"] = sup;
  if (req.kappa4 != 0.0)
    summary["closed_form_note"] = "closed-form column is the kappa4 = 0 solution";
  if (phi.has_fourier()) {
    summary["z_derivative_volterra"] = z_derivative_from_Y(y, phi);
    summary["z_derivative_expected"] = -req.x * v.total * z;
  }
  write_summary(out, summary);
  std::cout << "sup |Y_volterra - Y_closed| = " << sup << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-matrix linear-statistics laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--config", opt.config_path, "JSON configuration file");
  app.add_option("--out", opt.out_dir, "Output directory (created if missing)");
  app.add_option("--set", opt.overrides, "Override a config key: key=value (repeatable)")->take_all();
  app.add_option("--workers", opt.workers, "Worker threads (env RMT_LAB_WORKERS as fallback)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "Base seed (overrides config)");

  std::string chosen;
  for (const char* name : {"simulate", "theory", "laws", "volterra", "report"}) {
    auto* sub = app.add_subcommand(name);
    sub->callback([&chosen, name] { chosen = name; });
    if (std::string(name) == "report")
      sub->add_option("--input", opt.input, "Replicas CSV (default <out>/replicas.csv)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const Command cmd = command_from_string(chosen);
    std::string text = "{}";
    if (!opt.config_path.empty()) text = read_text_file(opt.config_path);
    std::vector<std::string> overrides = opt.overrides;
    if (opt.seed) overrides.push_back("seed=" + std::to_string(*opt.seed));
    const LabConfig cfg = parse_config(text, cmd, overrides);
    const fs::path out(opt.out_dir);
    ensure_directory(out);
    switch (cmd) {
      case Command::simulate: return cmd_simulate(opt, cfg, out);
      case Command::report: return cmd_report(opt, cfg, out);
      case Command::theory: return cmd_theory(cfg, out);
      case Command::laws: return cmd_laws(cfg, out);
      case Command::volterra: return cmd_volterra(cfg, out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ArgumentError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const EvaluationError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
