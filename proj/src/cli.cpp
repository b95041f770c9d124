#include "ompbound/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ompbound/bounds.hpp"
#include "ompbound/experiments.hpp"
#include "ompbound/infotheory.hpp"
#include "ompbound/io.hpp"
#include "ompbound/omp.hpp"
#include "ompbound/ric.hpp"

namespace ompbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct OmpOptions {
  std::string matrix_path;
  std::string measurements_path;
  int sparsity = 0;
  std::string trace_path;
};

struct RicOptions {
  std::string matrix_path;
  int order = 0;
  std::uint64_t cap = kDefaultRicCap;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  bool sampled = false;
};

struct BoundsOptions {
  double delta = 0.0;
  double rho0 = 0.0;
  double mar_ratio = 1.0;
  double MAR = 1.0;
  bool have_mar_ratio = false;
  std::string rule = "theorem1";
  double theta1 = 0.5;
  double theta2 = kInf;
  double tau = 1.0;
};

struct CurveOptions {
  std::string rule;
  double rho0 = 0.0;
  double delta_min = 0.0;
  double delta_max = 0.0;
  int steps = 0;
  std::string out_path;
  double MAR = 1.0;
  double theta1 = 0.5;
  double theta2 = kInf;
  double tau = 1.0;
};

struct FeasibilityOptions {
  int n = 0;
  int m = 0;
  int sparsity = 0;
  double rho0 = 0.0;
  double snr = 0.0;
};

struct SweepOptions {
  std::string config_path;
  std::string out_dir;
};

void run_omp(const OmpOptions& opt, std::ostream& out) {
  const Matrix phi = load_matrix_csv(opt.matrix_path);
  const Vector y = load_vector(opt.measurements_path);
  const OmpOutput result = omp_run({phi, y, opt.sparsity});

  out << "support: " << format_index_set(result.support) << '\n';
  out << "estimate:";
  const Vector& coeffs = result.trace.back().estimate;
  for (Index i = 0; i < coeffs.size(); ++i) out << ' ' << format_sig12(coeffs(i));
  out << '\n';
  out << "residual_norm_sq: " << format_sig12(result.trace.back().residual_norm_sq)
      << '\n';

  if (!opt.trace_path.empty()) {
    std::ofstream trace(opt.trace_path);
    if (!trace) throw ValidationError("cannot open trace file: " + opt.trace_path);
    write_trace_csv(trace, result.trace);
  }
}

void run_ric(const RicOptions& opt, std::ostream& out) {
  const Matrix phi = load_matrix_csv(opt.matrix_path);
  const RicResult result =
      opt.sampled ? ric_sampled_lower_bound(phi, opt.order, opt.samples, opt.seed)
                  : ric_exact(phi, opt.order, opt.cap);

  out << result.order << ',' << format_sig12(result.delta) << ','
      << (result.exact ? "true" : "false") << ',' << format_index_set(result.witness)
      << '\n';

  nlohmann::json j;
  j["order"] = result.order;
  j["delta"] = result.delta;
  j["exact"] = result.exact;
  j["witness"] = result.witness;
  j["subsets_examined"] = result.subsets_examined;
  j["rip_holds"] = result.rip_holds;
  out << j.dump() << '\n';
}

void run_bounds(const BoundsOptions& opt, std::ostream& out) {
  const BoundRule rule = bound_rule_from_string(opt.rule);
  const double MAR =
      opt.have_mar_ratio ? 1.0 / (opt.mar_ratio * opt.mar_ratio) : opt.MAR;
  std::optional<BoundParams> params;
  if (rule == BoundRule::theorem1) {
    params = BoundParams{opt.delta, opt.theta1, opt.theta2, opt.tau};
  }
  const RequiredSnr need = required_snr(rule, opt.delta, opt.rho0, MAR, params);
  const BoundParams effective =
      rule == BoundRule::theorem1 ? *params : preset_params(rule, opt.delta);
  const Coefficients coeffs = coefficients(effective);

  out << "rule: " << opt.rule << '\n'
      << "delta: " << format_sig12(opt.delta) << '\n'
      << "MAR: " << format_sig12(MAR) << '\n'
      << "C1: " << format_sig12(coeffs.C1) << '\n'
      << "required_snr: " << format_sig12(need.snr) << '\n'
      << "error_bound: " << format_sig12(need.error_bound) << '\n';
}

void run_curve(const CurveOptions& opt, std::ostream&) {
  const BoundRule rule = bound_rule_from_string(opt.rule);
  std::optional<BoundParams> params;
  if (rule == BoundRule::theorem1) {
    params = BoundParams{0.0, opt.theta1, opt.theta2, opt.tau};
  }
  const auto grid = delta_grid(opt.delta_min, opt.delta_max, opt.steps);
  std::vector<std::pair<double, double>> curve;
  curve.reserve(grid.size());
  for (double delta : grid) {
    std::optional<BoundParams> point_params = params;
    if (point_params) point_params->delta = delta;
    curve.emplace_back(delta,
                       required_snr(rule, delta, opt.rho0, opt.MAR, point_params).snr);
  }
  std::ofstream file(opt.out_path);
  if (!file) throw ValidationError("cannot open output file: " + opt.out_path);
  write_curve_csv(file, curve);
}

void run_feasibility(const FeasibilityOptions& opt, std::ostream& out) {
  const double necessary = necessary_snr(opt.n, opt.m, opt.sparsity, opt.rho0);
  const double rho_max = feasibility_rho_max(opt.n, opt.m, opt.sparsity);
  const SufficientRegion region =
      sufficient_region({opt.n, opt.m, opt.sparsity, opt.rho0, opt.snr});
  const double min_rate = min_sampling_rate(opt.n, opt.sparsity, opt.rho0, opt.snr);

  out << "necessary_snr: " << format_sig12(necessary) << '\n'
      << "snr_meets_necessary: " << (opt.snr >= necessary ? "true" : "false") << '\n'
      << "min_sampling_rate: " << format_sig12(min_rate) << '\n'
      << "feasibility_rho_max: " << format_sig12(rho_max) << '\n'
      << "rho0_within_feasible: " << (opt.rho0 <= rho_max ? "true" : "false") << '\n'
      << "sufficient_snr_rho: " << (region.snr_rho_ok ? "true" : "false") << '\n'
      << "sufficient_rate: " << (region.rate_ok ? "true" : "false")
      << (region.rate_domain_degenerate ? " (degenerate: snr*rho0 <= e)" : "")
      << '\n'
      << "snr_rho_threshold: " << format_sig12(region.snr_rho_threshold) << '\n'
      << "threshold_below_4: " << (region.threshold_below_4 ? "true" : "false")
      << '\n';
}

unsigned thread_cap_from_env() {
  const char* env = std::getenv("OMPB_THREADS");
  if (!env || *env == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) {
    throw ValidationError("OMPB_THREADS must be a positive integer");
  }
  return static_cast<unsigned>(v);
}

void run_sweep_command(const SweepOptions& opt, std::ostream& out) {
  const ExperimentConfig config = load_config_file(opt.config_path);
  std::filesystem::create_directories(opt.out_dir);
  const auto records_path = std::filesystem::path(opt.out_dir) / "records.csv";
  std::ofstream records(records_path);
  if (!records) {
    throw ValidationError("cannot open records file: " + records_path.string());
  }
  const SweepResult result = run_sweep(config, thread_cap_from_env(), &records);
  records.close();

  const std::string text = summary_text(config, result.summary);
  std::ofstream summary_txt(std::filesystem::path(opt.out_dir) / "summary.txt");
  summary_txt << text;
  std::ofstream summary_file(std::filesystem::path(opt.out_dir) / "summary.csv");
  summary_file << summary_csv(result.summary);
  out << text;
}

}  // namespace

int run_command(const std::vector<std::string>& argv, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"greedy sparse support recovery, isometry certificates, and "
               "error-rate bound evaluation"};
  app.require_subcommand(1);

  OmpOptions omp_opt;
  auto* omp_cmd = app.add_subcommand(
      "omp", "recover a sparse support from measurements (indices are 0-based)");
  omp_cmd->add_option("--matrix", omp_opt.matrix_path, "matrix CSV file")->required();
  omp_cmd->add_option("--measurements", omp_opt.measurements_path,
                      "measurement vector file (one value per line)")
      ->required();
  omp_cmd->add_option("--sparsity", omp_opt.sparsity, "number of iterations K")
      ->required();
  omp_cmd->add_option("--trace", omp_opt.trace_path, "write per-iteration trace CSV");

  RicOptions ric_opt;
  auto* ric_cmd = app.add_subcommand(
      "ric", "restricted isometry constant of a matrix (0-based witness)");
  ric_cmd->add_option("--matrix", ric_opt.matrix_path, "matrix CSV file")->required();
  ric_cmd->add_option("--order", ric_opt.order, "subset size K")->required();
  ric_cmd->add_option("--cap", ric_opt.cap, "enumeration cap (default 1e6)");
  auto* samples_opt = ric_cmd->add_option(
      "--samples", ric_opt.samples, "sample subsets instead of enumerating");
  ric_cmd->add_option("--seed", ric_opt.seed, "sampling seed (default 0)");

  BoundsOptions bounds_opt;
  auto* bounds_cmd =
      app.add_subcommand("bounds", "required snr and error bound for a rule");
  bounds_cmd->add_option("--delta", bounds_opt.delta, "isometry constant delta_2K")
      ->required();
  bounds_cmd->add_option("--rho0", bounds_opt.rho0, "target error rate")->required();
  auto* mar_ratio_opt = bounds_cmd->add_option(
      "--mar-ratio", bounds_opt.mar_ratio, "norm-to-minimum ratio (>= 1)");
  auto* mar_opt =
      bounds_cmd->add_option("--MAR", bounds_opt.MAR, "minimum-to-average ratio");
  mar_ratio_opt->excludes(mar_opt);
  bounds_cmd->add_option("--rule", bounds_opt.rule,
                         "theorem1|corollary1|corollary2|corollary3");
  bounds_cmd->add_option("--theta1", bounds_opt.theta1, "theorem1 theta1 (default 0.5)");
  bounds_cmd->add_option("--theta2", bounds_opt.theta2, "theorem1 theta2 (default inf)");
  bounds_cmd->add_option("--tau", bounds_opt.tau, "theorem1 tau (default 1)");

  CurveOptions curve_opt;
  auto* curve_cmd =
      app.add_subcommand("curve", "required-snr curve over a delta grid, as CSV");
  curve_cmd->add_option("--rule", curve_opt.rule, "bound rule")->required();
  curve_cmd->add_option("--rho0", curve_opt.rho0, "target error rate")->required();
  curve_cmd->add_option("--delta-min", curve_opt.delta_min, "grid start")->required();
  curve_cmd->add_option("--delta-max", curve_opt.delta_max, "grid end")->required();
  curve_cmd->add_option("--steps", curve_opt.steps, "grid size")->required();
  curve_cmd->add_option("--out", curve_opt.out_path, "output CSV path")->required();
  curve_cmd->add_option("--MAR", curve_opt.MAR, "minimum-to-average ratio");
  curve_cmd->add_option("--theta1", curve_opt.theta1, "theorem1 theta1");
  curve_cmd->add_option("--theta2", curve_opt.theta2, "theorem1 theta2");
  curve_cmd->add_option("--tau", curve_opt.tau, "theorem1 tau");

  FeasibilityOptions feas_opt;
  auto* feas_cmd = app.add_subcommand(
      "feasibility", "information-theoretic recovery verdicts for a regime");
  feas_cmd->add_option("--n", feas_opt.n, "ambient dimension")->required();
  feas_cmd->add_option("--m", feas_opt.m, "measurement count")->required();
  feas_cmd->add_option("--K", feas_opt.sparsity, "sparsity")->required();
  feas_cmd->add_option("--rho0", feas_opt.rho0, "target error rate")->required();
  feas_cmd->add_option("--snr", feas_opt.snr, "signal-to-noise ratio")->required();

  SweepOptions sweep_opt;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "seeded Monte Carlo bound-violation sweep");
  sweep_cmd->add_option("--config", sweep_opt.config_path, "JSON config file")
      ->required();
  sweep_cmd->add_option("--out-dir", sweep_opt.out_dir, "output directory")
      ->required();

  try {
    std::vector<std::string> args(argv.rbegin(), argv.rend());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  }

  // Output is buffered so a failing command leaves stdout empty.
  std::ostringstream buffer;
  try {
    if (omp_cmd->parsed()) {
      run_omp(omp_opt, buffer);
    } else if (ric_cmd->parsed()) {
      ric_opt.sampled = samples_opt->count() > 0;
      run_ric(ric_opt, buffer);
    } else if (bounds_cmd->parsed()) {
      bounds_opt.have_mar_ratio = mar_ratio_opt->count() > 0;
      run_bounds(bounds_opt, buffer);
    } else if (curve_cmd->parsed()) {
      run_curve(curve_opt, buffer);
    } else if (feas_cmd->parsed()) {
      run_feasibility(feas_opt, buffer);
    } else if (sweep_cmd->parsed()) {
      run_sweep_command(sweep_opt, buffer);
    }
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  out << buffer.str();
  return 0;
}

}  // namespace ompbound
