#include "ompbound/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ompbound/io.hpp"
#include "ompbound/omp.hpp"
#include "ompbound/ric.hpp"
#include "ompbound/rng.hpp"

namespace ompbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : known) {
      if (item.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ValidationError("config: unknown key '" + item.key() + "' in " + where);
    }
  }
}

SignalProfile parse_signal_profile(const json& j) {
  SignalProfile profile;
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "equal") {
      profile.kind = SignalProfile::Kind::equal;
    } else if (name == "gaussian_magnitudes") {
      profile.kind = SignalProfile::Kind::gaussian_magnitudes;
    } else {
      throw ValidationError("config: unknown signal_profile '" + name + "'");
    }
    return profile;
  }
  if (j.is_object() && j.contains("impulse")) {
    reject_unknown_keys(j, {"impulse"}, "signal_profile");
    const json& imp = j.at("impulse");
    reject_unknown_keys(imp, {"mar_ratio_target"}, "signal_profile.impulse");
    profile.kind = SignalProfile::Kind::impulse;
    profile.mar_ratio_target = imp.at("mar_ratio_target").get<double>();
    return profile;
  }
  throw ValidationError("config: signal_profile must be a profile name or {\"impulse\": ...}");
}

double parse_snr_value(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
    throw ValidationError("config: fixed snr must be a number or \"inf\"");
  }
  return j.get<double>();
}

SnrMode parse_snr_mode(const json& j) {
  SnrMode mode;
  if (!j.is_object() || j.size() != 1) {
    throw ValidationError("config: snr_mode must be {\"fixed\": ...} or {\"from_bound\": ...}");
  }
  if (j.contains("fixed")) {
    mode.kind = SnrMode::Kind::fixed;
    mode.fixed_value = parse_snr_value(j.at("fixed"));
    if (!(mode.fixed_value > 0.0)) {
      throw ValidationError("config: fixed snr must be positive");
    }
    return mode;
  }
  if (j.contains("from_bound")) {
    const json& fb = j.at("from_bound");
    reject_unknown_keys(fb, {"rule", "rho0", "theta1", "theta2", "tau"},
                        "snr_mode.from_bound");
    mode.kind = SnrMode::Kind::from_bound;
    mode.rule = bound_rule_from_string(fb.at("rule").get<std::string>());
    mode.rho0 = fb.at("rho0").get<double>();
    if (mode.rule == BoundRule::theorem1) {
      BoundParams params;
      params.delta = 0.0;  // filled per trial
      params.theta1 = fb.at("theta1").get<double>();
      params.theta2 = fb.contains("theta2") ? parse_snr_value(fb.at("theta2")) : kInf;
      params.tau = fb.contains("tau") ? fb.at("tau").get<double>() : 1.0;
      mode.theorem1_params = params;
    } else if (fb.contains("theta1") || fb.contains("theta2") || fb.contains("tau")) {
      throw ValidationError("config: theta/tau parameters apply only to rule theorem1");
    }
    return mode;
  }
  throw ValidationError("config: snr_mode must contain 'fixed' or 'from_bound'");
}

DeltaSource parse_delta_source(const json& j) {
  DeltaSource source;
  if (j.is_string()) {
    if (j.get<std::string>() != "exact_ric") {
      throw ValidationError("config: unknown delta_source '" + j.get<std::string>() + "'");
    }
    source.kind = DeltaSource::Kind::exact_ric;
    return source;
  }
  if (j.is_object() && j.contains("provided")) {
    reject_unknown_keys(j, {"provided"}, "delta_source");
    source.kind = DeltaSource::Kind::provided;
    source.value = j.at("provided").get<double>();
    if (!(source.value > 0.0 && source.value < 1.0)) {
      throw ValidationError("config: provided delta must lie in (0, 1)");
    }
    return source;
  }
  throw ValidationError("config: delta_source must be \"exact_ric\" or {\"provided\": ...}");
}

void validate_config(const ExperimentConfig& config) {
  if (config.m < 1 || config.n < 1 || config.sparsity < 1) {
    throw ValidationError("config: m, n, K must be positive");
  }
  if (!(config.sparsity <= config.m && config.m <= config.n)) {
    throw ValidationError("config: requires K <= m <= n");
  }
  if (config.trials < 1) throw ValidationError("config: trials must be >= 1");
  if (!(config.tau > 0.0 && config.tau <= 1.0)) {
    throw ValidationError("config: tau must lie in (0, 1]");
  }
  if (config.signal_profile.kind == SignalProfile::Kind::impulse &&
      !(config.signal_profile.mar_ratio_target >= 1.0)) {
    throw ValidationError("config: impulse mar_ratio_target must be >= 1");
  }
  if (config.snr_mode.kind == SnrMode::Kind::from_bound) {
    if (config.snr_mode.rule != BoundRule::corollary1 &&
        !(config.snr_mode.rho0 > 0.0 && config.snr_mode.rho0 < 1.0)) {
      throw ValidationError("config: from_bound rho0 must lie in (0, 1)");
    }
    if (config.snr_mode.theorem1_params) {
      // tau * K must be an integer for the coefficient bound to apply
      const double tk = config.snr_mode.theorem1_params->tau *
                        static_cast<double>(config.sparsity);
      if (std::abs(tk - std::round(tk)) > 1e-9) {
        throw ValidationError("config: theorem1 tau * K must be an integer");
      }
    }
    if (config.delta_source.kind == DeltaSource::Kind::exact_ric) {
      const std::uint64_t order = 2ULL * static_cast<std::uint64_t>(config.sparsity);
      const std::uint64_t count = binomial_capped(
          static_cast<std::uint64_t>(config.n), order, kDefaultRicCap + 1);
      if (count > kDefaultRicCap) {
        std::ostringstream os;
        os << "config: exact_ric needs C(" << config.n << ", " << order
           << ") within the enumeration cap " << kDefaultRicCap;
        throw CapacityError(os.str());
      }
    }
  }
}

struct TrialOutcome {
  TrialRecord record;
  bool full_violated = false;
};

BoundParams sweep_bound_params(const SnrMode& mode, double delta) {
  if (mode.rule == BoundRule::theorem1) {
    BoundParams p = *mode.theorem1_params;
    p.delta = delta;
    return p;
  }
  return preset_params(mode.rule, delta);
}

TrialOutcome run_trial(const ExperimentConfig& config, std::uint64_t index) {
  TrialOutcome outcome;
  TrialRecord& rec = outcome.record;
  rec.trial_index = index;
  rec.matrix_seed = derive_stream_seed(config.seed, index, 'M');
  rec.signal_seed = derive_stream_seed(config.seed, index, 'S');
  rec.noise_seed = derive_stream_seed(config.seed, index, 'N');

  const Matrix phi = gen_matrix(config.m, config.n, rec.matrix_seed,
                                config.ensemble, config.normalize_columns);
  const Vector x = gen_signal(config.n, config.sparsity, config.signal_profile,
                              rec.signal_seed);

  double delta;
  if (config.delta_source.kind == DeltaSource::Kind::exact_ric) {
    delta = ric_exact(phi, 2 * config.sparsity).delta;
  } else {
    delta = config.delta_source.value;
  }
  rec.delta_used = delta;

  const double norm_sq = x.squaredNorm();
  double x_min = kInf;
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) != 0.0) x_min = std::min(x_min, std::abs(x(i)));
  }
  const double mar_sq =
      norm_sq / (static_cast<double>(config.sparsity) * x_min * x_min);
  const double MAR = 1.0 / mar_sq;

  if (config.snr_mode.kind == SnrMode::Kind::fixed) {
    rec.snr_target = config.snr_mode.fixed_value;
  } else {
    const auto need =
        config.snr_mode.rule == BoundRule::theorem1
            ? required_snr(BoundRule::theorem1, delta, config.snr_mode.rho0, MAR,
                           sweep_bound_params(config.snr_mode, delta))
            : required_snr(config.snr_mode.rule, delta, config.snr_mode.rho0, MAR);
    rec.snr_target = need.snr;
  }

  const NoisyMeasurement meas = inject_noise(phi, x, rec.snr_target, rec.noise_seed);
  const OmpOutput out = omp_run({phi, meas.y, config.sparsity});

  const SignalStats stats = signal_stats(x, phi, meas.v);
  rec.snr_realized = stats.snr;
  rec.mar_ratio = stats.mar_ratio;
  rec.rho_error = error_rate(support_of(x), out.support);

  // Bound evaluation. Fixed-snr sweeps are judged against the
  // best-achievable preset (theta1 = 1/2, tau = 1, theta2 -> inf); the
  // corollary-1 headline is its fixed closed form.
  double headline;
  double full;
  if (config.snr_mode.kind == SnrMode::Kind::from_bound &&
      config.snr_mode.rule == BoundRule::corollary1) {
    headline = std::sqrt(delta) / ((1.0 - delta) * (1.0 - delta));
    const Coefficients coeffs = coefficients(sweep_bound_params(config.snr_mode, delta));
    full = error_rate_bound(coeffs, stats).full;
  } else {
    const BoundParams params =
        config.snr_mode.kind == SnrMode::Kind::from_bound
            ? sweep_bound_params(config.snr_mode, delta)
            : preset_params(BoundRule::corollary3, delta);
    const ErrorRateBound bound = error_rate_bound(coefficients(params), stats);
    headline = bound.headline;
    full = bound.full;
  }
  rec.bound_headline = headline;
  rec.violated = rec.rho_error > headline + 1e-12;
  outcome.full_violated = full < 1.0 && rec.rho_error > full + 1e-12;
  return outcome;
}

}  // namespace

Matrix gen_matrix(int m, int n, std::uint64_t seed, Ensemble ensemble,
                  bool normalize_columns) {
  if (m < 1 || n < 1) throw ValidationError("gen_matrix: dimensions must be positive");
  if (ensemble != Ensemble::gaussian) {
    throw ValidationError("gen_matrix: unsupported ensemble");
  }
  GaussianSampler rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Matrix phi(m, n);
  for (Index j = 0; j < n; ++j) {  // column-major draw order
    for (Index i = 0; i < m; ++i) {
      phi(i, j) = rng.standard_normal() * scale;
    }
  }
  if (normalize_columns) {
    for (Index j = 0; j < n; ++j) {
      const double norm = phi.col(j).norm();
      if (norm == 0.0) {
        std::ostringstream os;
        os << "gen_matrix: zero column " << j << " cannot be normalized";
        throw DegeneracyError(os.str());
      }
      phi.col(j) /= norm;
    }
  }
  return phi;
}

Vector gen_signal(int n, int sparsity, const SignalProfile& profile,
                  std::uint64_t seed) {
  if (sparsity < 1 || sparsity > n) {
    throw ValidationError("gen_signal: requires 1 <= K <= n");
  }
  if (profile.kind == SignalProfile::Kind::impulse) {
    if (!(profile.mar_ratio_target >= 1.0)) {
      throw ValidationError("gen_signal: impulse target ratio must be >= 1");
    }
    if (sparsity == 1 && profile.mar_ratio_target > 1.0 + 1e-9) {
      throw ValidationError(
          "gen_signal: impulse target above 1 is infeasible for K = 1");
    }
  }

  GaussianSampler rng(seed);

  // Draw order is fixed: support first (partial Fisher-Yates), then signs
  // and magnitudes in support-draw order.
  std::vector<Index> pool(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  IndexSet support(static_cast<std::size_t>(sparsity));
  for (int i = 0; i < sparsity; ++i) {
    const std::uint64_t pick =
        static_cast<std::uint64_t>(i) +
        rng.bounded(static_cast<std::uint64_t>(n - i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick)]);
    support[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(i)];
  }

  Vector x = Vector::Zero(n);
  switch (profile.kind) {
    case SignalProfile::Kind::equal:
      for (Index j : support) x(j) = rng.coin() ? 1.0 : -1.0;
      break;
    case SignalProfile::Kind::gaussian_magnitudes:
      for (Index j : support) {
        double g = rng.standard_normal();
        while (std::abs(g) < 1e-6) g = rng.standard_normal();
        x(j) = g;
      }
      break;
    case SignalProfile::Kind::impulse: {
      // One entry of magnitude a with (a^2 + K - 1)/K = t^2; the rest are
      // unit magnitude, so x_min = 1 and the norm ratio hits t exactly.
      const double t = profile.mar_ratio_target;
      const double a = std::sqrt(static_cast<double>(sparsity) * (t * t - 1.0) + 1.0);
      for (std::size_t i = 0; i < support.size(); ++i) {
        const double magnitude = i == 0 ? a : 1.0;
        x(support[i]) = rng.coin() ? magnitude : -magnitude;
      }
      break;
    }
  }
  return x;
}

NoisyMeasurement inject_noise(const Matrix& phi, const Vector& x,
                              double snr_target, std::uint64_t seed) {
  if (x.size() != phi.cols()) {
    throw ValidationError("inject_noise: signal length does not match matrix");
  }
  if (!(snr_target > 0.0)) {
    throw ValidationError("inject_noise: snr target must be positive or inf");
  }
  NoisyMeasurement meas;
  const Vector phi_x = phi * x;
  const double signal_norm = phi_x.norm();
  if (signal_norm == 0.0) {
    throw ValidationError("inject_noise: phi * x is zero, snr undefined");
  }
  if (std::isinf(snr_target)) {
    meas.v = Vector::Zero(phi.rows());
    meas.y = phi_x;
    return meas;
  }
  GaussianSampler rng(seed);
  Vector g(phi.rows());
  for (Index i = 0; i < g.size(); ++i) g(i) = rng.standard_normal();
  meas.v = g * (signal_norm / (std::sqrt(snr_target) * g.norm()));
  meas.y = phi_x + meas.v;
  return meas;
}

ExperimentConfig load_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config: top level must be an object");
  reject_unknown_keys(j,
                      {"m", "n", "K", "ensemble", "normalize_columns",
                       "signal_profile", "snr_mode", "delta_source", "trials",
                       "seed", "tau"},
                      "top level");
  ExperimentConfig config;
  try {
    config.m = j.at("m").get<int>();
    config.n = j.at("n").get<int>();
    config.sparsity = j.at("K").get<int>();
    config.trials = j.at("trials").get<std::uint64_t>();
    config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("ensemble")) {
      if (j.at("ensemble").get<std::string>() != "gaussian") {
        throw ValidationError("config: unknown ensemble");
      }
    }
    config.normalize_columns =
        j.contains("normalize_columns") ? j.at("normalize_columns").get<bool>() : true;
    if (j.contains("signal_profile")) {
      config.signal_profile = parse_signal_profile(j.at("signal_profile"));
    }
    config.snr_mode = parse_snr_mode(j.at("snr_mode"));
    config.delta_source = parse_delta_source(j.at("delta_source"));
    if (j.contains("tau")) config.tau = j.at("tau").get<double>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  validate_config(config);
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_config(buffer.str());
}

void write_records_csv_header(std::ostream& out) {
  out << "trial_index,matrix_seed,signal_seed,noise_seed,delta_used,snr_target,"
         "snr_realized,mar_ratio,rho_error,bound_headline,violated\n";
}

void write_record_csv(std::ostream& out, const TrialRecord& r) {
  out << r.trial_index << ',' << r.matrix_seed << ',' << r.signal_seed << ','
      << r.noise_seed << ',' << format_roundtrip(r.delta_used) << ','
      << format_roundtrip(r.snr_target) << ',' << format_roundtrip(r.snr_realized)
      << ',' << format_roundtrip(r.mar_ratio) << ',' << format_roundtrip(r.rho_error)
      << ',' << format_roundtrip(r.bound_headline) << ','
      << (r.violated ? "true" : "false") << '\n';
}

SweepResult run_sweep(const ExperimentConfig& config, unsigned max_threads,
                      std::ostream* records_csv) {
  validate_config(config);
  const std::uint64_t trials = config.trials;

  unsigned workers = max_threads == 0 ? std::thread::hardware_concurrency()
                                      : max_threads;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(
                                                         std::min<std::uint64_t>(
                                                             trials, 1024))));

  std::vector<TrialOutcome> outcomes(trials);
  std::vector<char> ready(trials, 0);

  if (records_csv) write_records_csv_header(*records_csv);

  std::mutex flush_mutex;
  std::uint64_t next_flush = 0;
  std::exception_ptr failure;
  std::uint64_t failure_index = trials;
  std::mutex failure_mutex;
  std::atomic<std::uint64_t> next_trial{0};
  std::atomic<bool> abort_flag{false};

  auto worker = [&]() {
    for (;;) {
      if (abort_flag.load(std::memory_order_relaxed)) return;
      const std::uint64_t i = next_trial.fetch_add(1, std::memory_order_relaxed);
      if (i >= trials) return;
      try {
        TrialOutcome outcome = run_trial(config, i);
        std::lock_guard<std::mutex> lock(flush_mutex);
        outcomes[i] = std::move(outcome);
        ready[i] = 1;
        // Stream every completed contiguous prefix in trial order so the
        // file content never depends on scheduling.
        while (next_flush < trials && ready[next_flush]) {
          if (records_csv) {
            write_record_csv(*records_csv, outcomes[next_flush].record);
            records_csv->flush();
          }
          ++next_flush;
        }
      } catch (...) {
        // Indices are handed out in order and in-flight trials run to
        // completion after the abort flag is raised, so the smallest
        // recorded index is the first failing trial regardless of
        // scheduling.
        {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (i < failure_index) {
            failure_index = i;
            try {
              std::ostringstream os;
              os << "sweep: trial " << i << " failed: ";
              try {
                throw;
              } catch (const std::exception& e) {
                os << e.what();
              }
              failure = std::make_exception_ptr(Error(os.str()));
            } catch (...) {
              failure = std::current_exception();
            }
          }
        }
        abort_flag.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  SweepResult result;
  result.records.reserve(trials);
  SweepSummary& summary = result.summary;
  summary.trials_run = trials;
  summary.mean_rho_error = 0.0;
  summary.max_rho_error = 0.0;
  summary.violation_count = 0;
  summary.violation_count_full = 0;
  double rho_sum = 0.0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const TrialOutcome& outcome = outcomes[i];
    rho_sum += outcome.record.rho_error;
    summary.max_rho_error = std::max(summary.max_rho_error, outcome.record.rho_error);
    if (outcome.record.violated) ++summary.violation_count;
    if (outcome.full_violated) ++summary.violation_count_full;
    result.records.push_back(outcome.record);
  }
  summary.mean_rho_error = rho_sum / static_cast<double>(trials);
  return result;
}

BoundReport verify_bound(const std::vector<TrialRecord>& records,
                         const SweepSummary& summary) {
  if (records.empty()) throw ValidationError("verify_bound: no records");
  BoundReport report;
  report.trials = records.size();
  report.full_violations = summary.violation_count_full;
  double rho_sum = 0.0;
  double rho_max = 0.0;
  std::uint64_t violations = 0;
  for (const TrialRecord& r : records) {
    rho_sum += r.rho_error;
    rho_max = std::max(rho_max, r.rho_error);
    if (r.rho_error > r.bound_headline + 1e-12) ++violations;
  }
  report.mean_rho_error = rho_sum / static_cast<double>(records.size());
  report.max_rho_error = rho_max;
  report.headline_violations = violations;
  report.consistent_with_summary =
      summary.trials_run == report.trials &&
      summary.violation_count == violations &&
      summary.max_rho_error == rho_max &&
      summary.mean_rho_error == report.mean_rho_error;
  return report;
}

std::string summary_text(const ExperimentConfig& config, const SweepSummary& s) {
  std::ostringstream os;
  os << "trials: " << s.trials_run << '\n'
     << "mean_rho_error: " << format_sig12(s.mean_rho_error) << '\n'
     << "max_rho_error: " << format_sig12(s.max_rho_error) << '\n'
     << "headline_violations: " << s.violation_count << '\n'
     << "full_bound_violations: " << s.violation_count_full << '\n';
  if (config.snr_mode.kind == SnrMode::Kind::from_bound &&
      config.snr_mode.rule != BoundRule::corollary1) {
    os << "target_rho0: " << format_sig12(config.snr_mode.rho0) << '\n';
  }
  return os.str();
}

std::string summary_csv(const SweepSummary& s) {
  std::ostringstream os;
  os << "trials_run,mean_rho_error,max_rho_error,violation_count,violation_count_full\n"
     << s.trials_run << ',' << format_roundtrip(s.mean_rho_error) << ','
     << format_roundtrip(s.max_rho_error) << ',' << s.violation_count << ','
     << s.violation_count_full << '\n';
  return os.str();
}

}  // namespace ompbound
