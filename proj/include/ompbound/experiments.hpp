#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ompbound/bounds.hpp"
#include "ompbound/numkernel.hpp"

namespace ompbound {

enum class Ensemble { gaussian };

struct SignalProfile {
  enum class Kind { equal, gaussian_magnitudes, impulse };
  Kind kind = Kind::equal;
  double mar_ratio_target = 1.0;  // impulse only; must be >= 1
};

struct SnrMode {
  enum class Kind { fixed, from_bound };
  Kind kind = Kind::fixed;
  double fixed_value = 0.0;  // may be +inf (noiseless)
  BoundRule rule = BoundRule::corollary3;
  double rho0 = 0.5;
  // theorem1 only; delta is filled per trial from the delta source
  std::optional<BoundParams> theorem1_params;
};

struct DeltaSource {
  enum class Kind { exact_ric, provided };
  Kind kind = Kind::exact_ric;
  double value = 0.0;  // provided only; must be in (0, 1)
};

struct ExperimentConfig {
  int m = 0;
  int n = 0;
  int sparsity = 0;  // JSON key "K"
  Ensemble ensemble = Ensemble::gaussian;
  bool normalize_columns = true;
  SignalProfile signal_profile;
  SnrMode snr_mode;
  DeltaSource delta_source;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  double tau = 1.0;  // diagnostics only
};

struct TrialRecord {
  std::uint64_t trial_index;
  std::uint64_t matrix_seed;
  std::uint64_t signal_seed;
  std::uint64_t noise_seed;
  double delta_used;
  double snr_target;
  double snr_realized;
  double mar_ratio;
  double rho_error;
  double bound_headline;
  bool violated;  // rho_error > bound_headline + 1e-12
};

struct SweepSummary {
  std::uint64_t trials_run;
  double mean_rho_error;
  double max_rho_error;
  std::uint64_t violation_count;       // headline bound
  std::uint64_t violation_count_full;  // full bound, counted only where it is < 1
};

struct SweepResult {
  std::vector<TrialRecord> records;
  SweepSummary summary;
};

/// Independent re-aggregation of a record list, for cross-checking a
/// streamed summary.
struct BoundReport {
  std::uint64_t trials;
  double mean_rho_error;
  double max_rho_error;
  std::uint64_t headline_violations;
  std::uint64_t full_violations;  // carried over from the summary
  bool consistent_with_summary;
};

/// Gaussian ensemble with i.i.d. mean-0 variance-1/m entries, drawn
/// column-major from the seeded generator; optionally rescales each column
/// to unit length. Deterministic in (m, n, seed).
Matrix gen_matrix(int m, int n, std::uint64_t seed, Ensemble ensemble,
                  bool normalize_columns);

/// K-sparse signal on a uniformly drawn support. Profiles: equal
/// (unit magnitudes, random signs), gaussian_magnitudes (standard normals,
/// resampled while below 1e-6 in magnitude), impulse(t) (one entry of
/// magnitude sqrt(K(t^2-1)+1) and K-1 unit entries, making the
/// norm-to-minimum ratio hit t).
Vector gen_signal(int n, int sparsity, const SignalProfile& profile,
                  std::uint64_t seed);

struct NoisyMeasurement {
  Vector y;
  Vector v;
};

/// y = phi x + v with v scaled along a seeded Gaussian direction so the
/// realized ||phi x||^2 / ||v||^2 equals snr_target exactly; +inf means
/// v = 0.
NoisyMeasurement inject_noise(const Matrix& phi, const Vector& x,
                              double snr_target, std::uint64_t seed);

ExperimentConfig load_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

/// Runs config.trials independent trials. Per-trial streams are derived as
/// seed ^ mix64(mix64(i) ^ tag) for tags 'M', 'S', 'N'. Records are
/// streamed to records_csv (when given) in trial order as soon as each
/// contiguous prefix completes, then aggregated in trial order, so output
/// is identical for any thread count. max_threads = 0 means hardware
/// concurrency.
SweepResult run_sweep(const ExperimentConfig& config, unsigned max_threads = 0,
                      std::ostream* records_csv = nullptr);

BoundReport verify_bound(const std::vector<TrialRecord>& records,
                         const SweepSummary& summary);

void write_records_csv_header(std::ostream& out);
void write_record_csv(std::ostream& out, const TrialRecord& r);
std::string summary_text(const ExperimentConfig& config, const SweepSummary& s);
std::string summary_csv(const SweepSummary& s);  // header + one row

}  // namespace ompbound
