#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ompbound/bounds.hpp"
#include "ompbound/experiments.hpp"
#include "ompbound/infotheory.hpp"
#include "ompbound/omp.hpp"
#include "ompbound/ric.hpp"
#include "ompbound/rng.hpp"

namespace py = pybind11;
using namespace ompbound;

namespace {

SignalProfile profile_from_python(const std::string& name, double mar_ratio_target) {
  SignalProfile profile;
  if (name == "equal") {
    profile.kind = SignalProfile::Kind::equal;
  } else if (name == "gaussian_magnitudes") {
    profile.kind = SignalProfile::Kind::gaussian_magnitudes;
  } else if (name == "impulse") {
    profile.kind = SignalProfile::Kind::impulse;
    profile.mar_ratio_target = mar_ratio_target;
  } else {
    throw ValidationError("unknown signal profile: " + name);
  }
  return profile;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "greedy sparse support recovery, isometry constants, and "
            "error-rate bounds";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DegeneracyError>(m, "DegeneracyError", PyExc_ArithmeticError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);

  py::class_<IterationRecord>(m, "IterationRecord")
      .def_readonly("k", &IterationRecord::k)
      .def_readonly("chosen_index", &IterationRecord::chosen_index)
      .def_readonly("max_abs_correlation", &IterationRecord::max_abs_correlation)
      .def_readonly("residual_norm_sq", &IterationRecord::residual_norm_sq)
      .def_readonly("estimate", &IterationRecord::estimate);

  py::class_<OmpOutput>(m, "OmpOutput")
      .def_readonly("support", &OmpOutput::support)
      .def_readonly("x_hat", &OmpOutput::x_hat)
      .def_readonly("trace", &OmpOutput::trace);

  py::class_<MissedSetStats>(m, "MissedSetStats")
      .def_readonly("gamma", &MissedSetStats::gamma)
      .def_readonly("gamma_tau", &MissedSetStats::gamma_tau)
      .def_readonly("x_tau", &MissedSetStats::x_tau)
      .def_readonly("tau", &MissedSetStats::tau);

  py::class_<RicResult>(m, "RicResult")
      .def_readonly("order", &RicResult::order)
      .def_readonly("delta", &RicResult::delta)
      .def_readonly("witness", &RicResult::witness)
      .def_readonly("subsets_examined", &RicResult::subsets_examined)
      .def_readonly("exact", &RicResult::exact)
      .def_readonly("rip_holds", &RicResult::rip_holds)
      .def("__repr__", [](const RicResult& r) {
        std::ostringstream os;
        os << "RicResult(order=" << r.order << ", delta=" << r.delta
           << ", exact=" << (r.exact ? "True" : "False") << ")";
        return os.str();
      });

  py::class_<SignalStats>(m, "SignalStats")
      .def_readonly("K", &SignalStats::sparsity)
      .def_readonly("x_min", &SignalStats::x_min)
      .def_readonly("x_max", &SignalStats::x_max)
      .def_readonly("mar_ratio", &SignalStats::mar_ratio)
      .def_readonly("MAR", &SignalStats::MAR)
      .def_readonly("snr", &SignalStats::snr);

  py::class_<Coefficients>(m, "Coefficients")
      .def_readonly("C1", &Coefficients::C1)
      .def_readonly("C2", &Coefficients::C2)
      .def_readonly("C3", &Coefficients::C3);

  py::class_<ErrorRateBound>(m, "ErrorRateBound")
      .def_readonly("headline", &ErrorRateBound::headline)
      .def_readonly("full", &ErrorRateBound::full)
      .def_readonly("headline_clamped", &ErrorRateBound::headline_clamped)
      .def_readonly("full_clamped", &ErrorRateBound::full_clamped);

  py::class_<SufficientRegion>(m, "SufficientRegion")
      .def_readonly("snr_rho_ok", &SufficientRegion::snr_rho_ok)
      .def_readonly("rate_ok", &SufficientRegion::rate_ok)
      .def_readonly("rate_domain_degenerate",
                    &SufficientRegion::rate_domain_degenerate)
      .def_readonly("snr_rho_threshold", &SufficientRegion::snr_rho_threshold)
      .def_readonly("threshold_below_4", &SufficientRegion::threshold_below_4);

  py::class_<TrialRecord>(m, "TrialRecord")
      .def_readonly("trial_index", &TrialRecord::trial_index)
      .def_readonly("matrix_seed", &TrialRecord::matrix_seed)
      .def_readonly("signal_seed", &TrialRecord::signal_seed)
      .def_readonly("noise_seed", &TrialRecord::noise_seed)
      .def_readonly("delta_used", &TrialRecord::delta_used)
      .def_readonly("snr_target", &TrialRecord::snr_target)
      .def_readonly("snr_realized", &TrialRecord::snr_realized)
      .def_readonly("mar_ratio", &TrialRecord::mar_ratio)
      .def_readonly("rho_error", &TrialRecord::rho_error)
      .def_readonly("bound_headline", &TrialRecord::bound_headline)
      .def_readonly("violated", &TrialRecord::violated);

  py::class_<SweepSummary>(m, "SweepSummary")
      .def_readonly("trials_run", &SweepSummary::trials_run)
      .def_readonly("mean_rho_error", &SweepSummary::mean_rho_error)
      .def_readonly("max_rho_error", &SweepSummary::max_rho_error)
      .def_readonly("violation_count", &SweepSummary::violation_count)
      .def_readonly("violation_count_full", &SweepSummary::violation_count_full);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("records", &SweepResult::records)
      .def_readonly("summary", &SweepResult::summary);

  // solver
  m.def(
      "omp_run",
      [](const Matrix& phi, const Vector& y, int sparsity) {
        return omp_run({phi, y, sparsity});
      },
      py::arg("phi"), py::arg("y"), py::arg("sparsity"),
      "Run greedy support recovery for exactly `sparsity` iterations.");
  m.def("select_index", &select_index, py::arg("phi"), py::arg("r"),
        py::arg("excluded") = IndexSet{});
  m.def("missed_set_stats", &missed_set_stats, py::arg("x"),
        py::arg("true_support"), py::arg("estimated_support"), py::arg("tau"));
  m.def("residual_decrease_diagnostic", &residual_decrease_diagnostic,
        py::arg("y"), py::arg("output"), py::arg("delta1"));
  m.def("support_of", &support_of, py::arg("x"));

  // isometry constants
  m.def("ric_exact", &ric_exact, py::arg("phi"), py::arg("order"),
        py::arg("cap") = kDefaultRicCap);
  m.def("ric_sampled_lower_bound", &ric_sampled_lower_bound, py::arg("phi"),
        py::arg("order"), py::arg("samples"), py::arg("seed"));

  // bounds
  m.def("signal_stats", &signal_stats, py::arg("x"), py::arg("phi"), py::arg("v"));
  m.def("error_rate", &error_rate, py::arg("true_support"),
        py::arg("estimated_support"));
  m.def(
      "coefficients",
      [](double delta, double theta1, double theta2, double tau) {
        return coefficients({delta, theta1, theta2, tau});
      },
      py::arg("delta"), py::arg("theta1"),
      py::arg("theta2") = std::numeric_limits<double>::infinity(),
      py::arg("tau") = 1.0);
  m.def(
      "error_rate_bound",
      [](const Coefficients& coeffs, const SignalStats& stats) {
        return error_rate_bound(coeffs, stats);
      },
      py::arg("coefficients"), py::arg("stats"));
  m.def(
      "required_snr",
      [](const std::string& rule, double delta, double rho0, double MAR,
         double theta1, double theta2, double tau) {
        const BoundRule parsed = bound_rule_from_string(rule);
        std::optional<BoundParams> params;
        if (parsed == BoundRule::theorem1) {
          params = BoundParams{delta, theta1, theta2, tau};
        }
        const RequiredSnr need = required_snr(parsed, delta, rho0, MAR, params);
        return py::make_tuple(need.snr, need.error_bound);
      },
      py::arg("rule"), py::arg("delta"), py::arg("rho0"), py::arg("MAR") = 1.0,
      py::arg("theta1") = 0.5,
      py::arg("theta2") = std::numeric_limits<double>::infinity(),
      py::arg("tau") = 1.0,
      "Returns (required_snr, guaranteed_error_bound) for the named rule.");
  m.def(
      "snr_delta_curve",
      [](const std::string& rule, double rho0, const std::vector<double>& grid,
         double MAR) {
        return snr_delta_curve(bound_rule_from_string(rule), rho0, grid, MAR);
      },
      py::arg("rule"), py::arg("rho0"), py::arg("delta_grid"), py::arg("MAR") = 1.0);
  m.def(
      "compare_error_constants",
      [](double delta) {
        const auto cmp = compare_error_constants(delta);
        return py::make_tuple(cmp.new_constant, cmp.old_constant);
      },
      py::arg("delta"),
      "Returns (new_constant, previously_published_constant) on (0, 0.25).");
  m.def("rho0_unity_crossing", &rho0_unity_crossing, py::arg("tol") = 1e-12);

  // information-theoretic limits
  m.def("binary_entropy", &binary_entropy, py::arg("x"));
  m.def("joint_entropy", &joint_entropy, py::arg("x"), py::arg("y"));
  m.def("necessary_snr", &necessary_snr, py::arg("n"), py::arg("m"), py::arg("K"),
        py::arg("rho0"));
  m.def("min_sampling_rate", &min_sampling_rate, py::arg("n"), py::arg("K"),
        py::arg("rho0"), py::arg("snr"));
  m.def("feasibility_rho_max", &feasibility_rho_max, py::arg("n"), py::arg("m"),
        py::arg("K"));
  m.def(
      "sufficient_region",
      [](int n, int m, int K, double rho0, double snr) {
        return sufficient_region({n, m, K, rho0, snr});
      },
      py::arg("n"), py::arg("m"), py::arg("K"), py::arg("rho0"), py::arg("snr"));

  // experiments
  m.def(
      "gen_matrix",
      [](int m, int n, std::uint64_t seed, bool normalize_columns) {
        return gen_matrix(m, n, seed, Ensemble::gaussian, normalize_columns);
      },
      py::arg("m"), py::arg("n"), py::arg("seed"),
      py::arg("normalize_columns") = true);
  m.def(
      "gen_signal",
      [](int n, int K, const std::string& profile, std::uint64_t seed,
         double mar_ratio_target) {
        return gen_signal(n, K, profile_from_python(profile, mar_ratio_target),
                          seed);
      },
      py::arg("n"), py::arg("K"), py::arg("profile"), py::arg("seed"),
      py::arg("mar_ratio_target") = 1.0);
  m.def(
      "inject_noise",
      [](const Matrix& phi, const Vector& x, double snr_target,
         std::uint64_t seed) {
        const auto meas = inject_noise(phi, x, snr_target, seed);
        return py::make_tuple(meas.y, meas.v);
      },
      py::arg("phi"), py::arg("x"), py::arg("snr_target"), py::arg("seed"),
      "Returns (y, v) with the realized snr hitting the target exactly.");
  m.def(
      "run_sweep",
      [](const std::string& config_json, unsigned max_threads) {
        return run_sweep(load_config(config_json), max_threads);
      },
      py::arg("config_json"), py::arg("max_threads") = 0,
      py::call_guard<py::gil_scoped_release>());
  m.def("derive_stream_seed", &derive_stream_seed, py::arg("base"),
        py::arg("index"), py::arg("tag"));
}
