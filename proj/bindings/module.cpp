// Python bindings for the main operations: parameter schedules, closed-form
// bounds, the scoring rule, ridge regression, the samplers, the privacy
// audits, and the full experiment harness (JSON config in, JSON report out).

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "privreg/agents.hpp"
#include "privreg/data_gen.hpp"
#include "privreg/harness.hpp"
#include "privreg/mechanism.hpp"
#include "privreg/payments.hpp"
#include "privreg/privacy.hpp"
#include "privreg/regression_core.hpp"
#include "privreg/rng.hpp"

namespace py = pybind11;
using namespace privreg;

namespace {

std::string run_experiment_json(const std::string& config_text) {
  ExperimentSpec spec = ExperimentSpec::from_json(config_text);
  spec.validate();
  const ExperimentReport report = run_experiment(spec);
  return render_report(report, ReportFormat::kJson);
}

std::string run_experiment_csv(const std::string& config_text) {
  ExperimentSpec spec = ExperimentSpec::from_json(config_text);
  spec.validate();
  const ExperimentReport report = run_experiment(spec);
  return render_report(report, ReportFormat::kCsv);
}

}  // namespace

PYBIND11_MODULE(privreg, m) {
  m.doc() =
      "Truthful private linear regression: schedules, bounds, samplers, "
      "privacy audits, and the experiment harness.";

  py::class_<MechanismConfig>(m, "MechanismConfig")
      .def(py::init<>())
      .def_readwrite("n", &MechanismConfig::n)
      .def_readwrite("d", &MechanismConfig::d)
      .def_readwrite("gamma", &MechanismConfig::gamma)
      .def_readwrite("epsilon", &MechanismConfig::epsilon)
      .def_readwrite("a", &MechanismConfig::a)
      .def_readwrite("b", &MechanismConfig::b)
      .def_readwrite("B", &MechanismConfig::B)
      .def_readwrite("M", &MechanismConfig::M)
      .def_readwrite("sigma2", &MechanismConfig::sigma2)
      .def_readwrite("alpha", &MechanismConfig::alpha)
      .def_readwrite("beta", &MechanismConfig::beta)
      .def_readwrite("xi", &MechanismConfig::xi)
      .def_readwrite("tau", &MechanismConfig::tau)
      .def("validate", &MechanismConfig::validate)
      .def("__repr__", [](const MechanismConfig& c) {
        std::ostringstream out;
        out << "MechanismConfig(n=" << c.n << ", d=" << c.d
            << ", gamma=" << c.gamma << ", epsilon=" << c.epsilon
            << ", a=" << c.a << ", b=" << c.b << ", tau=" << c.tau << ")";
        return out.str();
      });

  m.def("corollary_schedule", &corollary_schedule, py::arg("n"),
        py::arg("delta"), py::arg("B"), py::arg("M"), py::arg("p"),
        py::arg("d") = 1, py::arg("sigma2") = -1.0,
        "Polynomial parameter schedule in n; sigma2 < 0 means the uniform "
        "noise variance M^2/3.");

  m.def(
      "tau_threshold",
      [](double alpha, double beta, double p) {
        return tau_threshold(alpha, beta, p);
      },
      py::arg("alpha"), py::arg("beta"), py::arg("p"),
      "Participation cost threshold max((alpha beta)^(-1/p), alpha^(-1/p)).");

  m.def(
      "privacy_cost",
      [](double c, double epsilon) { return privacy_cost(c, epsilon); },
      py::arg("c"), py::arg("epsilon"),
      "Per-player privacy disutility c * epsilon^2.");

  m.def(
      "eta_bound",
      [](const MechanismConfig& config) {
        return eta_bound(config, config.alpha, config.xi, config.tau);
      },
      py::arg("config"), "Truthfulness gap of the threshold equilibrium.");

  m.def("min_a_for_ir", &min_a_for_ir, py::arg("config"),
        "Smallest offset a that keeps every below-threshold player rational.");

  m.def("budget_bound", &budget_bound, py::arg("config"),
        "Worst-case total payment n (a + (E + B)(b + 2 b B)).");

  m.def("accuracy_bound", &accuracy_bound, py::arg("config"),
        "Explicit bound on E||theta_private - theta||^2.");

  m.def(
      "brier",
      [](double p, double q, double a, double b) {
        return brier(BrierParams{a, b}, p, q);
      },
      py::arg("p"), py::arg("q"), py::arg("a") = 0.0, py::arg("b") = 1.0,
      "Quadratic score a - b (p - 2 p q + q^2), uniquely maximized at q = p.");

  m.def(
      "ridge",
      [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double gamma) {
        return ridge(X, y, gamma).theta_hat;
      },
      py::arg("X"), py::arg("y"), py::arg("gamma"),
      "Ridge estimate (gamma I + X'X)^(-1) X'y.");

  m.def(
      "loss",
      [](const Eigen::VectorXd& theta, const Eigen::MatrixXd& X,
         const Eigen::VectorXd& y, double gamma) {
        return loss(theta, X, y, gamma);
      },
      py::arg("theta"), py::arg("X"), py::arg("y"), py::arg("gamma"),
      "Regularized squared-error objective.");

  m.def(
      "sample_unit_ball",
      [](int n, int d, std::uint64_t seed) {
        RngStream rng(seed);
        return sample_unit_ball(n, d, rng);
      },
      py::arg("n"), py::arg("d"), py::arg("seed"),
      "n uniform draws from the d-dimensional unit ball, one per row.");

  m.def(
      "sample_release_noise",
      [](int d, double scale, int n, std::uint64_t seed) {
        RngStream rng(seed);
        Eigen::MatrixXd out(n, d);
        for (int i = 0; i < n; ++i) out.row(i) = sample_pl(d, scale, rng);
        return out;
      },
      py::arg("d"), py::arg("scale"), py::arg("n"), py::arg("seed"),
      "n draws of the release noise with density proportional to "
      "exp(-||v|| / scale), one per row.");

  m.def(
      "sensitivity_audit",
      [](int n, int d, double gamma, double B, double M, long trials,
         std::uint64_t seed, int k) {
        RngStream rng(seed);
        const SensitivityAudit audit =
            sensitivity_audit(n, d, gamma, B, M, trials, rng, k);
        py::dict out;
        out["max_observed"] = audit.max_observed;
        out["bound"] = audit.bound;
        out["violations"] = audit.violations;
        out["trials"] = audit.trials;
        return out;
      },
      py::arg("n"), py::arg("d"), py::arg("gamma"), py::arg("B") = 1.0,
      py::arg("M") = 1.0, py::arg("trials") = 1000, py::arg("seed") = 1,
      py::arg("k") = 1,
      "Randomized audit of the ridge sensitivity bound k(4B+2M)/gamma.");

  m.def(
      "density_ratio_audit",
      [](int d, double B, double M, double gamma, double epsilon, long pairs,
         std::uint64_t seed) {
        RngStream rng(seed);
        const NoiseScale scale = make_noise_scale(B, M, gamma, epsilon);
        const DensityRatioAudit audit =
            density_ratio_audit(d, scale.scale, epsilon, pairs, rng);
        py::dict out;
        out["max_log_ratio"] = audit.max_log_ratio;
        out["bound"] = audit.bound;
        out["extremal_log_ratio"] = audit.extremal_log_ratio;
        out["violations"] = audit.violations;
        out["pairs"] = audit.pairs;
        return out;
      },
      py::arg("d"), py::arg("B"), py::arg("M"), py::arg("gamma"),
      py::arg("epsilon"), py::arg("pairs") = 1000, py::arg("seed") = 1,
      "Randomized audit that release-noise log density ratios between "
      "neighboring centers stay within epsilon.");

  m.def("run_experiment_json", &run_experiment_json, py::arg("config"),
        "Run the experiment described by a JSON config string; returns the "
        "JSON report.");

  m.def("run_experiment_csv", &run_experiment_csv, py::arg("config"),
        "Run the experiment described by a JSON config string; returns the "
        "CSV report.");
}
