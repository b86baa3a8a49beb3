#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "privreg/harness.hpp"
#include "privreg/privacy.hpp"

namespace {

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_schedule(const privreg::MechanismConfig& c) {
  std::string out = "{\n";
  out += "  \"n\": " + std::to_string(c.n) + ",\n";
  out += "  \"d\": " + std::to_string(c.d) + ",\n";
  const std::pair<const char*, double> fields[] = {
      {"gamma", c.gamma}, {"epsilon", c.epsilon}, {"a", c.a},
      {"b", c.b},         {"B", c.B},             {"M", c.M},
      {"sigma2", c.sigma2}, {"alpha", c.alpha},   {"beta", c.beta},
      {"xi", c.xi},       {"tau", c.tau}};
  for (const auto& [name, value] : fields)
    out += std::string("  \"") + name + "\": " + fmt_g(value) + ",\n";
  out += "  \"epsilon_total\": " +
         fmt_g(privreg::algorithm_2_account(c.epsilon).total_epsilon) + "\n}\n";
  std::cout << out;
}

std::string audit_record(const char* name, double bound, double max_observed,
                         long violations, long trials, uint64_t seed) {
  return std::string("  \"") + name + "\": {\"bound\": " + fmt_g(bound) +
         ", \"max_observed\": " + fmt_g(max_observed) +
         ", \"violations\": " + std::to_string(violations) +
         ", \"trials\": " + std::to_string(trials) +
         ", \"seed\": " + std::to_string(seed) + "}";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truthful private regression: schedules, audits, experiments"};
  app.require_subcommand(1);

  auto* sched = app.add_subcommand(
      "schedule", "Print the power-of-n parameter schedule for one n");
  int s_n = 0, s_d = 1;
  double s_delta = 0.0, s_b_bound = 1.0, s_m = 1.0, s_p = 2.0, s_sigma2 = -1.0;
  sched->add_option("--n", s_n, "population size")->required();
  sched->add_option("--delta", s_delta, "rate exponent in (0, p/(2+2p))")
      ->required();
  sched->add_option("--B", s_b_bound, "parameter norm-squared bound");
  sched->add_option("--M", s_m, "noise support half-width");
  sched->add_option("--p", s_p, "cost tail exponent");
  sched->add_option("--d", s_d, "feature dimension");
  sched->add_option("--sigma2", s_sigma2, "noise variance (< 0 means M^2/3)");

  auto* audit = app.add_subcommand(
      "audit",
      "Audit the ridge sensitivity bound and the release-noise density ratio");
  long a_trials = 1000;
  int a_n = 100, a_d = 2, a_k = 1;
  double a_gamma = 10.0, a_b_bound = 1.0, a_m = 1.0, a_epsilon = 0.25;
  uint64_t a_seed = 1;
  audit->add_option("--trials", a_trials, "worlds / center pairs per audit");
  audit->add_option("--n", a_n, "population size");
  audit->add_option("--d", a_d, "feature dimension");
  audit->add_option("--gamma", a_gamma, "ridge regularizer");
  audit->add_option("--seed", a_seed, "random seed");
  audit->add_option("--B", a_b_bound, "parameter norm-squared bound");
  audit->add_option("--M", a_m, "noise support half-width");
  audit->add_option("--epsilon", a_epsilon, "per-release privacy parameter");
  audit->add_option("--k", a_k, "players rerandomized per sensitivity trial");

  auto* experiment = app.add_subcommand(
      "experiment", "Run a Monte Carlo experiment from a JSON config");
  std::string e_config, e_out, e_format = "csv";
  uint64_t e_seed = 0;
  int e_jobs = 0;
  experiment->add_option("--config", e_config, "JSON config path")->required();
  experiment->add_option("--out", e_out,
                         "output path (default: config 'out', else stdout)");
  experiment->add_option("--format", e_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  auto* seed_opt =
      experiment->add_option("--seed", e_seed, "override the config seed");
  auto* jobs_opt =
      experiment->add_option("--jobs", e_jobs, "override the config jobs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sched) {
      print_schedule(privreg::corollary_schedule(s_n, s_delta, s_b_bound, s_m,
                                                 s_p, s_d, s_sigma2));
    } else if (*audit) {
      privreg::RngStream root(a_seed);
      privreg::RngStream sens_rng = root.derive(1);
      const privreg::SensitivityAudit sens = privreg::sensitivity_audit(
          a_n, a_d, a_gamma, a_b_bound, a_m, a_trials, sens_rng, a_k);
      const privreg::NoiseScale scale =
          privreg::make_noise_scale(a_b_bound, a_m, a_gamma, a_epsilon);
      privreg::RngStream ratio_rng = root.derive(2);
      const privreg::DensityRatioAudit ratio = privreg::density_ratio_audit(
          a_d, scale.scale, a_epsilon, a_trials, ratio_rng);
      std::cout << "{\n"
                << audit_record("sensitivity", sens.bound, sens.max_observed,
                                sens.violations, sens.trials, a_seed)
                << ",\n"
                << audit_record("density_ratio", ratio.bound,
                                ratio.max_log_ratio, ratio.violations,
                                ratio.pairs, a_seed)
                << "\n}\n";
      if (sens.violations > 0 || ratio.violations > 0) return 2;
    } else {
      privreg::ExperimentSpec spec = privreg::ExperimentSpec::from_file(e_config);
      if (seed_opt->count() > 0) spec.seed = e_seed;
      if (jobs_opt->count() > 0) spec.jobs = e_jobs;
      spec.validate();
      const privreg::ReportFormat format = e_format == "json"
                                               ? privreg::ReportFormat::kJson
                                               : privreg::ReportFormat::kCsv;
      const privreg::ExperimentReport report = privreg::run_experiment(spec);
      const std::string out_path = !e_out.empty() ? e_out : spec.out_path;
      if (out_path.empty())
        std::cout << privreg::render_report(report, format);
      else
        privreg::emit_report(report, format, out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
