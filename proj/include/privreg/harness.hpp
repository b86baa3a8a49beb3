// Experiment orchestration: the power-of-n parameter schedule, Monte Carlo
// sweeps over population sizes under a chosen strategy profile, per-trial
// quarantine, log-log slope fits with bootstrap confidence intervals, and
// deterministic CSV/JSON report emission.
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "privreg/agents.hpp"
#include "privreg/data_gen.hpp"
#include "privreg/mechanism.hpp"

namespace privreg {

// Explicit powers of n: gamma = n^{1-delta/2}, epsilon = n^{-1+delta},
// a = (6B+2M)(1+B)^2 n^{-3/2} + n^{-3/2+delta}, b = n^{-3/2},
// alpha = n^{-delta}, beta = n^{-p/2+delta(1+p)}, xi = 1/2,
// tau = tau_threshold(alpha, beta, p). Requires delta in (0, p/(2+2p)),
// the range on which beta stays a probability. sigma2 < 0 selects the
// variance of uniform noise on [-M, M].
MechanismConfig corollary_schedule(int n, double delta, double B, double M,
                                   double p, int d = 1, double sigma2 = -1.0);

enum class OffsetMode { kSchedule, kMinIr };

struct ExperimentSpec {
  std::vector<int> n_grid;  // strictly increasing
  int d = 1;
  double delta = 0.2;
  int trials = 1;
  uint64_t seed = 1;
  PriorSpec prior;
  NoiseSpec noise;
  CostSpec cost;
  StrategyKind strategy = StrategyKind::kThreshold;
  MisreportModel misreport = MisreportModel::kClampExtreme;
  std::string out_path;
  OffsetMode a_mode = OffsetMode::kSchedule;
  // Forced scoring parameters; NaN leaves the scheduled values in place.
  double a_override = std::numeric_limits<double>::quiet_NaN();
  double b_override = std::numeric_limits<double>::quiet_NaN();
  int probe_players = 0;        // misreport searches per probed n
  long deviation_trials = 200;  // paired trials per search
  std::vector<double> deviation_grid;  // empty -> default_deviation_grid()
  bool deviation_all_n = false;  // default: probe only the largest n
  int oracle_samples = 20000;    // posterior draws for non-discrete priors
  int jobs = 0;                  // 0 -> hardware concurrency

  // Strict parse of a flat JSON document; unknown keys are errors.
  static ExperimentSpec from_json(const std::string& text);
  static ExperimentSpec from_file(const std::string& path);

  void validate() const;
  MechanismConfig schedule_for(int n) const;
};

// Zero plus +-2^k 10^-2 for k = 0..7: geometric coverage of the legal
// deviation range at unit scale.
std::vector<double> default_deviation_grid();

struct ExperimentRow {
  int n = 0;
  double mse = 0.0;
  double mse_stderr = 0.0;
  double budget_mean = 0.0;
  double budget_stderr = 0.0;
  double ir_violation_fraction = 0.0;
  // NaN when the misreport search did not run at this n.
  double deviation_gain = std::numeric_limits<double>::quiet_NaN();
  double deviation_gain_stderr = std::numeric_limits<double>::quiet_NaN();
  double eta_bound = 0.0;
  double accuracy_bound = 0.0;
  double budget_bound = 0.0;
  double epsilon_total = 0.0;
};

struct SlopeFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double lo = std::numeric_limits<double>::quiet_NaN();  // 2.5% bootstrap
  double hi = std::numeric_limits<double>::quiet_NaN();  // 97.5% bootstrap
};

// Raw per-trial metrics for one population size; NaN marks a quarantined
// trial. Kept in the report so bound checks can audit every trial.
struct TrialSeries {
  int n = 0;
  std::vector<double> mse;
  std::vector<double> budget;
  std::vector<double> ir_fraction;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  SlopeFit mse_slope;  // OLS of log mean metric on log n
  SlopeFit budget_slope;
  long failed_trials = 0;
  std::vector<TrialSeries> trials;
};

// Deterministic given spec.seed and invariant to the job count: every
// trial draws from a stream keyed by (seed, n, trial index) and the
// reduction order is fixed.
ExperimentReport run_experiment(const ExperimentSpec& spec);

enum class ReportFormat { kCsv, kJson };

// CSV: fixed 12-column header plus one row per n. JSON: the full report,
// parseable back bitwise. Floats carry 17 significant digits; NaN becomes
// null in JSON and nan in CSV.
std::string render_report(const ExperimentReport& report, ReportFormat format);
void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::string& path);
ExperimentReport parse_report_json(const std::string& text);

}  // namespace privreg
