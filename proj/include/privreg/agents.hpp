// Player behavior: the quadratic privacy-cost model, the participation
// threshold for Pareto-tailed costs, report strategies (truthful,
// threshold, single deviation), and a paired Monte Carlo search for the
// most profitable unilateral misreport.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "privreg/data_gen.hpp"
#include "privreg/mechanism.hpp"
#include "privreg/payments.hpp"
#include "privreg/rng.hpp"

namespace privreg {

// Cost of participating in an epsilon-private computation: c epsilon^2,
// the upper bound the guarantees are stated against.
double privacy_cost(double c, double epsilon);

// Threshold max{(alpha beta)^(-1/p), alpha^(-1/p)} under the Pareto tail
// Pr[c > t] = t^(-p): with probability at least 1 - beta, at least a
// (1 - alpha) fraction of sampled costs fall below it.
double tau_threshold(double alpha, double beta, double p);

enum class StrategyKind { kTruthful, kThreshold, kSingleDeviation };
enum class MisreportModel { kZero, kUniformRandom, kClampExtreme };

struct StrategyProfile {
  StrategyKind kind = StrategyKind::kTruthful;
  double tau = 0.0;  // threshold kind
  MisreportModel misreport = MisreportModel::kClampExtreme;
  int deviation_player = 0;      // single-deviation kind
  double deviation_delta = 0.0;  // single-deviation kind
  double report_bound = 0.0;  // legal report magnitude B + M for misreports

  static StrategyProfile truthful();
  static StrategyProfile threshold(double tau, MisreportModel misreport,
                                   double report_bound);
  static StrategyProfile single_deviation(int player, double delta);

  void validate(int n) const;
};

struct UtilityRecord {
  double payment = 0.0;
  double privacy_cost = 0.0;
  double utility = 0.0;  // payment - privacy_cost, exactly
};

UtilityRecord make_utility(double payment, double privacy_cost);

// Reports under a profile: truthful copies the responses; threshold keeps
// them for players with cost at most tau and applies the misreport model
// to the rest; single deviation shifts one player's response by delta.
Eigen::VectorXd apply_strategy(const StrategyProfile& profile,
                               const World& world, RngStream& rng);

struct DeviationGain {
  std::vector<double> deltas;
  std::vector<double> mean_gain;  // per delta, relative to reporting truly
  std::vector<double> std_err;    // per delta
  double best_delta = 0.0;
  double gain = 0.0;          // largest mean gain on the grid
  double gain_std_err = 0.0;  // standard error at the maximizer
  double player_cost = 0.0;
  bool below_threshold = false;
  long trials = 0;
};

// Interim expected gain from unilateral misreports y_i + delta while
// everyone else plays the threshold strategy. Per trial: draw theta from
// the player's exact posterior given her fixed (x_i, y_i), resample the
// other players' worlds given theta, then price every grid arm through
// the full mechanism under one shared randomness stream, so the delta = 0
// arm is identically zero and arm differences are tightly paired.
DeviationGain deviation_gain(const MechanismConfig& mech,
                             const WorldModel& model,
                             const PosteriorOracle& oracle,
                             const World& base_world, int player,
                             const std::vector<double>& delta_grid,
                             long trials, RngStream& rng,
                             MisreportModel others_misreport =
                                 MisreportModel::kClampExtreme);

// Same search with the reference world itself drawn from the model.
DeviationGain deviation_gain(const MechanismConfig& mech,
                             const WorldModel& model,
                             const PosteriorOracle& oracle, int player,
                             const std::vector<double>& delta_grid,
                             long trials, RngStream& rng);

// Truthfulness gap of the threshold equilibrium:
// b (alpha n (4B+2M)/gamma + gamma B / (gamma + (1-xi) n/(d+2)))^2
// + tau epsilon^2.
double eta_bound(const MechanismConfig& mech, double alpha, double xi,
                 double tau);

}  // namespace privreg
