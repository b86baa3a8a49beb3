#include "privreg/agents.hpp"

#include <cmath>
#include <stdexcept>

namespace privreg {
namespace {

constexpr uint64_t kMechStreamTag = 0x6d656368;  // mechanism substream id

int sample_atom(const std::vector<double>& weights, RngStream& rng) {
  const double u = rng.uniform01();
  double acc = 0.0;
  for (size_t k = 0; k < weights.size(); ++k) {
    acc += weights[k];
    if (u < acc) return static_cast<int>(k);
  }
  return static_cast<int>(weights.size()) - 1;
}

double misreport_value(MisreportModel model, double truthful, double bound,
                       RngStream& rng) {
  switch (model) {
    case MisreportModel::kZero:
      return 0.0;
    case MisreportModel::kUniformRandom:
      return rng.uniform(-bound, bound);
    case MisreportModel::kClampExtreme:
      // The far end of the report range from the truthful response.
      return truthful >= 0.0 ? -bound : bound;
  }
  return 0.0;
}

}  // namespace

double privacy_cost(double c, double epsilon) {
  if (c < 0.0) throw std::invalid_argument("privacy cost: negative coefficient");
  if (epsilon < 0.0) throw std::invalid_argument("privacy cost: negative epsilon");
  return c * epsilon * epsilon;
}

double tau_threshold(double alpha, double beta, double p) {
  if (alpha <= 0.0 || alpha > 1.0)
    throw std::invalid_argument("tau threshold: alpha must lie in (0, 1]");
  if (beta <= 0.0 || beta > 1.0)
    throw std::invalid_argument("tau threshold: beta must lie in (0, 1]");
  if (p <= 1.0) throw std::invalid_argument("tau threshold: p must exceed 1");
  return std::max(std::pow(alpha * beta, -1.0 / p), std::pow(alpha, -1.0 / p));
}

StrategyProfile StrategyProfile::truthful() { return {}; }

StrategyProfile StrategyProfile::threshold(double tau, MisreportModel misreport,
                                           double report_bound) {
  StrategyProfile p;
  p.kind = StrategyKind::kThreshold;
  p.tau = tau;
  p.misreport = misreport;
  p.report_bound = report_bound;
  return p;
}

StrategyProfile StrategyProfile::single_deviation(int player, double delta) {
  StrategyProfile p;
  p.kind = StrategyKind::kSingleDeviation;
  p.deviation_player = player;
  p.deviation_delta = delta;
  return p;
}

void StrategyProfile::validate(int n) const {
  if (kind == StrategyKind::kThreshold) {
    if (tau < 0.0) throw std::invalid_argument("strategy: tau must be nonnegative");
    if (misreport != MisreportModel::kZero && report_bound <= 0.0)
      throw std::invalid_argument("strategy: misreport needs a report bound");
  }
  if (kind == StrategyKind::kSingleDeviation &&
      (deviation_player < 0 || deviation_player >= n))
    throw std::invalid_argument("strategy: deviation player out of range");
}

UtilityRecord make_utility(double payment, double privacy_cost) {
  UtilityRecord rec;
  rec.payment = payment;
  rec.privacy_cost = privacy_cost;
  rec.utility = payment - privacy_cost;
  return rec;
}

Eigen::VectorXd apply_strategy(const StrategyProfile& profile,
                               const World& world, RngStream& rng) {
  profile.validate(world.n());
  Eigen::VectorXd reports = world.responses;
  switch (profile.kind) {
    case StrategyKind::kTruthful:
      break;
    case StrategyKind::kThreshold:
      for (int i = 0; i < world.n(); ++i)
        if (world.costs(i) > profile.tau)
          reports(i) = misreport_value(profile.misreport, world.responses(i),
                                       profile.report_bound, rng);
      break;
    case StrategyKind::kSingleDeviation:
      reports(profile.deviation_player) += profile.deviation_delta;
      break;
  }
  return reports;
}

DeviationGain deviation_gain(const MechanismConfig& mech,
                             const WorldModel& model,
                             const PosteriorOracle& oracle,
                             const World& base_world, int player,
                             const std::vector<double>& delta_grid,
                             long trials, RngStream& rng,
                             MisreportModel others_misreport) {
  if (delta_grid.empty())
    throw std::invalid_argument("deviation gain: empty delta grid");
  if (trials < 1) throw std::invalid_argument("deviation gain: trials must be >= 1");
  if (player < 0 || player >= base_world.n())
    throw std::invalid_argument("deviation gain: player out of range");
  mech.validate();

  const Eigen::VectorXd x_i = base_world.features.row(player);
  const double y_i = base_world.responses(player);
  const std::vector<double> posterior = oracle.posterior_weights(x_i, y_i);

  const StrategyProfile others = StrategyProfile::threshold(
      mech.tau, others_misreport, mech.B + mech.M);

  const size_t arms = delta_grid.size();
  std::vector<double> sum(arms, 0.0), sumsq(arms, 0.0);

  const uint64_t salt = rng.next_u64();
  for (long t = 0; t < trials; ++t) {
    RngStream tr = rng.derive(salt, static_cast<uint64_t>(t));

    // Interim view: theta from the player's posterior, everyone else fresh.
    const Eigen::VectorXd theta =
        oracle.prior().support[sample_atom(posterior, tr)];
    World w = model.sample_given_theta(theta, tr);
    w.features.row(player) = x_i.transpose();
    w.noise(player) = base_world.noise(player);
    w.responses(player) = y_i;
    w.costs(player) = base_world.costs(player);

    Eigen::VectorXd reports = apply_strategy(others, w, tr);
    reports(player) = y_i;

    const RngStream mech_stream = tr.derive(kMechStreamTag);
    RngStream truth_stream = mech_stream;
    const MechanismOutcome truth =
        run_algorithm_2(w.features, reports, mech, oracle, truth_stream);
    const double truth_payment = truth.ledger.payments(player);

    for (size_t arm = 0; arm < arms; ++arm) {
      Eigen::VectorXd deviated = reports;
      deviated(player) = y_i + delta_grid[arm];
      // Same stream state as the truthful run: partition and noise pair up.
      RngStream arm_stream = mech_stream;
      const MechanismOutcome dev =
          run_algorithm_2(w.features, deviated, mech, oracle, arm_stream);
      const double g = dev.ledger.payments(player) - truth_payment;
      sum[arm] += g;
      sumsq[arm] += g * g;
    }
  }

  DeviationGain out;
  out.deltas = delta_grid;
  out.mean_gain.resize(arms);
  out.std_err.resize(arms);
  out.trials = trials;
  out.player_cost = base_world.costs(player);
  out.below_threshold = base_world.costs(player) <= mech.tau;
  size_t best = 0;
  for (size_t arm = 0; arm < arms; ++arm) {
    const double mean = sum[arm] / trials;
    const double var =
        trials > 1 ? std::max(0.0, (sumsq[arm] - trials * mean * mean) /
                                       (trials - 1))
                   : 0.0;
    out.mean_gain[arm] = mean;
    out.std_err[arm] = std::sqrt(var / trials);
    if (mean > out.mean_gain[best]) best = arm;
  }
  out.best_delta = delta_grid[best];
  out.gain = out.mean_gain[best];
  out.gain_std_err = out.std_err[best];
  return out;
}

DeviationGain deviation_gain(const MechanismConfig& mech,
                             const WorldModel& model,
                             const PosteriorOracle& oracle, int player,
                             const std::vector<double>& delta_grid,
                             long trials, RngStream& rng) {
  RngStream world_stream = rng.derive(1);
  const World base = model.sample(world_stream);
  return deviation_gain(mech, model, oracle, base, player, delta_grid, trials,
                        rng);
}

double eta_bound(const MechanismConfig& mech, double alpha, double xi,
                 double tau) {
  const double D =
      mech.gamma + (1.0 - xi) * static_cast<double>(mech.n) / (mech.d + 2.0);
  const double drift = alpha * mech.n * (4.0 * mech.B + 2.0 * mech.M) /
                           mech.gamma +
                       mech.gamma * mech.B / D;
  return mech.b * drift * drift + tau * mech.epsilon * mech.epsilon;
}

}  // namespace privreg
