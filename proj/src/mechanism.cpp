#include "privreg/mechanism.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace privreg {
namespace {

// Shared middle factor of the truthfulness, rationality, and budget
// bounds: worst-case drift of the opposite-group estimate projection.
double estimate_drift(const MechanismConfig& c) {
  const double D =
      c.gamma + (1.0 - c.xi) * static_cast<double>(c.n) / (c.d + 2.0);
  return c.alpha * c.n * (4.0 * c.B + 2.0 * c.M) / c.gamma +
         c.gamma * c.B / D;
}

}  // namespace

void MechanismConfig::validate() const {
  if (n < 2) throw std::invalid_argument("config: need at least two players");
  if (d < 1) throw std::invalid_argument("config: dimension must be positive");
  if (gamma <= 0.0) throw std::invalid_argument("config: gamma must be positive");
  if (epsilon <= 0.0) throw std::invalid_argument("config: epsilon must be positive");
  if (a < 0.0 || b < 0.0) throw std::invalid_argument("config: a and b must be nonnegative");
  if (B <= 0.0) throw std::invalid_argument("config: B must be positive");
  if (M < 0.0) throw std::invalid_argument("config: M must be nonnegative");
  if (sigma2 < 0.0) throw std::invalid_argument("config: sigma2 must be nonnegative");
  if (alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("config: alpha must lie in (0, 1)");
  if (beta <= 0.0 || beta > 1.0)
    throw std::invalid_argument("config: beta must lie in (0, 1]");
  if (xi <= 0.0 || xi >= 1.0)
    throw std::invalid_argument("config: xi must lie in (0, 1)");
  if (tau < 0.0) throw std::invalid_argument("config: tau must be nonnegative");
}

MechanismOutcome run_algorithm_1(const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& y_reports, double a,
                                 double b, const PosteriorOracle& oracle) {
  const int n = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  if (n < d + 2)
    throw std::invalid_argument("mechanism: need n >= d + 2 players");
  if (y_reports.size() != n)
    throw std::invalid_argument("mechanism: report count mismatch");

  const RidgeEstimate full = ridge(X, y_reports, 0.0);
  const Eigen::MatrixXd A = X.transpose() * X;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt = A.ldlt();

  const BrierParams params{a, b};
  MechanismOutcome out;
  out.plain_release = full;
  out.ledger.payments.resize(n);
  out.ledger.posterior_proj.resize(n);

  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd x = X.row(i);
    // Rank-one downdate of the (unregularized) normal equations.
    const Eigen::VectorXd u = ldlt.solve(x);
    const double denom = 1.0 - x.dot(u);
    if (denom <= 1e-12)
      throw SingularSystemError(
          "mechanism: leave-one-out system singular for player " +
          std::to_string(i));
    const Eigen::VectorXd theta_loo =
        full.theta_hat - u * (y_reports(i) - x.dot(full.theta_hat)) / denom;

    const Eigen::VectorXd post = oracle.posterior_mean(x, y_reports(i));
    out.ledger.posterior_proj(i) = post.dot(x);
    out.ledger.payments(i) =
        brier(params, theta_loo.dot(x), out.ledger.posterior_proj(i));
  }
  out.ledger.budget = out.ledger.payments.sum();
  return out;
}

MechanismOutcome run_algorithm_2(const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& y_reports,
                                 const MechanismConfig& config,
                                 const PosteriorOracle& oracle,
                                 RngStream& rng) {
  config.validate();
  const int n = static_cast<int>(X.rows());
  if (n != config.n)
    throw std::invalid_argument("mechanism: config population size mismatch");
  if (static_cast<int>(X.cols()) != config.d)
    throw std::invalid_argument("mechanism: config dimension mismatch");
  if (y_reports.size() != n)
    throw std::invalid_argument("mechanism: report count mismatch");

  // Uniform partition into two groups whose sizes differ by at most one.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  const int half = (n + 1) / 2;
  std::vector<int> group(n, 1);
  for (int k = 0; k < half; ++k) group[order[k]] = 0;

  const int d = config.d;
  Eigen::MatrixXd X0(half, d), X1(n - half, d);
  Eigen::VectorXd y0(half), y1(n - half);
  int i0 = 0, i1 = 0;
  for (int i = 0; i < n; ++i) {
    if (group[i] == 0) {
      X0.row(i0) = X.row(i);
      y0(i0++) = y_reports(i);
    } else {
      X1.row(i1) = X.row(i);
      y1(i1++) = y_reports(i);
    }
  }

  const RidgeEstimate full = ridge(X, y_reports, config.gamma);
  const RidgeEstimate r0 = ridge(X0, y0, config.gamma);
  const RidgeEstimate r1 = ridge(X1, y1, config.gamma);

  MechanismOutcome out;
  out.private_release = perturb(full, config.B, config.M, config.epsilon, rng);
  out.group_estimates.push_back(
      perturb(r0, config.B, config.M, config.epsilon, rng));
  out.group_estimates.push_back(
      perturb(r1, config.B, config.M, config.epsilon, rng));

  const BrierParams params{config.a, config.b};
  out.ledger.groups = std::move(group);
  out.ledger.payments.resize(n);
  out.ledger.posterior_proj.resize(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd x = X.row(i);
    const Eigen::VectorXd post = oracle.posterior_mean(x, y_reports(i));
    const int opposite = 1 - out.ledger.groups[i];
    out.ledger.posterior_proj(i) = post.dot(x);
    out.ledger.payments(i) =
        brier(params, out.group_estimates[opposite].theta_private.dot(x),
              out.ledger.posterior_proj(i));
  }
  out.ledger.budget = out.ledger.payments.sum();
  return out;
}

IrReport ir_report(const MechanismOutcome& outcome, const World& world,
                   const MechanismConfig& config) {
  if (outcome.group_estimates.size() != 2)
    throw std::invalid_argument("ir report: needs a private-mechanism outcome");
  const int n = world.n();
  if (static_cast<int>(outcome.ledger.groups.size()) != n ||
      outcome.ledger.posterior_proj.size() != n)
    throw std::invalid_argument("ir report: outcome and world disagree on n");

  const BrierParams params{config.a, config.b};
  IrReport rep;
  for (int i = 0; i < n; ++i) {
    if (world.costs(i) > config.tau) continue;
    ++rep.below_threshold_count;
    const int opposite = 1 - outcome.ledger.groups[i];
    // Expected payment over release noise: the rule is affine in its first
    // argument and the noise is centered, so plugging the noiseless ridge
    // estimate in is exact.
    const double expected_payment =
        brier(params,
              outcome.group_estimates[opposite].theta_ridge.dot(
                  world.features.row(i)),
              outcome.ledger.posterior_proj(i));
    const double cost = world.costs(i) * config.epsilon * config.epsilon;
    if (expected_payment - cost < 0.0) ++rep.violations_below_threshold;
  }
  rep.fraction = rep.below_threshold_count == 0
                     ? 0.0
                     : static_cast<double>(rep.violations_below_threshold) /
                           static_cast<double>(rep.below_threshold_count);
  return rep;
}

double min_a_for_ir(const MechanismConfig& config) {
  const double drift = estimate_drift(config);
  return (drift + config.B) * (config.b + 2.0 * config.b * config.B) +
         config.b * config.B * config.B +
         config.tau * config.epsilon * config.epsilon;
}

double budget_bound(const MechanismConfig& config) {
  const double drift = estimate_drift(config);
  return config.n *
         (config.a +
          (drift + config.B) * (config.b + 2.0 * config.b * config.B));
}

double accuracy_bound(const MechanismConfig& config) {
  const double four_b_two_m = 4.0 * config.B + 2.0 * config.M;
  const double D = config.gamma +
                   (1.0 - config.xi) * static_cast<double>(config.n) /
                       (config.d + 2.0);
  const double misreport = config.alpha * config.n * four_b_two_m / config.gamma;
  const double noise_scale = four_b_two_m / (config.gamma * config.epsilon);
  const double pull = config.gamma * config.B / D;
  const double variance_factor =
      (1.0 + config.xi) * static_cast<double>(config.n) / (config.d + 2.0) /
      (D * D);
  const double ridge_error = (config.gamma * config.B + config.M * config.n) / D;

  return misreport * misreport + 2.0 * noise_scale * noise_scale +
         pull * pull +
         config.sigma2 * config.sigma2 * variance_factor * variance_factor +
         2.0 * (misreport + noise_scale) * ridge_error;
}

}  // namespace privreg
