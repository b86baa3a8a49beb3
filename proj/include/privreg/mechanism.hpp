// The two regression mechanisms. The non-private one fits least squares on
// all reports and pays each player against her leave-one-out estimate. The
// private one partitions players into two groups, releases noised ridge
// estimates for the full data and each group, and pays each player against
// the opposite group's private estimate so that her own report never
// touches the estimator that prices her.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "privreg/data_gen.hpp"
#include "privreg/payments.hpp"
#include "privreg/privacy.hpp"
#include "privreg/regression_core.hpp"
#include "privreg/rng.hpp"

namespace privreg {

struct MechanismConfig {
  int n = 0;
  int d = 0;
  double gamma = 0.0;
  double epsilon = 0.0;
  double a = 0.0;
  double b = 0.0;
  double B = 0.0;
  double M = 0.0;
  double sigma2 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double xi = 0.0;
  double tau = 0.0;
  void validate() const;
};

struct PaymentLedger {
  Eigen::VectorXd payments;
  // Group index per player for the private mechanism; empty for the
  // non-private one. Sizes differ by at most one.
  std::vector<int> groups;
  double budget = 0.0;  // sum of payments, exactly
  // Posterior projection q_i = E[theta | x_i, y_hat_i]' x_i per player;
  // kept so expected-payment audits can reprice players exactly.
  Eigen::VectorXd posterior_proj;
};

struct MechanismOutcome {
  std::optional<PrivateEstimate> private_release;  // private mechanism
  std::optional<RidgeEstimate> plain_release;      // non-private mechanism
  std::vector<PrivateEstimate> group_estimates;    // private mechanism: {0, 1}
  PaymentLedger ledger;
};

// Least-squares mechanism. Requires n >= d + 2 and every leave-one-out
// normal system nonsingular; the leave-one-out estimates come from
// rank-one downdates of the full factorization.
MechanismOutcome run_algorithm_1(const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& y_reports, double a,
                                 double b, const PosteriorOracle& oracle);

// Private ridge mechanism: uniform partition into two near-equal groups,
// three independently noised ridge estimates (full, group 0, group 1),
// payments priced off the opposite group's private estimate.
MechanismOutcome run_algorithm_2(const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& y_reports,
                                 const MechanismConfig& config,
                                 const PosteriorOracle& oracle, RngStream& rng);

struct IrReport {
  long violations_below_threshold = 0;
  long below_threshold_count = 0;
  double fraction = 0.0;  // violations over below-threshold players
};

// Expected-utility rationality check for players with cost at most tau:
// the expected payment (scoring rule at the noiseless opposite-group ridge
// estimate, the exact mean over release noise) minus c_i epsilon^2.
IrReport ir_report(const MechanismOutcome& outcome, const World& world,
                   const MechanismConfig& config);

// Smallest offset a that makes the mechanism individually rational for
// every below-threshold player:
// (E + B)(b + 2bB) + bB^2 + tau epsilon^2 with
// E = alpha n (4B+2M)/gamma + gamma B / (gamma + (1-xi) n/(d+2)).
double min_a_for_ir(const MechanismConfig& config);

// Worst-case analyst budget n [a + (E + B)(b + 2bB)].
double budget_bound(const MechanismConfig& config);

// Explicit five-term bound on E||theta_private - theta||^2: bias, release
// noise second moment, regularization pull, estimator variance, and the
// bias cross-term.
double accuracy_bound(const MechanismConfig& config);

}  // namespace privreg
