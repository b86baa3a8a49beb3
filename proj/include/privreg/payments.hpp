// Payment primitives: the rescaled quadratic scoring rule
// B_{a,b}(p, q) = a - b (p - 2pq + q^2), strictly proper in q and affine in
// p, plus posterior-mean oracles that turn a player's report into the
// rule's second argument.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "privreg/data_gen.hpp"
#include "privreg/rng.hpp"

namespace privreg {

struct BrierParams {
  double a = 0.0;
  double b = 1.0;
  void validate() const;  // b > 0
};

double brier(const BrierParams& params, double p, double q);

enum class OracleKind { kExactDiscrete, kMonteCarlo };

// Computes E[theta | x, y_report] under a world prior and noise law.
// The exact variant applies the Bayes rule over a finite prior support;
// the Monte Carlo variant self-normalizes joint prior draws under a
// kernel-smoothed response likelihood and works for any prior.
class PosteriorOracle {
 public:
  static PosteriorOracle exact_discrete(PriorSpec prior, NoiseSpec noise);
  static PosteriorOracle monte_carlo(PriorSpec prior, NoiseSpec noise,
                                     int mc_samples, RngStream& rng);

  // Reports incompatible with every parameter value (zero total
  // likelihood) fall back to the prior mean so arbitrary misreports can
  // still be priced.
  Eigen::VectorXd posterior_mean(const Eigen::VectorXd& x,
                                 double y_report) const;

  // Per-atom posterior probabilities (exact-discrete only); falls back to
  // the prior weights on zero total likelihood.
  std::vector<double> posterior_weights(const Eigen::VectorXd& x,
                                        double y_report) const;

  OracleKind kind() const { return kind_; }
  const PriorSpec& prior() const { return prior_; }
  const NoiseSpec& noise() const { return noise_; }

 private:
  PosteriorOracle() = default;

  OracleKind kind_ = OracleKind::kExactDiscrete;
  PriorSpec prior_;
  NoiseSpec noise_;
  int mc_samples_ = 0;
  double bandwidth_ = 0.0;
  // Joint prior draws (theta_j, z_j) frozen at construction; read-only
  // afterwards so concurrent evaluation is safe.
  std::vector<Eigen::VectorXd> mc_thetas_;
  std::vector<double> mc_noises_;
};

// brier(params, estimator'x, posterior'x): the per-player payment with the
// released estimate projected onto the player's features against the
// posterior projection implied by the player's report.
double payment(const BrierParams& params, const Eigen::VectorXd& estimator,
               const Eigen::VectorXd& x, const Eigen::VectorXd& posterior);

}  // namespace privreg
