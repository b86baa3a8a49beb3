// Synthetic world sampling: bounded parameter priors, features uniform on
// the unit ball, bounded zero-mean response noise, and Pareto-tailed
// privacy cost coefficients. Responses follow y_i = theta'x_i + z_i.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "privreg/rng.hpp"

namespace privreg {

enum class PriorKind { kDiscreteSupport, kTruncatedGaussian };

struct PriorSpec {
  PriorKind kind = PriorKind::kDiscreteSupport;

  // Discrete support: atoms with weights summing to 1.
  std::vector<Eigen::VectorXd> support;
  std::vector<double> weights;

  // Truncated gaussian: N(mean, stddev^2 I) conditioned on ||theta|| <= radius.
  Eigen::VectorXd mean;
  double stddev = 0.0;
  double radius = 0.0;

  double B = 0.0;  // every sampleable theta satisfies ||theta||^2 <= B

  static PriorSpec discrete(std::vector<Eigen::VectorXd> support,
                            std::vector<double> weights);
  static PriorSpec truncated_gaussian(Eigen::VectorXd mean, double stddev,
                                      double radius);

  int d() const;
  Eigen::VectorXd prior_mean() const;
  void validate() const;
};

enum class NoiseKind { kUniform, kTruncatedGaussian, kSymmetricDiscrete };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kUniform;
  double M = 0.0;       // support half-width: |z| <= M always
  double stddev = 0.0;  // pre-truncation scale (truncated gaussian only)

  static NoiseSpec uniform(double M);
  static NoiseSpec truncated_gaussian(double M, double stddev);
  static NoiseSpec symmetric_discrete(double M);

  double sigma2() const;  // exact variance implied by kind and M
  // Density of the noise law at z (uniform / truncated gaussian). The
  // symmetric-discrete law returns its point mass when z hits +-M within
  // a relative tolerance, else 0; used as a likelihood by the posterior.
  double likelihood(double z) const;
  void validate() const;
};

// Pareto(scale, p) cost coefficients: Pr[c <= t] = 1 - (t/scale)^-p for
// t >= scale. scale <= 1 keeps Pr[c <= t] >= 1 - t^-p pointwise.
struct CostSpec {
  double p = 2.0;
  double scale = 1.0;
  void validate() const;
};

struct World {
  Eigen::VectorXd theta;
  Eigen::MatrixXd features;  // n x d, rows inside the unit ball
  Eigen::VectorXd responses;
  Eigen::VectorXd noise;
  Eigen::VectorXd costs;
  int n() const { return static_cast<int>(features.rows()); }
  int d() const { return static_cast<int>(features.cols()); }
};

Eigen::VectorXd sample_theta(const PriorSpec& prior, RngStream& rng);
Eigen::MatrixXd sample_unit_ball(int n, int d, RngStream& rng);
Eigen::VectorXd sample_noise(const NoiseSpec& noise, int n, RngStream& rng);
Eigen::VectorXd sample_costs(const CostSpec& cost, int n, RngStream& rng);

World sample_world(const PriorSpec& prior, const NoiseSpec& noise,
                   const CostSpec& cost, int n, int d, RngStream& rng);

// Same but with theta held fixed (a conditional draw given the parameter).
World sample_world_given_theta(const Eigen::VectorXd& theta,
                               const NoiseSpec& noise, const CostSpec& cost,
                               int n, RngStream& rng);

// Bundles the three sampling specs with the population shape; the unit used
// by the experiment harness and the deviation search.
struct WorldModel {
  PriorSpec prior;
  NoiseSpec noise;
  CostSpec cost;
  int n = 0;
  int d = 0;
  void validate() const;
  World sample(RngStream& rng) const;
  World sample_given_theta(const Eigen::VectorXd& theta, RngStream& rng) const;
};

}  // namespace privreg
