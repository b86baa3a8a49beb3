// Output perturbation for ridge estimates: an isotropic exponential-tail
// noise law with density proportional to exp(-||v||_2 / scale), empirical
// sensitivity audits of the ridge map, analytic density-ratio audits of the
// privacy claim, and the epsilon ledger for the two-group release pattern.
#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "privreg/regression_core.hpp"
#include "privreg/rng.hpp"

namespace privreg {

// scale = (4B + 2M) / (gamma * epsilon), the calibration that matches the
// ridge sensitivity bound (4B + 2M) / gamma at privacy level epsilon.
struct NoiseScale {
  double B = 0.0;
  double M = 0.0;
  double gamma = 0.0;
  double epsilon = 0.0;
  double scale = 0.0;
};

NoiseScale make_noise_scale(double B, double M, double gamma, double epsilon);

struct PrivateEstimate {
  Eigen::VectorXd theta_private;  // theta_ridge + noise, exactly
  Eigen::VectorXd theta_ridge;
  Eigen::VectorXd noise;
};

// Epsilon bookkeeping for the mechanism's three releases: the two
// disjoint-group estimates compose in parallel at the per-release level,
// then sequentially with the full-data estimate.
struct PrivacyAccount {
  double per_release_epsilon = 0.0;
  double total_epsilon = 0.0;
};

PrivacyAccount algorithm_2_account(double epsilon);

// Draw from the density proportional to exp(-||v||_2 / scale): uniform
// sphere direction times a Gamma(shape d, scale) magnitude, the unique
// decomposition of a law depending on the norm alone.
Eigen::VectorXd sample_pl(int d, double scale, RngStream& rng);

// Add calibrated noise to a ridge estimate and keep the draw for audits.
PrivateEstimate perturb(const RidgeEstimate& ridge_est, double B, double M,
                        double epsilon, RngStream& rng);

// log of the noise-density ratio between two release centers evaluated at
// `point`; the triangle inequality caps it at ||center_a - center_b|| / scale.
double pl_log_density_ratio(const Eigen::VectorXd& point,
                            const Eigen::VectorXd& center_a,
                            const Eigen::VectorXd& center_b, double scale);

struct SensitivityAudit {
  double max_observed = 0.0;
  double bound = 0.0;  // k (4B + 2M) / gamma
  long violations = 0;
  long trials = 0;
};

// Over `trials` random worlds (ball-uniform rows, responses uniform in
// [-(B+M), B+M]), rerandomize k players and measure the ridge shift.
SensitivityAudit sensitivity_audit(int n, int d, double gamma, double B,
                                   double M, long trials, RngStream& rng,
                                   int k = 1);

struct DensityRatioAudit {
  double max_log_ratio = 0.0;
  double bound = 0.0;  // epsilon_claim
  double extremal_log_ratio = 0.0;  // constructed worst-case shift
  long violations = 0;
  long pairs = 0;
};

// For random center pairs at most scale * epsilon_claim apart (the largest
// shift the sensitivity bound allows), evaluate the analytic log ratio at
// noise draws from both centers plus the point where it peaks. Also scores
// one constructed extremal pair whose ratio equals epsilon_claim exactly.
DensityRatioAudit density_ratio_audit(int d, double scale,
                                      double epsilon_claim, long pairs,
                                      RngStream& rng);

}  // namespace privreg
