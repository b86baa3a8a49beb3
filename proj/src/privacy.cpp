#include "privreg/privacy.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "privreg/data_gen.hpp"

namespace privreg {
namespace {

Eigen::VectorXd sphere_direction(int d, RngStream& rng) {
  Eigen::VectorXd u(d);
  double norm = 0.0;
  do {
    for (int i = 0; i < d; ++i) u(i) = rng.normal();
    norm = u.norm();
  } while (norm < 1e-300);
  return u / norm;
}

}  // namespace

NoiseScale make_noise_scale(double B, double M, double gamma, double epsilon) {
  if (B < 0.0 || M < 0.0 || 4.0 * B + 2.0 * M <= 0.0)
    throw std::invalid_argument("noise scale: need 4B + 2M > 0");
  if (gamma <= 0.0) throw std::invalid_argument("noise scale: gamma must be positive");
  if (epsilon <= 0.0) throw std::invalid_argument("noise scale: epsilon must be positive");
  NoiseScale s;
  s.B = B;
  s.M = M;
  s.gamma = gamma;
  s.epsilon = epsilon;
  s.scale = (4.0 * B + 2.0 * M) / (gamma * epsilon);
  return s;
}

PrivacyAccount algorithm_2_account(double epsilon) {
  if (epsilon <= 0.0)
    throw std::invalid_argument("privacy account: epsilon must be positive");
  PrivacyAccount acc;
  acc.per_release_epsilon = epsilon;
  // Disjoint-group releases compose in parallel to epsilon; the full-data
  // release adds another epsilon sequentially.
  acc.total_epsilon = 2.0 * epsilon;
  return acc;
}

Eigen::VectorXd sample_pl(int d, double scale, RngStream& rng) {
  if (d < 1) throw std::invalid_argument("sample_pl: dimension must be positive");
  if (scale <= 0.0) throw std::invalid_argument("sample_pl: scale must be positive");
  const Eigen::VectorXd u = sphere_direction(d, rng);
  return rng.gamma_int(d, scale) * u;
}

PrivateEstimate perturb(const RidgeEstimate& ridge_est, double B, double M,
                        double epsilon, RngStream& rng) {
  const NoiseScale s = make_noise_scale(B, M, ridge_est.gamma, epsilon);
  PrivateEstimate est;
  est.theta_ridge = ridge_est.theta_hat;
  est.noise = sample_pl(static_cast<int>(ridge_est.theta_hat.size()), s.scale, rng);
  est.theta_private = est.theta_ridge + est.noise;
  return est;
}

double pl_log_density_ratio(const Eigen::VectorXd& point,
                            const Eigen::VectorXd& center_a,
                            const Eigen::VectorXd& center_b, double scale) {
  if (scale <= 0.0)
    throw std::invalid_argument("density ratio: scale must be positive");
  return ((point - center_b).norm() - (point - center_a).norm()) / scale;
}

SensitivityAudit sensitivity_audit(int n, int d, double gamma, double B,
                                   double M, long trials, RngStream& rng,
                                   int k) {
  if (trials < 1) throw std::invalid_argument("sensitivity audit: trials must be >= 1");
  if (k < 1 || k > n) throw std::invalid_argument("sensitivity audit: k out of range");
  if (gamma <= 0.0) throw std::invalid_argument("sensitivity audit: gamma must be positive");

  SensitivityAudit audit;
  audit.bound = k * (4.0 * B + 2.0 * M) / gamma;
  audit.trials = trials;

  const double y_max = B + M;
  const uint64_t salt = rng.next_u64();
  for (long t = 0; t < trials; ++t) {
    RngStream tr = rng.derive(salt, static_cast<uint64_t>(t));

    const Eigen::MatrixXd X = sample_unit_ball(n, d, tr);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y(i) = tr.uniform(-y_max, y_max);

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
    A.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose());
    A = Eigen::MatrixXd(A.selfadjointView<Eigen::Lower>());
    A.diagonal().array() += gamma;
    Eigen::VectorXd rhs = X.transpose() * y;
    const Eigen::VectorXd theta = A.ldlt().solve(rhs);

    // Swap k distinct players for fresh draws, updating the normal
    // equations by rank-one corrections.
    std::vector<int> chosen;
    while (static_cast<int>(chosen.size()) < k) {
      const int i = static_cast<int>(tr.uniform_below(static_cast<uint64_t>(n)));
      bool dup = false;
      for (int c : chosen) dup = dup || c == i;
      if (!dup) chosen.push_back(i);
    }
    for (int i : chosen) {
      const Eigen::VectorXd old_x = X.row(i);
      const Eigen::VectorXd new_x = sample_unit_ball(1, d, tr).row(0);
      const double new_y = tr.uniform(-y_max, y_max);
      A -= old_x * old_x.transpose();
      A += new_x * new_x.transpose();
      rhs += new_x * new_y - old_x * y(i);
    }
    const Eigen::VectorXd theta_prime = A.ldlt().solve(rhs);

    const double dist = (theta - theta_prime).norm();
    if (dist > audit.max_observed) audit.max_observed = dist;
    if (dist > audit.bound) ++audit.violations;
  }
  return audit;
}

DensityRatioAudit density_ratio_audit(int d, double scale,
                                      double epsilon_claim, long pairs,
                                      RngStream& rng) {
  if (pairs < 1) throw std::invalid_argument("density ratio audit: pairs must be >= 1");
  if (d < 1) throw std::invalid_argument("density ratio audit: dimension must be positive");
  if (scale <= 0.0 || epsilon_claim <= 0.0)
    throw std::invalid_argument("density ratio audit: scale and epsilon must be positive");

  DensityRatioAudit audit;
  audit.bound = epsilon_claim;
  audit.pairs = pairs;

  // Largest center separation the sensitivity bound permits.
  const double max_shift = scale * epsilon_claim;
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(d);

  const uint64_t salt = rng.next_u64();
  for (long p = 0; p < pairs; ++p) {
    RngStream tr = rng.derive(salt, static_cast<uint64_t>(p));
    const Eigen::VectorXd center_b =
        (max_shift * tr.uniform01()) * sphere_direction(d, tr);

    // Evaluate at draws from both release laws and at the peak point
    // (the first center, where the ratio attains its supremum).
    const Eigen::VectorXd eval[3] = {sample_pl(d, scale, tr),
                                     center_b + sample_pl(d, scale, tr),
                                     origin};
    for (const auto& v : eval) {
      const double r =
          std::fabs(pl_log_density_ratio(v, origin, center_b, scale));
      if (r > audit.max_log_ratio) audit.max_log_ratio = r;
      if (r > epsilon_claim + 1e-9) ++audit.violations;
    }
  }

  // Constructed extremal pair: centers exactly max_shift apart, evaluated
  // where the ratio peaks; equals epsilon_claim up to roundoff.
  Eigen::VectorXd far = Eigen::VectorXd::Zero(d);
  far(0) = max_shift;
  audit.extremal_log_ratio = pl_log_density_ratio(origin, origin, far, scale);
  return audit;
}

}  // namespace privreg
