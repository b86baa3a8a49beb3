#include "privreg/data_gen.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "privreg/special.hpp"

namespace privreg {

PriorSpec PriorSpec::discrete(std::vector<Eigen::VectorXd> support,
                              std::vector<double> weights) {
  PriorSpec s;
  s.kind = PriorKind::kDiscreteSupport;
  s.support = std::move(support);
  s.weights = std::move(weights);
  double b = 0.0;
  for (const auto& v : s.support) b = std::max(b, v.squaredNorm());
  s.B = b;
  s.validate();
  return s;
}

PriorSpec PriorSpec::truncated_gaussian(Eigen::VectorXd mean, double stddev,
                                        double radius) {
  PriorSpec s;
  s.kind = PriorKind::kTruncatedGaussian;
  s.mean = std::move(mean);
  s.stddev = stddev;
  s.radius = radius;
  s.B = radius * radius;
  s.validate();
  return s;
}

int PriorSpec::d() const {
  if (kind == PriorKind::kDiscreteSupport) {
    return support.empty() ? 0 : static_cast<int>(support.front().size());
  }
  return static_cast<int>(mean.size());
}

Eigen::VectorXd PriorSpec::prior_mean() const {
  validate();
  if (kind == PriorKind::kDiscreteSupport) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(d());
    for (size_t k = 0; k < support.size(); ++k) m += weights[k] * support[k];
    return m;
  }
  // Spherically truncated gaussian around `mean`: the exact mean has no
  // closed form for general centers; the center is the natural summary and
  // is only used as a fallback for impossible reports.
  return mean;
}

void PriorSpec::validate() const {
  if (kind == PriorKind::kDiscreteSupport) {
    if (support.empty()) throw std::invalid_argument("prior: empty support");
    if (support.size() != weights.size())
      throw std::invalid_argument("prior: weights size mismatch");
    const auto dim = support.front().size();
    double total = 0.0;
    for (size_t k = 0; k < support.size(); ++k) {
      if (support[k].size() != dim)
        throw std::invalid_argument("prior: ragged support dimensions");
      if (weights[k] < 0.0) throw std::invalid_argument("prior: negative weight");
      total += weights[k];
      if (support[k].squaredNorm() > B + 1e-12)
        throw std::invalid_argument("prior: support point outside bound B");
    }
    if (std::fabs(total - 1.0) > 1e-9)
      throw std::invalid_argument("prior: weights must sum to 1");
  } else {
    if (radius <= 0.0) throw std::invalid_argument("prior: non-positive radius");
    if (stddev <= 0.0) throw std::invalid_argument("prior: non-positive stddev");
    if (mean.size() == 0) throw std::invalid_argument("prior: empty mean");
    if (radius * radius > B + 1e-12)
      throw std::invalid_argument("prior: radius exceeds bound B");
  }
}

NoiseSpec NoiseSpec::uniform(double M) {
  NoiseSpec s;
  s.kind = NoiseKind::kUniform;
  s.M = M;
  s.validate();
  return s;
}

NoiseSpec NoiseSpec::truncated_gaussian(double M, double stddev) {
  NoiseSpec s;
  s.kind = NoiseKind::kTruncatedGaussian;
  s.M = M;
  s.stddev = stddev;
  s.validate();
  return s;
}

NoiseSpec NoiseSpec::symmetric_discrete(double M) {
  NoiseSpec s;
  s.kind = NoiseKind::kSymmetricDiscrete;
  s.M = M;
  s.validate();
  return s;
}

double NoiseSpec::sigma2() const {
  switch (kind) {
    case NoiseKind::kUniform:
      return M * M / 3.0;
    case NoiseKind::kSymmetricDiscrete:
      return M * M;
    case NoiseKind::kTruncatedGaussian: {
      // Var of N(0, s^2) conditioned on |z| <= M:
      // s^2 (1 - 2 r phi(r) / (2 Phi(r) - 1)), r = M / s.
      const double r = M / stddev;
      const double mass = 2.0 * normal_cdf(r) - 1.0;
      return stddev * stddev * (1.0 - 2.0 * r * normal_pdf(r) / mass);
    }
  }
  return 0.0;
}

double NoiseSpec::likelihood(double z) const {
  switch (kind) {
    case NoiseKind::kUniform:
      return std::fabs(z) <= M ? 1.0 / (2.0 * M) : 0.0;
    case NoiseKind::kTruncatedGaussian: {
      if (std::fabs(z) > M) return 0.0;
      const double r = M / stddev;
      const double mass = 2.0 * normal_cdf(r) - 1.0;
      return normal_pdf(z / stddev) / (stddev * mass);
    }
    case NoiseKind::kSymmetricDiscrete: {
      const double tol = 1e-9 * std::max(1.0, M);
      double mass = 0.0;
      if (std::fabs(z - M) <= tol) mass += 0.5;
      if (std::fabs(z + M) <= tol) mass += 0.5;
      return mass;
    }
  }
  return 0.0;
}

void NoiseSpec::validate() const {
  if (M <= 0.0) throw std::invalid_argument("noise: half-width M must be positive");
  if (kind == NoiseKind::kTruncatedGaussian && stddev <= 0.0)
    throw std::invalid_argument("noise: non-positive stddev");
}

void CostSpec::validate() const {
  if (p <= 1.0) throw std::invalid_argument("cost: tail exponent must exceed 1");
  if (scale <= 0.0 || scale > 1.0)
    throw std::invalid_argument("cost: scale must lie in (0, 1]");
}

Eigen::VectorXd sample_theta(const PriorSpec& prior, RngStream& rng) {
  prior.validate();
  if (prior.kind == PriorKind::kDiscreteSupport) {
    const double u = rng.uniform01();
    double acc = 0.0;
    for (size_t k = 0; k < prior.support.size(); ++k) {
      acc += prior.weights[k];
      if (u < acc) return prior.support[k];
    }
    return prior.support.back();
  }
  // Rejection against the truncation ball.
  const int dim = prior.d();
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    Eigen::VectorXd theta(dim);
    for (int j = 0; j < dim; ++j) theta[j] = prior.mean[j] + prior.stddev * rng.normal();
    if (theta.norm() <= prior.radius) return theta;
  }
  throw std::runtime_error("sample_theta: truncation region never hit");
}

Eigen::MatrixXd sample_unit_ball(int n, int d, RngStream& rng) {
  if (n < 1 || d < 1) throw std::invalid_argument("sample_unit_ball: n, d must be >= 1");
  Eigen::MatrixXd X(n, d);
  for (int i = 0; i < n; ++i) {
    // Gaussian direction scaled by u^(1/d) puts the row uniform in the ball.
    double norm2 = 0.0;
    do {
      for (int j = 0; j < d; ++j) {
        X(i, j) = rng.normal();
      }
      norm2 = X.row(i).squaredNorm();
    } while (norm2 == 0.0);
    const double r = std::pow(rng.uniform01(), 1.0 / d) / std::sqrt(norm2);
    X.row(i) *= r;
  }
  return X;
}

Eigen::VectorXd sample_noise(const NoiseSpec& noise, int n, RngStream& rng) {
  noise.validate();
  Eigen::VectorXd z(n);
  switch (noise.kind) {
    case NoiseKind::kUniform:
      for (int i = 0; i < n; ++i) z[i] = rng.uniform(-noise.M, noise.M);
      break;
    case NoiseKind::kSymmetricDiscrete:
      for (int i = 0; i < n; ++i) z[i] = rng.uniform01() < 0.5 ? -noise.M : noise.M;
      break;
    case NoiseKind::kTruncatedGaussian:
      for (int i = 0; i < n; ++i) {
        double v;
        do {
          v = noise.stddev * rng.normal();
        } while (std::fabs(v) > noise.M);
        z[i] = v;
      }
      break;
  }
  return z;
}

Eigen::VectorXd sample_costs(const CostSpec& cost, int n, RngStream& rng) {
  cost.validate();
  Eigen::VectorXd c(n);
  for (int i = 0; i < n; ++i) {
    // Inverse CDF of Pareto(scale, p); 1 - u stays in (0, 1].
    c[i] = cost.scale * std::pow(1.0 - rng.uniform01(), -1.0 / cost.p);
  }
  return c;
}

World sample_world(const PriorSpec& prior, const NoiseSpec& noise,
                   const CostSpec& cost, int n, int d, RngStream& rng) {
  if (prior.d() != d) throw std::invalid_argument("sample_world: prior dimension mismatch");
  const Eigen::VectorXd theta = sample_theta(prior, rng);
  return sample_world_given_theta(theta, noise, cost, n, rng);
}

World sample_world_given_theta(const Eigen::VectorXd& theta,
                               const NoiseSpec& noise, const CostSpec& cost,
                               int n, RngStream& rng) {
  World w;
  w.theta = theta;
  w.features = sample_unit_ball(n, static_cast<int>(theta.size()), rng);
  w.noise = sample_noise(noise, n, rng);
  w.costs = sample_costs(cost, n, rng);
  w.responses = w.features * w.theta + w.noise;
  return w;
}

void WorldModel::validate() const {
  prior.validate();
  noise.validate();
  cost.validate();
  if (n < 1) throw std::invalid_argument("world model: n must be >= 1");
  if (d != prior.d()) throw std::invalid_argument("world model: d mismatch with prior");
}

World WorldModel::sample(RngStream& rng) const {
  validate();
  return sample_world(prior, noise, cost, n, d, rng);
}

World WorldModel::sample_given_theta(const Eigen::VectorXd& theta,
                                     RngStream& rng) const {
  validate();
  return sample_world_given_theta(theta, noise, cost, n, rng);
}

}  // namespace privreg
