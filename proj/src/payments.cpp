#include "privreg/payments.hpp"

#include <cmath>
#include <stdexcept>

namespace privreg {

void BrierParams::validate() const {
  if (b <= 0.0) throw std::invalid_argument("brier params: b must be positive");
}

double brier(const BrierParams& params, double p, double q) {
  return params.a - params.b * (p - 2.0 * p * q + q * q);
}

PosteriorOracle PosteriorOracle::exact_discrete(PriorSpec prior,
                                                NoiseSpec noise) {
  if (prior.kind != PriorKind::kDiscreteSupport)
    throw std::invalid_argument(
        "posterior oracle: exact mode needs a discrete-support prior");
  prior.validate();
  noise.validate();
  PosteriorOracle o;
  o.kind_ = OracleKind::kExactDiscrete;
  o.prior_ = std::move(prior);
  o.noise_ = std::move(noise);
  return o;
}

PosteriorOracle PosteriorOracle::monte_carlo(PriorSpec prior, NoiseSpec noise,
                                             int mc_samples, RngStream& rng) {
  if (mc_samples < 1000)
    throw std::invalid_argument("posterior oracle: mc_samples must be >= 1000");
  prior.validate();
  noise.validate();
  PosteriorOracle o;
  o.kind_ = OracleKind::kMonteCarlo;
  o.prior_ = std::move(prior);
  o.noise_ = std::move(noise);
  o.mc_samples_ = mc_samples;
  // Bounded noise densities can be discontinuous at the support edges, so
  // use a plain scale-times-rate bandwidth rather than a plug-in rule.
  o.bandwidth_ = o.noise_.M * std::pow(static_cast<double>(mc_samples), -0.2);
  o.mc_thetas_.reserve(mc_samples);
  o.mc_noises_.reserve(mc_samples);
  for (int j = 0; j < mc_samples; ++j) {
    o.mc_thetas_.push_back(sample_theta(o.prior_, rng));
    o.mc_noises_.push_back(sample_noise(o.noise_, 1, rng)(0));
  }
  return o;
}

Eigen::VectorXd PosteriorOracle::posterior_mean(const Eigen::VectorXd& x,
                                                double y_report) const {
  if (x.size() != prior_.d())
    throw std::invalid_argument("posterior oracle: feature dimension mismatch");

  if (kind_ == OracleKind::kExactDiscrete) {
    const auto w = posterior_weights(x, y_report);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(prior_.d());
    for (size_t k = 0; k < w.size(); ++k) mean += w[k] * prior_.support[k];
    return mean;
  }

  double total = 0.0;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(prior_.d());
  for (int j = 0; j < mc_samples_; ++j) {
    const double resid =
        (y_report - mc_thetas_[j].dot(x) - mc_noises_[j]) / bandwidth_;
    const double w = std::exp(-0.5 * resid * resid);
    total += w;
    mean += w * mc_thetas_[j];
  }
  if (total < 1e-300) return prior_.prior_mean();
  return mean / total;
}

std::vector<double> PosteriorOracle::posterior_weights(
    const Eigen::VectorXd& x, double y_report) const {
  if (kind_ != OracleKind::kExactDiscrete)
    throw std::logic_error("posterior oracle: weights need the exact mode");
  if (x.size() != prior_.d())
    throw std::invalid_argument("posterior oracle: feature dimension mismatch");

  std::vector<double> w(prior_.support.size());
  double total = 0.0;
  for (size_t k = 0; k < w.size(); ++k) {
    w[k] = prior_.weights[k] *
           noise_.likelihood(y_report - prior_.support[k].dot(x));
    total += w[k];
  }
  if (total <= 0.0) return prior_.weights;  // impossible report: prior fallback
  for (auto& v : w) v /= total;
  return w;
}

double payment(const BrierParams& params, const Eigen::VectorXd& estimator,
               const Eigen::VectorXd& x, const Eigen::VectorXd& posterior) {
  if (estimator.size() != x.size() || posterior.size() != x.size())
    throw std::invalid_argument("payment: dimension mismatch");
  return brier(params, estimator.dot(x), posterior.dot(x));
}

}  // namespace privreg
