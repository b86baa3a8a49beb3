#include "privreg/regression_core.hpp"

#include <cmath>
#include <limits>

namespace privreg {
namespace {

constexpr double kSingularCondition = 1e12;

Eigen::MatrixXd gram(const Eigen::MatrixXd& X) {
  const int d = static_cast<int>(X.cols());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
  A.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose());
  return A.selfadjointView<Eigen::Lower>();
}

void check_shapes(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() != y.size())
    throw std::invalid_argument("regression: X rows and y length differ");
  if (X.rows() == 0 || X.cols() == 0)
    throw std::invalid_argument("regression: empty design");
}

// Shared solve path: factor gamma I + X'X, guarding the gamma = 0 case.
Eigen::LDLT<Eigen::MatrixXd> factor_system(const Eigen::MatrixXd& A,
                                           double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("regression: negative gamma");
  Eigen::MatrixXd reg = A;
  reg.diagonal().array() += gamma;
  if (gamma == 0.0) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reg);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo <= 0.0 || hi / lo > kSingularCondition)
      throw SingularSystemError(
          "unregularized system is singular; add regularization");
  }
  return reg.ldlt();
}

}  // namespace

RidgeEstimate ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                    double gamma) {
  check_shapes(X, y);
  const Eigen::MatrixXd A = gram(X);
  const auto ldlt = factor_system(A, gamma);
  RidgeEstimate est;
  est.gamma = gamma;
  est.theta_hat = ldlt.solve(X.transpose() * y);
  return est;
}

double loss(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X,
            const Eigen::VectorXd& y, double gamma) {
  check_shapes(X, y);
  if (theta.size() != X.cols())
    throw std::invalid_argument("loss: theta dimension mismatch");
  return (y - X * theta).squaredNorm() + gamma * theta.squaredNorm();
}

BiasCovReport bias_cov(const Eigen::MatrixXd& X, const Eigen::VectorXd& theta,
                       double sigma2, double gamma) {
  if (theta.size() != X.cols())
    throw std::invalid_argument("bias_cov: theta dimension mismatch");
  const Eigen::MatrixXd A = gram(X);
  Eigen::MatrixXd reg = A;
  reg.diagonal().array() += gamma;
  const auto ldlt = factor_system(A, gamma);

  BiasCovReport rep;
  rep.bias = -gamma * ldlt.solve(theta);
  // (gamma I + X'X)^-1 X'X (gamma I + X'X)^-1 via two solves.
  const Eigen::MatrixXd W = ldlt.solve(A);
  rep.covariance_trace = sigma2 * ldlt.solve(W.transpose()).trace();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reg);
  rep.lambda_min = es.eigenvalues().minCoeff();
  rep.lambda_max = es.eigenvalues().maxCoeff();
  return rep;
}

double strong_convexity_margin(const Eigen::MatrixXd& X, double gamma) {
  Eigen::MatrixXd H = 2.0 * gram(X);
  H.diagonal().array() += 2.0 * gamma;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  return es.eigenvalues().minCoeff();
}

SpectralReport spectral_report(const Eigen::MatrixXd& X, double gamma,
                               double xi) {
  if (xi <= 0.0 || xi >= 1.0)
    throw std::invalid_argument("spectral_report: xi must lie in (0, 1)");
  (void)gamma;  // band membership is a property of X'X alone
  const Eigen::MatrixXd A = gram(X);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);

  SpectralReport rep;
  rep.lambda_min = es.eigenvalues().minCoeff();
  rep.lambda_max = es.eigenvalues().maxCoeff();
  rep.xtx_norm = rep.lambda_max;
  rep.xtx_inv_norm = rep.lambda_min > 0.0
                         ? 1.0 / rep.lambda_min
                         : std::numeric_limits<double>::infinity();
  const double mean_eig =
      static_cast<double>(X.rows()) / (static_cast<double>(X.cols()) + 2.0);
  rep.band_lo = (1.0 - xi) * mean_eig;
  rep.band_hi = (1.0 + xi) * mean_eig;
  rep.in_band = rep.lambda_min >= rep.band_lo && rep.lambda_max <= rep.band_hi;
  return rep;
}

}  // namespace privreg
