// Closed-form linear and ridge regression with analytic bias/covariance,
// plus the strong-convexity and spectral-concentration auditors. Dense
// O(d^3) algebra throughout; d is expected small.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace privreg {

// Raised when a gamma = 0 system is numerically singular, or a
// leave-one-out design loses rank.
class SingularSystemError : public std::runtime_error {
 public:
  explicit SingularSystemError(const std::string& what)
      : std::runtime_error(what) {}
};

struct RidgeEstimate {
  Eigen::VectorXd theta_hat;
  double gamma = 0.0;
};

struct BiasCovReport {
  Eigen::VectorXd bias;            // -gamma (gamma I + X'X)^-1 theta
  double covariance_trace = 0.0;   // tr sigma^2 (gamma I+X'X)^-1 X'X (gamma I+X'X)^-1
  double lambda_min = 0.0;         // extreme eigenvalues of gamma I + X'X
  double lambda_max = 0.0;
};

struct SpectralReport {
  double xtx_norm = 0.0;      // largest eigenvalue of X'X
  double xtx_inv_norm = 0.0;  // 1 / smallest eigenvalue (inf when singular)
  bool in_band = false;       // all eigenvalues inside (1 +- xi) n/(d+2)
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double band_lo = 0.0;
  double band_hi = 0.0;
};

// Minimizer of sum (y_i - theta'x_i)^2 + gamma ||theta||^2 via an SPD
// factorization of the normal equations. gamma = 0 requires a well
// conditioned X'X (condition below 1e12), else SingularSystemError.
RidgeEstimate ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                    double gamma);

double loss(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X,
            const Eigen::VectorXd& y, double gamma);

BiasCovReport bias_cov(const Eigen::MatrixXd& X, const Eigen::VectorXd& theta,
                       double sigma2, double gamma);

// Smallest eigenvalue of the loss Hessian 2 X'X + 2 gamma I; >= 2 gamma.
double strong_convexity_margin(const Eigen::MatrixXd& X, double gamma);

SpectralReport spectral_report(const Eigen::MatrixXd& X, double gamma,
                               double xi);

}  // namespace privreg
