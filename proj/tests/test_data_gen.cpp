#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "privreg/data_gen.hpp"

using namespace privreg;

namespace {

Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v << x;
  return v;
}

PriorSpec two_point_prior() {
  return PriorSpec::discrete({vec1(-1.0), vec1(1.0)}, {0.5, 0.5});
}

// Simpson-rule variance of a centered gaussian truncated to [-M, M].
double truncated_gaussian_var_quadrature(double stddev, double M) {
  const int steps = 20000;
  const double h = 2.0 * M / steps;
  double mass = 0.0, second = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double z = -M + i * h;
    const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double f = std::exp(-0.5 * z * z / (stddev * stddev));
    mass += w * f;
    second += w * z * z * f;
  }
  return second / mass;
}

}  // namespace

TEST_CASE("discrete prior records its support bound and mean") {
  const PriorSpec prior = two_point_prior();
  prior.validate();
  CHECK(prior.d() == 1);
  CHECK(prior.B == doctest::Approx(1.0));
  CHECK(prior.prior_mean()(0) == doctest::Approx(0.0));

  const PriorSpec skew =
      PriorSpec::discrete({vec1(-1.0), vec1(2.0)}, {0.25, 0.75});
  CHECK(skew.B == doctest::Approx(4.0));
  CHECK(skew.prior_mean()(0) == doctest::Approx(1.25));
}

TEST_CASE("prior validation rejects malformed specs") {
  CHECK_THROWS_AS(PriorSpec::discrete({vec1(-1.0), vec1(1.0)}, {0.5, 0.6}),
                  std::invalid_argument);

  PriorSpec mismatched = two_point_prior();
  mismatched.weights.pop_back();
  CHECK_THROWS_AS(mismatched.validate(), std::invalid_argument);

  PriorSpec gauss = PriorSpec::truncated_gaussian(vec1(0.0), 1.0, 1.0);
  gauss.validate();
  gauss.radius = 0.0;
  CHECK_THROWS_AS(gauss.validate(), std::invalid_argument);
}

TEST_CASE("sample_theta stays on the discrete support with the right law") {
  RngStream rng(101);
  const PriorSpec prior =
      PriorSpec::discrete({vec1(-1.0), vec1(1.0)}, {0.3, 0.7});
  int plus = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto theta = sample_theta(prior, rng);
    const double t = theta(0);
    REQUIRE((t == -1.0 || t == 1.0));
    if (t == 1.0) ++plus;
  }
  CHECK(static_cast<double>(plus) / n == doctest::Approx(0.7).epsilon(0.01));
}

TEST_CASE("truncated gaussian prior respects its radius") {
  RngStream rng(103);
  Eigen::VectorXd center(2);
  center << 0.5, -0.25;
  const PriorSpec prior = PriorSpec::truncated_gaussian(center, 2.0, 0.8);
  CHECK(prior.B == doctest::Approx(0.64));
  for (int i = 0; i < 5000; ++i) {
    const auto theta = sample_theta(prior, rng);
    CHECK(theta.norm() <= 0.8 + 1e-12);
  }
}

TEST_CASE("unit ball samples have norm below one and isotropic covariance") {
  RngStream rng(107);
  const int n = 60000, d = 3;
  const auto X = sample_unit_ball(n, d, rng);
  REQUIRE(X.rows() == n);
  REQUIRE(X.cols() == d);
  for (int i = 0; i < n; ++i) REQUIRE(X.row(i).norm() <= 1.0 + 1e-12);

  // Cov = I / (d + 2) for the uniform ball law.
  const Eigen::MatrixXd cov = X.transpose() * X / static_cast<double>(n);
  const double target = 1.0 / (d + 2.0);
  const double tol = 0.01;  // ~10 sigma for this sample size
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const double want = a == b ? target : 0.0;
      CHECK(std::abs(cov(a, b) - want) < tol);
    }

  // Mean squared norm is d / (d + 2).
  CHECK(X.squaredNorm() / n ==
        doctest::Approx(d / (d + 2.0)).epsilon(0.02));
}

TEST_CASE("uniform noise has the advertised variance and support") {
  const NoiseSpec spec = NoiseSpec::uniform(1.5);
  spec.validate();
  CHECK(spec.sigma2() == doctest::Approx(1.5 * 1.5 / 3.0));

  RngStream rng(109);
  const auto z = sample_noise(spec, 200000, rng);
  double s1 = 0, s2 = 0;
  for (int i = 0; i < z.size(); ++i) {
    REQUIRE(std::abs(z(i)) <= 1.5);
    s1 += z(i);
    s2 += z(i) * z(i);
  }
  CHECK(std::abs(s1 / z.size()) < 0.02);
  CHECK(s2 / z.size() == doctest::Approx(spec.sigma2()).epsilon(0.02));
}

TEST_CASE("truncated gaussian noise variance matches quadrature") {
  for (double stddev : {0.5, 1.0, 2.0}) {
    const NoiseSpec spec = NoiseSpec::truncated_gaussian(1.0, stddev);
    CHECK(spec.sigma2() ==
          doctest::Approx(truncated_gaussian_var_quadrature(stddev, 1.0))
              .epsilon(1e-8));
  }
  // Values pinned against the closed form s^2 (1 - 2 r pdf(r) / (2 cdf(r) - 1)).
  CHECK(NoiseSpec::truncated_gaussian(1.0, 1.0).sigma2() ==
        doctest::Approx(0.29112509477279314).epsilon(1e-12));
  CHECK(NoiseSpec::truncated_gaussian(1.0, 2.0).sigma2() ==
        doctest::Approx(0.3223566184032465).epsilon(1e-12));
  CHECK(NoiseSpec::truncated_gaussian(1.0, 0.5).sigma2() ==
        doctest::Approx(0.1934353258874808).epsilon(1e-12));

  RngStream rng(113);
  const NoiseSpec spec = NoiseSpec::truncated_gaussian(1.0, 1.0);
  const auto z = sample_noise(spec, 200000, rng);
  double s2 = 0;
  for (int i = 0; i < z.size(); ++i) {
    REQUIRE(std::abs(z(i)) <= 1.0);
    s2 += z(i) * z(i);
  }
  CHECK(s2 / z.size() == doctest::Approx(spec.sigma2()).epsilon(0.02));
}

TEST_CASE("symmetric discrete noise is a fair coin on plus and minus M") {
  const NoiseSpec spec = NoiseSpec::symmetric_discrete(2.0);
  CHECK(spec.sigma2() == doctest::Approx(4.0));
  RngStream rng(127);
  const auto z = sample_noise(spec, 100000, rng);
  int plus = 0;
  for (int i = 0; i < z.size(); ++i) {
    REQUIRE((z(i) == 2.0 || z(i) == -2.0));
    if (z(i) > 0) ++plus;
  }
  CHECK(static_cast<double>(plus) / z.size() == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("noise likelihood evaluates the density of each law") {
  const NoiseSpec uni = NoiseSpec::uniform(2.0);
  CHECK(uni.likelihood(0.0) == doctest::Approx(0.25));
  CHECK(uni.likelihood(1.999) == doctest::Approx(0.25));
  CHECK(uni.likelihood(2.001) == 0.0);

  const NoiseSpec gauss = NoiseSpec::truncated_gaussian(1.0, 1.0);
  // Density integrates to one over [-M, M].
  const int steps = 4000;
  double mass = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double z = -1.0 + 2.0 * i / steps;
    const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    mass += w * gauss.likelihood(z);
  }
  mass *= (2.0 / steps) / 3.0;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(gauss.likelihood(1.5) == 0.0);
  // Symmetric and peaked at zero.
  CHECK(gauss.likelihood(0.5) == doctest::Approx(gauss.likelihood(-0.5)));
  CHECK(gauss.likelihood(0.0) > gauss.likelihood(0.9));

  const NoiseSpec coin = NoiseSpec::symmetric_discrete(1.0);
  CHECK(coin.likelihood(1.0) == doctest::Approx(0.5));
  CHECK(coin.likelihood(-1.0) == doctest::Approx(0.5));
  CHECK(coin.likelihood(0.5) == 0.0);
}

TEST_CASE("costs follow the Pareto tail bound") {
  CostSpec cost;
  cost.p = 2.0;
  cost.scale = 1.0;
  cost.validate();

  RngStream rng(131);
  const auto c = sample_costs(cost, 200000, rng);
  int below_2 = 0, below_10 = 0;
  for (int i = 0; i < c.size(); ++i) {
    REQUIRE(c(i) >= 1.0);
    if (c(i) <= 2.0) ++below_2;
    if (c(i) <= 10.0) ++below_10;
  }
  // Pr[c <= t] = 1 - t^-p at scale 1.
  CHECK(static_cast<double>(below_2) / c.size() ==
        doctest::Approx(0.75).epsilon(0.01));
  CHECK(static_cast<double>(below_10) / c.size() ==
        doctest::Approx(0.99).epsilon(0.005));

  CostSpec bad = cost;
  bad.p = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cost;
  bad.scale = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("sample_world wires responses to theta, features, and noise") {
  RngStream rng(137);
  const PriorSpec prior = two_point_prior();
  const NoiseSpec noise = NoiseSpec::uniform(1.0);
  CostSpec cost;
  const World w = sample_world(prior, noise, cost, 50, 1, rng);
  REQUIRE(w.n() == 50);
  REQUIRE(w.d() == 1);
  CHECK((w.theta(0) == 1.0 || w.theta(0) == -1.0));
  for (int i = 0; i < w.n(); ++i) {
    CHECK(w.responses(i) ==
          doctest::Approx(w.theta.dot(w.features.row(i)) + w.noise(i))
              .epsilon(1e-15));
    CHECK(std::abs(w.noise(i)) <= 1.0);
    CHECK(std::abs(w.responses(i)) <= std::sqrt(prior.B) + 1.0 + 1e-12);
  }
}

TEST_CASE("sample_world_given_theta holds the parameter fixed") {
  RngStream rng(139);
  const Eigen::VectorXd theta = vec1(0.75);
  const World w =
      sample_world_given_theta(theta, NoiseSpec::uniform(0.5), CostSpec{}, 20, rng);
  CHECK(w.theta(0) == 0.75);
  CHECK(w.n() == 20);
}

TEST_CASE("world model validates and samples reproducibly") {
  WorldModel model;
  model.prior = two_point_prior();
  model.noise = NoiseSpec::uniform(1.0);
  model.cost = CostSpec{};
  model.n = 30;
  model.d = 1;
  model.validate();

  RngStream a(997), b(997);
  const World wa = model.sample(a);
  const World wb = model.sample(b);
  CHECK(wa.theta == wb.theta);
  CHECK(wa.features == wb.features);
  CHECK(wa.responses == wb.responses);
  CHECK(wa.costs == wb.costs);

  WorldModel bad = model;
  bad.d = 2;  // prior dimension disagrees
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = model;
  bad.n = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
