#include <doctest.h>

#include <cmath>

#include "mshmm/synthetic.hpp"
#include "oracles.hpp"

using namespace mshmm;

TEST_CASE("zero noise collapses observations onto the regression surface") {
  GenerativeSpec spec;
  spec.states = 2;
  spec.T = 50;
  spec.seed = 5;
  spec.covariates = 1;
  spec.emissions.coef.resize(2, 2);
  spec.emissions.coef << 1.0, 2.0, -1.0, 0.5;
  spec.emissions.sigma2 = Eigen::Vector2d(1e-30, 1e-30);
  Eigen::Matrix2d P;
  P << 0.5, 0.5, 0.5, 0.5;
  spec.transitions = TransitionModel::constant(P);
  const Generated gen = generate(spec);
  for (int t = 0; t < 50; ++t) {
    const int z = gen.truth[static_cast<std::size_t>(t)];
    const double mu = gen.data.X.row(t).dot(spec.emissions.coef.row(z));
    CHECK(gen.data.y[t] == doctest::Approx(mu).epsilon(1e-10));
  }
}

TEST_CASE("single state produces the all-ones path") {
  GenerativeSpec spec;
  spec.states = 1;
  spec.T = 30;
  spec.seed = 6;
  spec.covariates = 2;
  spec.emissions.coef = Eigen::MatrixXd::Zero(1, 3);
  spec.emissions.sigma2 = Eigen::VectorXd::Constant(1, 1.0);
  spec.transitions = TransitionModel::constant(Eigen::MatrixXd::Identity(1, 1));
  const Generated gen = generate(spec);
  for (int v : gen.truth) CHECK(v == 0);
  CHECK(gen.data.column_names ==
        std::vector<std::string>{"intercept", "x1", "x2"});
}

TEST_CASE("path transition frequencies match the generating matrix") {
  GenerativeSpec spec;
  spec.states = 2;
  spec.T = 100000;
  spec.seed = 7;
  spec.emissions.coef.resize(2, 1);
  spec.emissions.coef << -1.0, 1.0;
  spec.emissions.sigma2 = Eigen::Vector2d(1.0, 1.0);
  Eigen::Matrix2d P;
  P << 0.8, 0.2, 0.3, 0.7;
  spec.transitions = TransitionModel::constant(P);
  const Generated gen = generate(spec);

  Eigen::Matrix2d counts = Eigen::Matrix2d::Zero();
  for (std::size_t t = 0; t + 1 < gen.truth.size(); ++t)
    counts(gen.truth[t], gen.truth[t + 1]) += 1.0;
  for (int i = 0; i < 2; ++i) {
    const double n_i = counts.row(i).sum();
    for (int j = 0; j < 2; ++j) {
      const double freq = counts(i, j) / n_i;
      const double se = std::sqrt(P(i, j) * (1.0 - P(i, j)) / n_i);
      CHECK(std::abs(freq - P(i, j)) < 3.0 * se);
    }
  }
}

TEST_CASE("within-state moments converge to the emission law") {
  GenerativeSpec spec;
  spec.states = 2;
  spec.T = 100000;
  spec.seed = 8;
  spec.emissions.coef.resize(2, 1);
  spec.emissions.coef << -2.0, 3.0;
  spec.emissions.sigma2 = Eigen::Vector2d(4.0, 0.25);
  Eigen::Matrix2d P;
  P << 0.9, 0.1, 0.2, 0.8;
  spec.transitions = TransitionModel::constant(P);
  const Generated gen = generate(spec);

  for (int s = 0; s < 2; ++s) {
    std::vector<double> vals;
    for (int t = 0; t < spec.T; ++t)
      if (gen.truth[static_cast<std::size_t>(t)] == s) vals.push_back(gen.data.y[t]);
    REQUIRE(vals.size() > 1000);
    const double mean = oracles::sample_mean(vals);
    const double var = oracles::sample_variance(vals);
    const double se = std::sqrt(spec.emissions.sigma2[s] / vals.size());
    CHECK(std::abs(mean - spec.emissions.coef(s, 0)) < 4.0 * se);
    CHECK(var == doctest::Approx(spec.emissions.sigma2[s]).epsilon(0.05));
  }
}

TEST_CASE("generation is deterministic and dimensionally consistent") {
  GenerativeSpec spec;
  spec.states = 3;
  spec.T = 200;
  spec.seed = 9;
  spec.covariates = 2;
  spec.ar_term = true;
  spec.emissions.coef = Eigen::MatrixXd::Zero(3, 4);
  spec.emissions.coef.col(0) << -1.0, 0.0, 1.0;
  spec.emissions.sigma2 = Eigen::Vector3d(2.0, 1.0, 0.5);
  std::vector<Eigen::MatrixXd> beta(3, Eigen::MatrixXd::Zero(4, 3));
  beta[0](1, 0) = 1.0;
  spec.transitions = TransitionModel::multinomial(beta);

  const Generated a = generate(spec);
  const Generated b = generate(spec);
  CHECK(dataset_fingerprint(a.data) == dataset_fingerprint(b.data));
  CHECK(a.truth == b.truth);
  CHECK(a.data.columns() == 4);
  CHECK(a.data.column_names.back() == "AR1");
  // AR column lags the target by one step.
  for (int t = 1; t < 200; ++t)
    CHECK(a.data.X(t, 3) == doctest::Approx(a.data.y[t - 1]));
  CHECK(a.data.X(0, 3) == 0.0);
}
