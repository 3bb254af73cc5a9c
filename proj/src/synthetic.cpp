#include "mshmm/synthetic.hpp"

#include <cmath>

#include "mshmm/errors.hpp"
#include "mshmm/rng.hpp"

namespace mshmm {

void GenerativeSpec::validate() const {
  if (T < 10) throw ConfigError("generative spec: T must be at least 10");
  if (states < 1) throw ConfigError("generative spec: need at least one state");
  emissions.validate();
  transitions.validate();
  if (emissions.states() != states || transitions.states() != states)
    throw DimensionError("generative spec: parameter state counts disagree");
  const int k = 1 + covariates + (ar_term ? 1 : 0);
  if (emissions.coef.cols() != k)
    throw DimensionError("generative spec: emission coefficients expect " +
                         std::to_string(emissions.coef.cols()) + " columns, design has " +
                         std::to_string(k));
  if (transitions.kind() == TransitionModel::Kind::Multinomial &&
      transitions.covariate_dim() != k)
    throw DimensionError("generative spec: transition coefficients do not match the design");
  if (covariate_matrix.size() > 0 &&
      (covariate_matrix.rows() != T || covariate_matrix.cols() != covariates))
    throw DimensionError("generative spec: covariate matrix must be T x covariates");
}

Generated generate(const GenerativeSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const int T = spec.T;
  const int m = spec.states;
  const int k = 1 + spec.covariates + (spec.ar_term ? 1 : 0);
  const int ar_col = k - 1;

  Generated out;
  out.data.y.resize(T);
  out.data.X.resize(T, k);
  out.data.column_names.push_back("intercept");
  for (int j = 1; j <= spec.covariates; ++j)
    out.data.column_names.push_back("x" + std::to_string(j));
  if (spec.ar_term) out.data.column_names.push_back("AR1");
  out.data.dates.resize(static_cast<std::size_t>(T));
  out.truth.resize(static_cast<std::size_t>(T));

  const Date start = days_from_civil(2020, 1, 1);
  const Eigen::VectorXd init = uniform_init(m);

  int z = rng.categorical(init);
  double prev_y = 0.0;
  for (int t = 0; t < T; ++t) {
    out.data.dates[static_cast<std::size_t>(t)] = start + t;
    out.data.X(t, 0) = 1.0;
    for (int j = 0; j < spec.covariates; ++j)
      out.data.X(t, 1 + j) =
          spec.covariate_matrix.size() > 0 ? spec.covariate_matrix(t, j) : rng.normal();
    if (spec.ar_term) out.data.X(t, ar_col) = prev_y;  // zero before the first observation

    if (t > 0 && m > 1) {
      const Eigen::VectorXd x_prev = out.data.X.row(t - 1).transpose();
      const Eigen::MatrixXd P = transition_matrix_at(spec.transitions,
          spec.transitions.kind() == TransitionModel::Kind::Multinomial ? x_prev
                                                                        : Eigen::VectorXd());
      z = rng.categorical(P.row(z).transpose());
    }
    out.truth[static_cast<std::size_t>(t)] = z;

    const double mu = out.data.X.row(t).dot(spec.emissions.coef.row(z));
    out.data.y[t] = mu + std::sqrt(spec.emissions.sigma2[z]) * rng.normal();
    prev_y = out.data.y[t];
  }

  out.data.validate();
  return out;
}

}  // namespace mshmm
