#include "mshmm/samplers.hpp"

#include <cmath>

#include "mshmm/errors.hpp"
#include "mshmm/polyagamma.hpp"

namespace mshmm {

void LinearRegressionPrior::validate() const {
  const Eigen::Index k = mean.size();
  if (cov.rows() != k || cov.cols() != k)
    throw DimensionError("regression prior: covariance shape != mean length");
  if (!(shape > 0.0) || !(scale > 0.0))
    throw ConfigError("regression prior: shape and scale must be positive");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw NumericError("regression prior: covariance is not positive definite");
}

LinearRegressionPrior LinearRegressionPrior::diffuse(int dim, double var, double shape,
                                                     double scale) {
  LinearRegressionPrior p;
  p.mean = Eigen::VectorXd::Zero(dim);
  p.cov = var * Eigen::MatrixXd::Identity(dim, dim);
  p.shape = shape;
  p.scale = scale;
  p.validate();
  return p;
}

LinRegDraw gibbs_linear_regression(Rng& rng, const Eigen::VectorXd& y_s,
                                   const Eigen::MatrixXd& X_s,
                                   const LinearRegressionPrior& prior, double current_sigma2) {
  prior.validate();
  const Eigen::Index k = prior.mean.size();
  const Eigen::Index n = y_s.size();
  if (X_s.rows() != n) throw DimensionError("gibbs regression: X rows != y length");
  if (n > 0 && X_s.cols() != k)
    throw DimensionError("gibbs regression: X columns != prior dimension");
  if (!(current_sigma2 > 0.0)) throw NumericError("gibbs regression: sigma2 must be positive");

  const Eigen::MatrixXd prior_prec = prior.cov.llt().solve(Eigen::MatrixXd::Identity(k, k));

  LinRegDraw out;
  if (n == 0) {
    // Empty-data conditional: draw from the prior.
    const Eigen::LLT<Eigen::MatrixXd> llt(prior.cov);
    out.coef = prior.mean + llt.matrixL() * rng.standard_normal_vector(static_cast<int>(k));
    out.sigma2 = rng.inverse_gamma(prior.shape, prior.scale);
    return out;
  }

  // B | sigma2, y ~ N(Pn^{-1} (V0^{-1} m0 + X'y / sigma2), Pn^{-1}),
  // Pn = V0^{-1} + X'X / sigma2.
  const Eigen::MatrixXd prec = prior_prec + (X_s.transpose() * X_s) / current_sigma2;
  const Eigen::VectorXd lin = prior_prec * prior.mean + (X_s.transpose() * y_s) / current_sigma2;
  const Eigen::LLT<Eigen::MatrixXd> llt(prec);
  if (llt.info() != Eigen::Success)
    throw NumericError("gibbs regression: singular posterior precision");
  const Eigen::VectorXd mean = llt.solve(lin);
  out.coef = mean + llt.matrixU().solve(rng.standard_normal_vector(static_cast<int>(k)));

  // sigma2 | B, y ~ IG(a0 + n/2, b0 + ||y - XB||^2 / 2).
  const double ssr = (y_s - X_s * out.coef).squaredNorm();
  out.sigma2 = rng.inverse_gamma(prior.shape + 0.5 * static_cast<double>(n),
                                 prior.scale + 0.5 * ssr);
  return out;
}

namespace {

// log sum_{l != skip} exp(eta_l) with the usual max shift.
double lse_excluding(const Eigen::VectorXd& eta, int skip) {
  double mx = -std::numeric_limits<double>::infinity();
  for (int l = 0; l < eta.size(); ++l)
    if (l != skip && eta[l] > mx) mx = eta[l];
  double s = 0.0;
  for (int l = 0; l < eta.size(); ++l)
    if (l != skip) s += std::exp(eta[l] - mx);
  return mx + std::log(s);
}

}  // namespace

void gibbs_multinomial_logit(Rng& rng, const StatePath& path, const Eigen::MatrixXd& X_trans,
                             std::vector<Eigen::MatrixXd>& beta, double prior_var,
                             const std::vector<int>& active_cols) {
  const int m = static_cast<int>(beta.size());
  if (m < 1) throw DimensionError("multinomial update: empty coefficient set");
  if (m == 1) return;  // single state: softmax is identically 1, nothing to update
  const int k2 = static_cast<int>(beta[0].rows());
  if (X_trans.cols() != k2)
    throw DimensionError("multinomial update: design width != coefficient length");
  if (!(prior_var > 0.0)) throw ConfigError("multinomial update: prior_var must be positive");
  if (path.size() > static_cast<std::size_t>(X_trans.rows()) + 1)
    throw DimensionError("multinomial update: transition design has too few rows");
  for (int c : active_cols)
    if (c < 0 || c >= k2) throw DimensionError("multinomial update: active column out of range");

  const int ka = static_cast<int>(active_cols.size());
  const double prior_prec = 1.0 / prior_var;

  // Transition observations out of each row i: times t with z_t = i, t < T-1.
  std::vector<std::vector<int>> times(static_cast<std::size_t>(m));
  for (std::size_t t = 0; t + 1 < path.size(); ++t)
    times[static_cast<std::size_t>(path[t])].push_back(static_cast<int>(t));

  Eigen::MatrixXd prec(ka, ka);
  Eigen::VectorXd lin(ka), xa(ka);

  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m - 1; ++j) {  // baseline category m-1 stays zero
      prec = prior_prec * Eigen::MatrixXd::Identity(ka, ka);
      lin.setZero();
      for (int t : times[static_cast<std::size_t>(i)]) {
        const Eigen::VectorXd x = X_trans.row(t).transpose();
        // Reduce the category-j likelihood to binary-logistic form with
        // offset C = log sum_{l != j} exp(x' beta_il).
        const Eigen::VectorXd eta = beta[static_cast<std::size_t>(i)].transpose() * x;
        const double offset = lse_excluding(eta, j);
        const double psi = eta[j] - offset;
        const double omega = sample_pg1(rng, psi);
        const double u = path[static_cast<std::size_t>(t) + 1] == j ? 1.0 : 0.0;
        const double kappa = u - 0.5;
        for (int a = 0; a < ka; ++a) xa[a] = x[active_cols[static_cast<std::size_t>(a)]];
        prec.noalias() += omega * xa * xa.transpose();
        lin.noalias() += (kappa + omega * offset) * xa;
      }
      const Eigen::LLT<Eigen::MatrixXd> llt(prec);
      if (llt.info() != Eigen::Success)
        throw NumericError("multinomial update: singular conditional precision");
      const Eigen::VectorXd mean = llt.solve(lin);
      const Eigen::VectorXd draw = mean + llt.matrixU().solve(rng.standard_normal_vector(ka));
      for (int a = 0; a < ka; ++a)
        beta[static_cast<std::size_t>(i)](active_cols[static_cast<std::size_t>(a)], j) = draw[a];
    }
  }
}

void rj_variable_select(Rng& rng, InclusionState& state, const StatePath& path,
                        const Eigen::MatrixXd& X_trans, std::vector<Eigen::MatrixXd>& beta,
                        double prior_var, double prior_inclusion) {
  const int m = static_cast<int>(beta.size());
  const int kp = static_cast<int>(state.gamma.size());
  if (kp == 0) return;
  if (!(prior_inclusion >= 0.0 && prior_inclusion <= 1.0))
    throw ConfigError("rj step: prior inclusion probability must lie in [0,1]");

  const int p = kp == 1 ? 0 : static_cast<int>(rng.uniform() * kp) % kp;
  const int col = p + 1;  // design column (0 is the intercept)
  const bool birth = state.gamma[static_cast<std::size_t>(p)] == 0;

  // Degenerate priors decide moves outright.
  if (birth && prior_inclusion == 0.0) return;
  if (!birth && prior_inclusion == 1.0) return;

  const TransitionModel current = TransitionModel::multinomial(beta);
  const double loglik_old = transition_loglik(path, current, X_trans);

  std::vector<Eigen::MatrixXd> proposal = beta;
  if (birth) {
    const double sd = std::sqrt(prior_var);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m - 1; ++j)
        proposal[static_cast<std::size_t>(i)](col, j) = sd * rng.normal();
  } else {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m - 1; ++j) proposal[static_cast<std::size_t>(i)](col, j) = 0.0;
  }

  const TransitionModel proposed = TransitionModel::multinomial(proposal);
  const double loglik_new = transition_loglik(path, proposed, X_trans);

  // Proposal density equals the coefficient prior, so only the likelihood
  // ratio and the prior inclusion odds remain.
  double log_accept = loglik_new - loglik_old;
  if (birth)
    log_accept += std::log(prior_inclusion) - std::log1p(-prior_inclusion);
  else
    log_accept += std::log1p(-prior_inclusion) - std::log(prior_inclusion);

  if (std::log(rng.uniform()) < log_accept) {
    beta = std::move(proposal);
    state.gamma[static_cast<std::size_t>(p)] = birth ? 1 : 0;
  }
}

Eigen::VectorXd inclusion_probabilities(const std::vector<std::vector<int>>& gamma_draws) {
  if (gamma_draws.empty())
    throw DimensionError("inclusion probabilities: no retained draws");
  const std::size_t kp = gamma_draws.front().size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kp));
  for (const auto& g : gamma_draws) {
    if (g.size() != kp)
      throw DimensionError("inclusion probabilities: ragged draw set");
    for (std::size_t p = 0; p < kp; ++p) out[static_cast<Eigen::Index>(p)] += g[p];
  }
  return out / static_cast<double>(gamma_draws.size());
}

}  // namespace mshmm
