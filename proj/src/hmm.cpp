#include "mshmm/hmm.hpp"

#include <cmath>
#include <limits>

#include "mshmm/errors.hpp"

namespace mshmm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogTwoPi = 1.8378770664093454836;

}  // namespace

double log_sum_exp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;  // all -inf (or a +inf/nan poisoned row)
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) s += std::exp(v[i] - m);
  return m + std::log(s);
}

Eigen::VectorXd uniform_init(int m) {
  return Eigen::VectorXd::Constant(m, 1.0 / m);
}

void EmissionParams::validate() const {
  if (states() < 1) throw DimensionError("emission params: need at least one state");
  if (coef.rows() != states())
    throw DimensionError("emission params: coefficient rows != state count");
  for (int s = 0; s < states(); ++s) {
    if (!(sigma2[s] > 0.0) || !std::isfinite(sigma2[s]))
      throw NumericError("emission params: sigma2 must be positive and finite");
    for (int j = 0; j < coef.cols(); ++j)
      if (!std::isfinite(coef(s, j)))
        throw NumericError("emission params: non-finite coefficient");
  }
}

TransitionModel TransitionModel::constant(Eigen::MatrixXd matrix) {
  TransitionModel out;
  out.kind_ = Kind::Constant;
  out.matrix_ = std::move(matrix);
  out.validate();
  return out;
}

TransitionModel TransitionModel::multinomial(std::vector<Eigen::MatrixXd> beta) {
  TransitionModel out;
  out.kind_ = Kind::Multinomial;
  out.beta_ = std::move(beta);
  out.validate();
  return out;
}

int TransitionModel::states() const {
  return kind_ == Kind::Constant ? static_cast<int>(matrix_.rows())
                                 : static_cast<int>(beta_.size());
}

int TransitionModel::covariate_dim() const {
  return kind_ == Kind::Constant || beta_.empty() ? 0 : static_cast<int>(beta_[0].rows());
}

void TransitionModel::validate() const {
  if (kind_ == Kind::Constant) {
    const int m = static_cast<int>(matrix_.rows());
    if (m < 1 || matrix_.cols() != m)
      throw DimensionError("transition matrix must be square and non-empty");
    for (int i = 0; i < m; ++i) {
      double row = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p = matrix_(i, j);
        if (!(p >= 0.0 && p <= 1.0))
          throw NumericError("transition matrix entries must lie in [0,1]");
        row += p;
      }
      if (std::abs(row - 1.0) > 1e-12)
        throw NumericError("transition matrix row " + std::to_string(i) +
                           " does not sum to 1");
    }
    return;
  }
  const int m = static_cast<int>(beta_.size());
  if (m < 1) throw DimensionError("multinomial transition: need at least one state");
  const Eigen::Index k2 = beta_[0].rows();
  for (int i = 0; i < m; ++i) {
    if (beta_[i].rows() != k2 || beta_[i].cols() != m)
      throw DimensionError("multinomial transition: beta[" + std::to_string(i) +
                           "] has wrong shape");
    for (Eigen::Index r = 0; r < k2; ++r) {
      if (beta_[i](r, m - 1) != 0.0)
        throw NumericError("multinomial transition: baseline column must be zero");
      for (int j = 0; j < m; ++j)
        if (!std::isfinite(beta_[i](r, j)))
          throw NumericError("multinomial transition: non-finite coefficient");
    }
  }
}

TransitionModel TransitionModel::permuted(const std::vector<int>& perm) const {
  const int m = states();
  if (static_cast<int>(perm.size()) != m)
    throw DimensionError("permutation size != state count");
  if (kind_ == Kind::Constant) {
    Eigen::MatrixXd P(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) P(i, j) = matrix_(perm[i], perm[j]);
    return constant(std::move(P));
  }
  std::vector<Eigen::MatrixXd> beta(m);
  for (int i = 0; i < m; ++i) {
    Eigen::MatrixXd b(beta_[0].rows(), m);
    for (int j = 0; j < m; ++j) b.col(j) = beta_[perm[i]].col(perm[j]);
    // Restore the baseline-zero identification for the new labeling.
    const Eigen::VectorXd base = b.col(m - 1);
    for (int j = 0; j < m; ++j) b.col(j) -= base;
    beta[i] = std::move(b);
  }
  return multinomial(std::move(beta));
}

Eigen::MatrixXd log_transition_matrix_at(const TransitionModel& model,
                                         const Eigen::VectorXd& x_t) {
  const int m = model.states();
  Eigen::MatrixXd out(m, m);
  if (model.kind() == TransitionModel::Kind::Constant) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        out(i, j) = model.matrix()(i, j) > 0.0 ? std::log(model.matrix()(i, j)) : kNegInf;
    return out;
  }
  if (x_t.size() != model.covariate_dim())
    throw DimensionError("transition covariates: expected length " +
                         std::to_string(model.covariate_dim()) + ", got " +
                         std::to_string(x_t.size()));
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd eta = model.beta()[i].transpose() * x_t;
    for (int j = 0; j < m; ++j)
      if (!std::isfinite(eta[j]))
        throw NumericError("transition model: non-finite linear predictor (row " +
                           std::to_string(i) + ")");
    const double lse = log_sum_exp(eta);
    out.row(i) = (eta.array() - lse).transpose();
  }
  return out;
}

Eigen::MatrixXd transition_matrix_at(const TransitionModel& model, const Eigen::VectorXd& x_t) {
  if (model.kind() == TransitionModel::Kind::Constant) return model.matrix();
  return log_transition_matrix_at(model, x_t).array().exp();
}

Eigen::MatrixXd emission_logdens(const Eigen::VectorXd& y, const Eigen::MatrixXd& X_mean,
                                 const EmissionParams& emissions) {
  emissions.validate();
  const int T = static_cast<int>(y.size());
  const int m = emissions.states();
  if (X_mean.rows() != T) throw DimensionError("emission design: row count != y length");
  if (X_mean.cols() != emissions.coef.cols())
    throw DimensionError("emission design: column count != coefficient length");
  Eigen::MatrixXd mu = X_mean * emissions.coef.transpose();  // T x m
  Eigen::MatrixXd out(T, m);
  for (int s = 0; s < m; ++s) {
    const double c = -0.5 * (kLogTwoPi + std::log(emissions.sigma2[s]));
    const double inv2 = 0.5 / emissions.sigma2[s];
    for (int t = 0; t < T; ++t) {
      const double r = y[t] - mu(t, s);
      out(t, s) = c - r * r * inv2;
    }
  }
  return out;
}

namespace {

// Internal accessor that avoids recomputing the constant case per step.
struct TransitionCache {
  const TransitionModel& model;
  const Eigen::MatrixXd& X_trans;
  Eigen::MatrixXd const_log;
  bool is_const;

  TransitionCache(const TransitionModel& m, const Eigen::MatrixXd& X)
      : model(m), X_trans(X), is_const(m.kind() == TransitionModel::Kind::Constant) {
    if (is_const) const_log = log_transition_matrix_at(m, Eigen::VectorXd());
  }

  Eigen::MatrixXd log_at(int t) const {
    if (is_const) return const_log;
    if (t >= X_trans.rows())
      throw DimensionError("transition covariates: missing row " + std::to_string(t));
    return log_transition_matrix_at(model, X_trans.row(t).transpose());
  }
};

void check_filter_inputs(const Eigen::VectorXd& y, const Eigen::MatrixXd& X_mean,
                         const Eigen::MatrixXd& X_trans, const EmissionParams& emissions,
                         const TransitionModel& trans, const Eigen::VectorXd& init_dist) {
  const int m = emissions.states();
  if (trans.states() != m)
    throw DimensionError("transition model state count != emission state count");
  if (init_dist.size() != m) throw DimensionError("initial distribution length != states");
  const double s = init_dist.sum();
  if (std::abs(s - 1.0) > 1e-9 || init_dist.minCoeff() < 0.0)
    throw NumericError("initial distribution is not a probability vector");
  if (y.size() < 1) throw DimensionError("filter: empty observation vector");
  if (trans.kind() == TransitionModel::Kind::Multinomial && y.size() > 1 &&
      X_trans.rows() < y.size() - 1)
    throw DimensionError("transition covariates: need at least T-1 rows");
  (void)X_mean;
}

}  // namespace

FilterResult forward_filter(const Eigen::VectorXd& y, const Eigen::MatrixXd& X_mean,
                            const Eigen::MatrixXd& X_trans, const EmissionParams& emissions,
                            const TransitionModel& trans, const Eigen::VectorXd& init_dist) {
  check_filter_inputs(y, X_mean, X_trans, emissions, trans, init_dist);
  const int T = static_cast<int>(y.size());
  const int m = emissions.states();
  const Eigen::MatrixXd le = emission_logdens(y, X_mean, emissions);
  const TransitionCache cache(trans, X_trans);

  FilterResult out;
  out.filtered.resize(T, m);
  out.loglik = 0.0;

  Eigen::VectorXd log_alpha(m), next(m);
  for (int s = 0; s < m; ++s)
    log_alpha[s] = (init_dist[s] > 0.0 ? std::log(init_dist[s]) : kNegInf) + le(0, s);

  for (int t = 0; t < T; ++t) {
    if (t > 0) {
      const Eigen::MatrixXd logP = cache.log_at(t - 1);
      for (int j = 0; j < m; ++j) {
        Eigen::VectorXd terms = log_alpha + logP.col(j);
        next[j] = log_sum_exp(terms) + le(t, j);
      }
      log_alpha = next;
    }
    const double norm = log_sum_exp(log_alpha);
    if (!std::isfinite(norm))
      throw NumericError("forward filter: probability row underflowed at t = " +
                         std::to_string(t));
    out.loglik += norm;
    log_alpha.array() -= norm;
    out.filtered.row(t) = log_alpha.array().exp().transpose();
    out.filtered.row(t) /= out.filtered.row(t).sum();  // exact renormalization
  }
  return out;
}

Eigen::MatrixXd smoothed_probs(const Eigen::VectorXd& y, const Eigen::MatrixXd& X_mean,
                               const Eigen::MatrixXd& X_trans, const EmissionParams& emissions,
                               const TransitionModel& trans, const Eigen::VectorXd& init_dist,
                               const FilterResult* forward) {
  FilterResult local;
  if (!forward) {
    local = forward_filter(y, X_mean, X_trans, emissions, trans, init_dist);
    forward = &local;
  }
  const int T = static_cast<int>(y.size());
  const int m = emissions.states();
  const Eigen::MatrixXd le = emission_logdens(y, X_mean, emissions);
  const TransitionCache cache(trans, X_trans);

  Eigen::MatrixXd log_beta(T, m);
  log_beta.row(T - 1).setZero();
  for (int t = T - 2; t >= 0; --t) {
    const Eigen::MatrixXd logP = cache.log_at(t);
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXd terms(m);
      for (int j = 0; j < m; ++j) terms[j] = logP(i, j) + le(t + 1, j) + log_beta(t + 1, j);
      log_beta(t, i) = log_sum_exp(terms);
    }
  }

  Eigen::MatrixXd out(T, m);
  for (int t = 0; t < T; ++t) {
    Eigen::VectorXd w(m);
    for (int s = 0; s < m; ++s) {
      const double f = forward->filtered(t, s);
      w[s] = (f > 0.0 ? std::log(f) : kNegInf) + log_beta(t, s);
    }
    const double norm = log_sum_exp(w);
    if (!std::isfinite(norm))
      throw NumericError("smoother: probability row underflowed at t = " + std::to_string(t));
    out.row(t) = (w.array() - norm).exp().transpose();
    out.row(t) /= out.row(t).sum();
  }
  return out;
}

StatePath ffbs_sample(Rng& rng, const FilterResult& forward, const TransitionModel& trans,
                      const Eigen::MatrixXd& X_trans) {
  const int T = static_cast<int>(forward.filtered.rows());
  const int m = static_cast<int>(forward.filtered.cols());
  const TransitionCache cache(trans, X_trans);

  StatePath path(static_cast<std::size_t>(T));
  path[static_cast<std::size_t>(T - 1)] =
      rng.categorical(forward.filtered.row(T - 1).transpose());
  for (int t = T - 2; t >= 0; --t) {
    const Eigen::MatrixXd logP = cache.log_at(t);
    const int znext = path[static_cast<std::size_t>(t + 1)];
    Eigen::VectorXd w(m);
    for (int i = 0; i < m; ++i)
      w[i] = forward.filtered(t, i) * std::exp(logP(i, znext));
    path[static_cast<std::size_t>(t)] = rng.categorical(w);
  }
  return path;
}

double brute_force_loglik(const Eigen::VectorXd& y, const Eigen::MatrixXd& X_mean,
                          const Eigen::MatrixXd& X_trans, const EmissionParams& emissions,
                          const TransitionModel& trans, const Eigen::VectorXd& init_dist) {
  check_filter_inputs(y, X_mean, X_trans, emissions, trans, init_dist);
  const int T = static_cast<int>(y.size());
  const int m = emissions.states();
  double paths = 1.0;
  for (int t = 0; t < T; ++t) {
    paths *= m;
    if (paths > 1e7)
      throw DimensionError("brute_force_loglik: m^T exceeds 10^7, instance too large");
  }

  const Eigen::MatrixXd le = emission_logdens(y, X_mean, emissions);
  const TransitionCache cache(trans, X_trans);
  std::vector<Eigen::MatrixXd> logP(static_cast<std::size_t>(std::max(0, T - 1)));
  for (int t = 0; t + 1 < T; ++t) logP[static_cast<std::size_t>(t)] = cache.log_at(t);

  StatePath z(static_cast<std::size_t>(T), 0);
  // Streaming log-sum-exp over all m^T path weights.
  double running_max = kNegInf, running_sum = 0.0;
  while (true) {
    double w = init_dist[z[0]] > 0.0 ? std::log(init_dist[z[0]]) : kNegInf;
    w += le(0, z[0]);
    for (int t = 1; t < T; ++t)
      w += logP[static_cast<std::size_t>(t - 1)](z[static_cast<std::size_t>(t - 1)],
                                                 z[static_cast<std::size_t>(t)]) +
           le(t, z[static_cast<std::size_t>(t)]);
    if (w > running_max) {
      running_sum = running_sum * std::exp(running_max - w) + 1.0;
      running_max = w;
    } else if (std::isfinite(w)) {
      running_sum += std::exp(w - running_max);
    }
    // Odometer increment over the path space.
    int pos = T - 1;
    while (pos >= 0 && z[static_cast<std::size_t>(pos)] == m - 1) {
      z[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++z[static_cast<std::size_t>(pos)];
  }
  return running_max + std::log(running_sum);
}

double transition_loglik(const StatePath& path, const TransitionModel& trans,
                         const Eigen::MatrixXd& X_trans) {
  const TransitionCache cache(trans, X_trans);
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < path.size(); ++t)
    total += cache.log_at(static_cast<int>(t))(path[t], path[t + 1]);
  return total;
}

}  // namespace mshmm
