#ifndef MSHMM_HMM_HPP
#define MSHMM_HMM_HPP

#include <vector>

#include <Eigen/Dense>

#include "mshmm/rng.hpp"

namespace mshmm {

// Hidden states are 0-based internally ({0..m-1}); reports render them 1-based.
using StatePath = std::vector<int>;

// Per-state regression coefficients and noise variance of the observation
// equation y_t = B_{z_t} x_t + eps,  eps ~ N(0, sigma2_{z_t}).
struct EmissionParams {
  Eigen::MatrixXd coef;    // m x k1 (row s = B_s)
  Eigen::VectorXd sigma2;  // m, strictly positive

  int states() const { return static_cast<int>(sigma2.size()); }
  void validate() const;
};

// Transition probabilities: either a constant stochastic matrix or a
// multinomial-logit model p_{ij}(t) = softmax_j(x_t' beta_i.)_j with the last
// state as the zero-coefficient baseline category.
class TransitionModel {
 public:
  enum class Kind { Constant, Multinomial };

  static TransitionModel constant(Eigen::MatrixXd matrix);
  // beta[i] is k2 x m; column m-1 (baseline) must be identically zero.
  static TransitionModel multinomial(std::vector<Eigen::MatrixXd> beta);

  Kind kind() const { return kind_; }
  int states() const;
  int covariate_dim() const;  // k2 for multinomial, 0 for constant

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const std::vector<Eigen::MatrixXd>& beta() const { return beta_; }
  std::vector<Eigen::MatrixXd>& beta() { return beta_; }

  void validate() const;

  // States relabeled by `perm`, where perm[new_label] = old_label. For the
  // multinomial form the new baseline column is re-zeroed by subtracting it
  // from every category, which leaves all probabilities unchanged.
  TransitionModel permuted(const std::vector<int>& perm) const;

 private:
  Kind kind_ = Kind::Constant;
  Eigen::MatrixXd matrix_;
  std::vector<Eigen::MatrixXd> beta_;
};

// Row-stochastic matrix at covariate row x_t (log-sum-exp stabilized).
Eigen::MatrixXd transition_matrix_at(const TransitionModel& model, const Eigen::VectorXd& x_t);

// Log of the above, computed directly in the log domain.
Eigen::MatrixXd log_transition_matrix_at(const TransitionModel& model, const Eigen::VectorXd& x_t);

// T x m matrix of log N(y_t; B_s x_t, sigma2_s).
Eigen::MatrixXd emission_logdens(const Eigen::VectorXd& y, const Eigen::MatrixXd& X_mean,
                                 const EmissionParams& emissions);

struct FilterResult {
  Eigen::MatrixXd filtered;  // T x m, row t = P(Z_t = . | y_1..t)
  double loglik = 0.0;
};

// Forward filter in the log domain with per-step renormalization. The
// transition from t to t+1 consumes covariate row t of X_trans. X_trans may
// be empty for constant transition models.
FilterResult forward_filter(const Eigen::VectorXd& y, const Eigen::MatrixXd& X_mean,
                            const Eigen::MatrixXd& X_trans, const EmissionParams& emissions,
                            const TransitionModel& trans, const Eigen::VectorXd& init_dist);

// T x m matrix of P(Z_t = . | y_1..T). Pass the forward result when already
// available; it is recomputed otherwise.
Eigen::MatrixXd smoothed_probs(const Eigen::VectorXd& y, const Eigen::MatrixXd& X_mean,
                               const Eigen::MatrixXd& X_trans, const EmissionParams& emissions,
                               const TransitionModel& trans, const Eigen::VectorXd& init_dist,
                               const FilterResult* forward = nullptr);

// Exact joint draw of Z_1..T given parameters (backward sampling pass over a
// completed forward filter).
StatePath ffbs_sample(Rng& rng, const FilterResult& forward, const TransitionModel& trans,
                      const Eigen::MatrixXd& X_trans);

// Marginal log-likelihood by explicit enumeration of all m^T paths.
// Test oracle for the filter; refuses instances with m^T > 10^7.
double brute_force_loglik(const Eigen::VectorXd& y, const Eigen::MatrixXd& X_mean,
                          const Eigen::MatrixXd& X_trans, const EmissionParams& emissions,
                          const TransitionModel& trans, const Eigen::VectorXd& init_dist);

// Sum over t of log p^{(t)}_{z_t, z_{t+1}} along a fixed path.
double transition_loglik(const StatePath& path, const TransitionModel& trans,
                         const Eigen::MatrixXd& X_trans);

Eigen::VectorXd uniform_init(int m);

double log_sum_exp(const Eigen::VectorXd& v);

}  // namespace mshmm

#endif
