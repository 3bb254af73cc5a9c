#ifndef MSHMM_SAMPLERS_HPP
#define MSHMM_SAMPLERS_HPP

#include <vector>

#include <Eigen/Dense>

#include "mshmm/hmm.hpp"
#include "mshmm/rng.hpp"

namespace mshmm {

// Semi-conjugate prior for one state's regression block:
//   B ~ N(mean, cov),  sigma2 ~ Inverse-Gamma(shape, scale), independently.
struct LinearRegressionPrior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  double shape = 2.0;
  double scale = 1.0;

  void validate() const;
  // Zero-mean N(0, var*I) coefficient prior.
  static LinearRegressionPrior diffuse(int dim, double var, double shape, double scale);
};

struct LinRegDraw {
  Eigen::VectorXd coef;
  double sigma2 = 1.0;
};

// One Gibbs scan of a state's regression block: B from its Gaussian full
// conditional given sigma2, then sigma2 from its Inverse-Gamma full
// conditional given the new B. With zero assigned rows both are prior draws.
LinRegDraw gibbs_linear_regression(Rng& rng, const Eigen::VectorXd& y_s,
                                   const Eigen::MatrixXd& X_s,
                                   const LinearRegressionPrior& prior, double current_sigma2);

// One full sweep of Polya-Gamma updates over the multinomial transition
// coefficients (rows i ascending, categories j ascending; baseline column
// stays zero). Only design columns listed in active_cols are updated; the
// rest are left untouched (zero under the variable-selection invariant).
// Coefficient prior: independent N(0, prior_var) on each active entry.
void gibbs_multinomial_logit(Rng& rng, const StatePath& path, const Eigen::MatrixXd& X_trans,
                             std::vector<Eigen::MatrixXd>& beta, double prior_var,
                             const std::vector<int>& active_cols);

// Inclusion indicators for the transition-equation predictors (intercept
// excluded, always active).
struct InclusionState {
  std::vector<int> gamma;  // entries in {0,1}; index p maps to design column p+1
};

// One reversible-jump toggle: pick one predictor uniformly, propose birth
// (coefficients drawn from the prior) or death (coefficients zeroed), accept
// by the transition-likelihood ratio times the prior inclusion odds.
void rj_variable_select(Rng& rng, InclusionState& state, const StatePath& path,
                        const Eigen::MatrixXd& X_trans, std::vector<Eigen::MatrixXd>& beta,
                        double prior_var, double prior_inclusion);

// Per-predictor posterior inclusion frequency across retained draws.
Eigen::VectorXd inclusion_probabilities(const std::vector<std::vector<int>>& gamma_draws);

}  // namespace mshmm

#endif
