#ifndef MSHMM_FORECAST_HPP
#define MSHMM_FORECAST_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mshmm/models.hpp"

namespace mshmm {

// Posterior-predictive draws for one out-of-sample horizon, one value per
// retained MCMC draw, paired with the realized observation.
struct PredictiveSample {
  int horizon = 0;  // 1-based
  Eigen::VectorXd draws;
  double realized = 0.0;
};

// One-step-ahead simulation over horizons 1..L with parameters held fixed at
// their posterior draws. For horizon l the hidden state is filtered on data
// through row T+l-1, propagated through the transition row evaluated at the
// covariates of that row, and the observation drawn from the reached state's
// regression. `full` must extend at least L rows past the training window.
std::vector<PredictiveSample> one_step_forecasts(Rng& rng, const PosteriorDraws& draws,
                                                 const AlignedDataset& full, int L);

// Empirical CRPS via the sample identity E|Y - y| - 0.5 E|Y - Y'|, the
// pairwise term computed exactly from the sorted sample. Lower is better.
double crps_empirical(const PredictiveSample& sample);

// Mean squared deviation of the predictive draws from the realized value.
double mse(const PredictiveSample& sample);

struct EvaluationReport {
  std::string model;
  std::vector<double> crps;  // per horizon
  std::vector<double> mse;   // per horizon
  double avg_crps = 0.0;
  double avg_mse = 0.0;
};

EvaluationReport evaluate_forecasts(const std::string& model,
                                    const std::vector<PredictiveSample>& samples);

// In-sample coverage of the row-wise empirical [lower_q, upper_q] band.
struct Coverage {
  int outliers = 0;
  int rows = 0;
  double lower_q = 0.005;
  double upper_q = 0.995;

  double proportion() const { return rows > 0 ? static_cast<double>(outliers) / rows : 0.0; }
  // Report cell, e.g. "0.05 (121/2114)": proportion truncated to 2 decimals
  // plus the exact fraction.
  std::string formatted() const;
};

Coverage coverage_report(const Eigen::MatrixXd& replicated, const Eigen::VectorXd& y,
                         double lower_q = 0.005, double upper_q = 0.995);

// Occupancies plus return moments per state under the maximum-a-posteriori
// smoothed classification (per-time argmax of sampled-path frequencies).
// Moments are NaN for states that never win a time point.
struct StateSummary {
  Eigen::VectorXd occupancy;
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;
  std::vector<int> map_state;   // per time point, 0-based
  Eigen::MatrixXd frequencies;  // T x m share of draws in each state
};

StateSummary state_summary(const std::vector<StatePath>& paths, const Eigen::VectorXd& y, int m);

// Reports sorted by average CRPS (ties: average MSE, then model name).
struct ComparisonTable {
  std::vector<EvaluationReport> ranked;
  std::vector<int> spot_horizons;  // 1, 2, 7, 15, 30 clipped to L
  int horizons = 0;

  int best_for_horizon(int horizon) const;  // index into ranked, by CRPS
};

ComparisonTable compare_models(const std::vector<EvaluationReport>& reports);

}  // namespace mshmm

#endif
