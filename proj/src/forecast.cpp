#include "mshmm/forecast.hpp"

#include <algorithm>
#include <cmath>

#include "mshmm/errors.hpp"
#include "mshmm/io.hpp"
#include "mshmm/stats.hpp"

namespace mshmm {

std::vector<PredictiveSample> one_step_forecasts(Rng& rng, const PosteriorDraws& draws,
                                                 const AlignedDataset& full, int L) {
  draws.validate();
  if (L < 1) throw ConfigError("forecast: L must be at least 1");
  const int train = draws.train_rows;
  if (full.rows() < train + L)
    throw DimensionError("forecast: dataset is missing the out-of-sample covariate row for horizon " +
                         std::to_string(full.rows() - train + 1));

  const ResolvedDesign d = resolve_design(full, draws.spec);
  if (d.mean_names != draws.mean_names || d.trans_names != draws.trans_names)
    throw DimensionError("forecast: dataset columns do not match the fitted design");
  const int offset = draws.offset;
  const int m = draws.spec.states;
  const int n = draws.size();

  std::vector<PredictiveSample> out(static_cast<std::size_t>(L));
  for (int l = 1; l <= L; ++l) {
    auto& s = out[static_cast<std::size_t>(l - 1)];
    s.horizon = l;
    s.draws.resize(n);
    s.realized = full.y[train + l - 1];
  }

  const Eigen::VectorXd init_dist = uniform_init(m);
  for (int j = 0; j < n; ++j) {
    const EmissionParams& em = draws.emissions[static_cast<std::size_t>(j)];
    const TransitionModel& trans = draws.transitions[static_cast<std::size_t>(j)];

    FilterResult fr;
    if (m > 1) {
      // One filter pass per draw covers every horizon: the filtered
      // distribution for horizon l sits at design row train+l-2.
      const int upto = train + L - 1 - offset;
      fr = forward_filter(d.y.head(upto), d.X_mean.topRows(upto),
                          d.X_trans.rows() > 0 ? Eigen::MatrixXd(d.X_trans.topRows(upto))
                                               : Eigen::MatrixXd(),
                          em, trans, init_dist);
    }

    for (int l = 1; l <= L; ++l) {
      const int row = train + l - 1;        // dataset row being predicted
      const int design_row = row - offset;  // its design index
      double value;
      if (m == 1) {
        value = d.X_mean.row(design_row).dot(em.coef.row(0)) +
                std::sqrt(em.sigma2[0]) * rng.normal();
      } else {
        const Eigen::VectorXd filtered = fr.filtered.row(design_row - 1).transpose();
        const Eigen::MatrixXd P = transition_matrix_at(
            trans, trans.kind() == TransitionModel::Kind::Multinomial
                       ? Eigen::VectorXd(d.X_trans.row(design_row - 1).transpose())
                       : Eigen::VectorXd());
        const Eigen::VectorXd next_probs = P.transpose() * filtered;
        const int z = rng.categorical(next_probs);
        value = d.X_mean.row(design_row).dot(em.coef.row(z)) +
                std::sqrt(em.sigma2[z]) * rng.normal();
      }
      out[static_cast<std::size_t>(l - 1)].draws[j] = value;
    }
  }
  return out;
}

double crps_empirical(const PredictiveSample& sample) {
  const int n = static_cast<int>(sample.draws.size());
  if (n < 2) throw DimensionError("crps: need at least 2 predictive draws");
  std::vector<double> sorted(sample.draws.data(), sample.draws.data() + n);
  std::sort(sorted.begin(), sorted.end());

  double abs_err = 0.0;
  for (double v : sorted) abs_err += std::abs(v - sample.realized);
  abs_err /= n;

  // E|Y - Y'| from order statistics: sum_i (2i - n - 1) x_(i) * 2 / n^2.
  double gini = 0.0;
  for (int i = 0; i < n; ++i) gini += (2.0 * (i + 1) - n - 1) * sorted[static_cast<std::size_t>(i)];
  gini *= 2.0 / (static_cast<double>(n) * n);

  return abs_err - 0.5 * gini;
}

double mse(const PredictiveSample& sample) {
  const int n = static_cast<int>(sample.draws.size());
  if (n < 1) throw DimensionError("mse: empty predictive sample");
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = sample.realized - sample.draws[i];
    total += d * d;
  }
  return total / n;
}

EvaluationReport evaluate_forecasts(const std::string& model,
                                    const std::vector<PredictiveSample>& samples) {
  if (samples.empty()) throw DimensionError("evaluate: no predictive samples");
  EvaluationReport out;
  out.model = model;
  for (const auto& s : samples) {
    out.crps.push_back(crps_empirical(s));
    out.mse.push_back(mse(s));
  }
  out.avg_crps = mean_of(out.crps);
  out.avg_mse = mean_of(out.mse);
  return out;
}

std::string Coverage::formatted() const {
  // Proportion reported to 2 decimals, truncated toward zero; the exact
  // fraction rides along in parentheses.
  const double truncated = std::floor(proportion() * 100.0 + 1e-9) / 100.0;
  return format_fixed(truncated, 2) + " (" + std::to_string(outliers) + "/" +
         std::to_string(rows) + ")";
}

Coverage coverage_report(const Eigen::MatrixXd& replicated, const Eigen::VectorXd& y,
                         double lower_q, double upper_q) {
  if (!(lower_q > 0.0 && upper_q < 1.0 && lower_q < upper_q))
    throw ConfigError("coverage: quantile levels must satisfy 0 < lower < upper < 1");
  const int T = static_cast<int>(replicated.rows());
  if (y.size() != T) throw DimensionError("coverage: y length != replicated rows");
  Coverage out;
  out.rows = T;
  out.lower_q = lower_q;
  out.upper_q = upper_q;
  std::vector<double> row(static_cast<std::size_t>(replicated.cols()));
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < replicated.cols(); ++j) row[static_cast<std::size_t>(j)] = replicated(t, j);
    std::sort(row.begin(), row.end());
    const double lo = quantile_sorted(row, lower_q);
    const double hi = quantile_sorted(row, upper_q);
    if (y[t] < lo || y[t] > hi) ++out.outliers;
  }
  return out;
}

StateSummary state_summary(const std::vector<StatePath>& paths, const Eigen::VectorXd& y, int m) {
  if (paths.empty()) throw DimensionError("state summary: no sampled paths");
  const int T = static_cast<int>(paths.front().size());
  if (y.size() != T) throw DimensionError("state summary: y length != path length");
  const double n = static_cast<double>(paths.size());

  StateSummary out;
  out.frequencies = Eigen::MatrixXd::Zero(T, m);
  for (const auto& path : paths) {
    if (static_cast<int>(path.size()) != T)
      throw DimensionError("state summary: ragged path set");
    for (int t = 0; t < T; ++t) {
      const int s = path[static_cast<std::size_t>(t)];
      if (s < 0 || s >= m) throw DimensionError("state summary: state out of range");
      out.frequencies(t, s) += 1.0;
    }
  }
  out.frequencies /= n;

  out.occupancy = out.frequencies.colwise().sum().transpose() / static_cast<double>(T);

  out.map_state.resize(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    int best = 0;
    for (int s = 1; s < m; ++s)
      if (out.frequencies(t, s) > out.frequencies(t, best)) best = s;
    out.map_state[static_cast<std::size_t>(t)] = best;
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.mean = Eigen::VectorXd::Constant(m, nan);
  out.stddev = Eigen::VectorXd::Constant(m, nan);
  for (int s = 0; s < m; ++s) {
    std::vector<double> vals;
    for (int t = 0; t < T; ++t)
      if (out.map_state[static_cast<std::size_t>(t)] == s) vals.push_back(y[t]);
    if (!vals.empty()) out.mean[s] = mean_of(vals);
    if (vals.size() >= 2) out.stddev[s] = std::sqrt(variance_of(vals));
  }
  return out;
}

ComparisonTable compare_models(const std::vector<EvaluationReport>& reports) {
  if (reports.empty()) throw DimensionError("compare: no reports");
  const std::size_t L = reports.front().crps.size();
  for (const auto& r : reports)
    if (r.crps.size() != L || r.mse.size() != L)
      throw DimensionError("compare: reports cover different horizon sets");

  ComparisonTable out;
  out.horizons = static_cast<int>(L);
  out.ranked = reports;
  std::sort(out.ranked.begin(), out.ranked.end(),
            [](const EvaluationReport& a, const EvaluationReport& b) {
              if (a.avg_crps != b.avg_crps) return a.avg_crps < b.avg_crps;
              if (a.avg_mse != b.avg_mse) return a.avg_mse < b.avg_mse;
              return a.model < b.model;
            });
  for (int h : {1, 2, 7, 15, 30})
    if (h <= out.horizons) out.spot_horizons.push_back(h);
  return out;
}

int ComparisonTable::best_for_horizon(int horizon) const {
  int best = 0;
  for (std::size_t i = 1; i < ranked.size(); ++i)
    if (ranked[i].crps[static_cast<std::size_t>(horizon - 1)] <
        ranked[static_cast<std::size_t>(best)].crps[static_cast<std::size_t>(horizon - 1)])
      best = static_cast<int>(i);
  return best;
}

}  // namespace mshmm
