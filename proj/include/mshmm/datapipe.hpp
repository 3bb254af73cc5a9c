#ifndef MSHMM_DATAPIPE_HPP
#define MSHMM_DATAPIPE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mshmm/csv.hpp"
#include "mshmm/dates.hpp"

namespace mshmm {

// Per-series transform applied before alignment. Differencing transforms
// shorten the series by one and date each output at the later endpoint.
enum class TransformKind {
  PctLogReturn,  // 100 * (log p_{t+1} - log p_t)
  LogReturn,     // log p_{t+1} - log p_t
  LogLevel,      // log p_t
  Normalize,     // (x - mean) / sample sd
  PctChange,     // 100 * (x_{t+1} - x_t) / x_t
  Identity,
};

TransformKind transform_from_string(const std::string& s);
std::string to_string(TransformKind k);

// Where a series enters the model: the target return series, the mean
// equation, the transition equation, or both equations.
enum class SeriesRole { Target, Predictor, TransitionOnly, Both };

SeriesRole role_from_string(const std::string& s);
std::string to_string(SeriesRole r);

std::vector<double> pct_log_returns(const std::vector<double>& prices);
std::vector<double> log_returns(const std::vector<double>& prices);
std::vector<double> log_levels(const std::vector<double>& prices);
std::vector<double> normalize(const std::vector<double>& x);
std::vector<double> normalize_with(const std::vector<double>& x, double mean, double sd);
std::vector<double> pct_change(const std::vector<double>& x);

// Target return series paired with the regression design matrix.
// X column 0 is the intercept; the AR(1) column, when present, is last.
struct AlignedDataset {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  std::vector<std::string> column_names;  // size X.cols(), [0] == "intercept"
  std::vector<Date> dates;                // size y

  int rows() const { return static_cast<int>(y.size()); }
  int columns() const { return static_cast<int>(X.cols()); }
  int column_index(const std::string& name) const;  // -1 when absent
  AlignedDataset head(int n) const;
  void validate() const;
};

// FNV-1a over the dataset contents; used to tie persisted draws to the
// exact dataset they were fitted on.
std::uint64_t dataset_fingerprint(const AlignedDataset& data);

// Builds y and X from raw series. Rows are aligned on the target calendar,
// each predictor forward-filled from its most recent observation on or
// before the target date. The first max(1, ar_lag) rows are dropped to
// absorb differencing and the AR term.
//
// holdout_rows freezes Normalize statistics to the training window (the
// final holdout_rows rows are excluded from mean/sd estimation) so the
// out-of-sample exercise sees no future information.
AlignedDataset assemble(const RawSeries& target,
                        const std::vector<std::pair<RawSeries, TransformKind>>& predictors,
                        int ar_lag,
                        int holdout_rows = 0,
                        TransformKind target_transform = TransformKind::PctLogReturn);

// Dataset manifest: one [series <name>] section per input file.
struct ManifestEntry {
  std::string name;
  std::string file;  // resolved relative to the manifest location
  TransformKind transform = TransformKind::Identity;
  SeriesRole role = SeriesRole::Both;
};

struct Manifest {
  std::vector<ManifestEntry> entries;

  const ManifestEntry& target() const;
  std::vector<const ManifestEntry*> predictors() const;  // everything but the target
};

Manifest parse_manifest(const std::string& path);

// Reads every series named by the manifest and assembles the dataset.
AlignedDataset load_dataset(const Manifest& manifest, int ar_lag, int holdout_rows);

// Mean- and transition-equation rosters implied by the manifest roles
// (excluding the intercept; including "AR1" when ar_lag = 1).
std::vector<std::string> mean_roster_from_manifest(const Manifest& m, int ar_lag);
std::vector<std::string> transition_roster_from_manifest(const Manifest& m, int ar_lag);

}  // namespace mshmm

#endif
