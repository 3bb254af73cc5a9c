#include "mshmm/datapipe.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>

#include "mshmm/errors.hpp"
#include "mshmm/kvconfig.hpp"

namespace mshmm {

TransformKind transform_from_string(const std::string& s) {
  if (s == "pct_log_return") return TransformKind::PctLogReturn;
  if (s == "log_return") return TransformKind::LogReturn;
  if (s == "log_level") return TransformKind::LogLevel;
  if (s == "normalize") return TransformKind::Normalize;
  if (s == "pct_change") return TransformKind::PctChange;
  if (s == "identity") return TransformKind::Identity;
  throw ConfigError("unknown transform '" + s + "'");
}

std::string to_string(TransformKind k) {
  switch (k) {
    case TransformKind::PctLogReturn: return "pct_log_return";
    case TransformKind::LogReturn: return "log_return";
    case TransformKind::LogLevel: return "log_level";
    case TransformKind::Normalize: return "normalize";
    case TransformKind::PctChange: return "pct_change";
    case TransformKind::Identity: return "identity";
  }
  return "?";
}

SeriesRole role_from_string(const std::string& s) {
  if (s == "target") return SeriesRole::Target;
  if (s == "predictor") return SeriesRole::Predictor;
  if (s == "transition-only") return SeriesRole::TransitionOnly;
  if (s == "both") return SeriesRole::Both;
  throw ConfigError("unknown role '" + s + "'");
}

std::string to_string(SeriesRole r) {
  switch (r) {
    case SeriesRole::Target: return "target";
    case SeriesRole::Predictor: return "predictor";
    case SeriesRole::TransitionOnly: return "transition-only";
    case SeriesRole::Both: return "both";
  }
  return "?";
}

std::vector<double> pct_log_returns(const std::vector<double>& prices) {
  if (prices.size() < 2) throw DimensionError("pct_log_returns: need at least 2 prices");
  for (std::size_t i = 0; i < prices.size(); ++i)
    if (!(prices[i] > 0.0))
      throw NumericError("pct_log_returns: non-positive price at index " + std::to_string(i));
  std::vector<double> out(prices.size() - 1);
  for (std::size_t i = 0; i + 1 < prices.size(); ++i)
    out[i] = 100.0 * (std::log(prices[i + 1]) - std::log(prices[i]));
  return out;
}

std::vector<double> log_returns(const std::vector<double>& prices) {
  std::vector<double> out = pct_log_returns(prices);
  for (double& v : out) v /= 100.0;
  return out;
}

std::vector<double> log_levels(const std::vector<double>& prices) {
  std::vector<double> out(prices.size());
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (!(prices[i] > 0.0))
      throw NumericError("log_level: non-positive value at index " + std::to_string(i));
    out[i] = std::log(prices[i]);
  }
  return out;
}

namespace {

std::pair<double, double> mean_and_sd(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

std::vector<double> normalize(const std::vector<double>& x) {
  if (x.size() < 2) throw DimensionError("normalize: need at least 2 values");
  const auto [mean, sd] = mean_and_sd(x);
  if (!(sd > 0.0)) throw NumericError("normalize: zero variance");
  return normalize_with(x, mean, sd);
}

std::vector<double> normalize_with(const std::vector<double>& x, double mean, double sd) {
  if (!(sd > 0.0)) throw NumericError("normalize: zero variance");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mean) / sd;
  return out;
}

std::vector<double> pct_change(const std::vector<double>& x) {
  if (x.size() < 2) throw DimensionError("pct_change: need at least 2 values");
  std::vector<double> out(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (x[i] == 0.0)
      throw NumericError("pct_change: zero value at index " + std::to_string(i));
    out[i] = 100.0 * (x[i + 1] - x[i]) / x[i];
  }
  return out;
}

int AlignedDataset::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < column_names.size(); ++i)
    if (column_names[i] == name) return static_cast<int>(i);
  return -1;
}

AlignedDataset AlignedDataset::head(int n) const {
  if (n < 0 || n > rows()) throw DimensionError("head: bad row count");
  AlignedDataset out;
  out.y = y.head(n);
  out.X = X.topRows(n);
  out.column_names = column_names;
  out.dates.assign(dates.begin(), dates.begin() + n);
  return out;
}

void AlignedDataset::validate() const {
  const int T = rows();
  if (T == 0) throw DataError("dataset is empty");
  if (X.rows() != T) throw DimensionError("dataset: X rows != y length");
  if (static_cast<int>(column_names.size()) != columns())
    throw DimensionError("dataset: column name count mismatch");
  if (static_cast<int>(dates.size()) != T)
    throw DimensionError("dataset: date count mismatch");
  if (column_names.empty() || column_names[0] != "intercept")
    throw DimensionError("dataset: column 0 must be the intercept");
  for (int t = 0; t < T; ++t) {
    if (X(t, 0) != 1.0) throw NumericError("dataset: intercept column not all ones");
    if (!std::isfinite(y[t]))
      throw NumericError("dataset: non-finite y at row " + std::to_string(t));
    for (int j = 0; j < columns(); ++j)
      if (!std::isfinite(X(t, j)))
        throw NumericError("dataset: non-finite X at row " + std::to_string(t) +
                           ", column " + column_names[j]);
  }
  if (T < 2 * columns())
    throw DimensionError("dataset: T = " + std::to_string(T) + " rows is too short for " +
                         std::to_string(columns()) + " columns (need T >= 2(k+1))");
}

std::uint64_t dataset_fingerprint(const AlignedDataset& data) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix_bytes = [&h](const void* p, std::size_t n) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  };
  const std::int64_t T = data.rows(), k = data.columns();
  mix_bytes(&T, sizeof(T));
  mix_bytes(&k, sizeof(k));
  mix_bytes(data.y.data(), sizeof(double) * data.y.size());
  mix_bytes(data.X.data(), sizeof(double) * data.X.size());
  mix_bytes(data.dates.data(), sizeof(Date) * data.dates.size());
  for (const auto& name : data.column_names) mix_bytes(name.data(), name.size());
  return h;
}

namespace {

struct TransformedSeries {
  std::string name;
  std::vector<Date> dates;
  std::vector<double> values;
};

// Applies a transform; differencing transforms date each output value at the
// later endpoint. Normalize statistics come from observations dated on or
// before freeze_date (everything, when freeze_date is the max Date).
TransformedSeries apply_transform(const RawSeries& s, TransformKind kind, Date freeze_date) {
  TransformedSeries out;
  out.name = s.name;
  try {
    switch (kind) {
      case TransformKind::PctLogReturn:
      case TransformKind::LogReturn:
      case TransformKind::PctChange: {
        out.values = kind == TransformKind::PctChange  ? pct_change(s.values)
                     : kind == TransformKind::LogReturn ? log_returns(s.values)
                                                         : pct_log_returns(s.values);
        out.dates.assign(s.dates.begin() + 1, s.dates.end());
        break;
      }
      case TransformKind::LogLevel:
        out.values = log_levels(s.values);
        out.dates = s.dates;
        break;
      case TransformKind::Normalize: {
        std::vector<double> window;
        for (std::size_t i = 0; i < s.values.size(); ++i)
          if (s.dates[i] <= freeze_date) window.push_back(s.values[i]);
        if (window.size() < 2)
          throw DimensionError("not enough in-window observations to normalize");
        const auto [mean, sd] = mean_and_sd(window);
        if (!(sd > 0.0)) throw NumericError("zero variance in normalization window");
        out.values = normalize_with(s.values, mean, sd);
        out.dates = s.dates;
        break;
      }
      case TransformKind::Identity:
        out.values = s.values;
        out.dates = s.dates;
        break;
    }
  } catch (const Error& e) {
    throw DataError("series '" + s.name + "': " + e.what());
  }
  return out;
}

// Most recent value on or before `when`; -1 when none exists.
std::ptrdiff_t last_on_or_before(const std::vector<Date>& dates, Date when) {
  auto it = std::upper_bound(dates.begin(), dates.end(), when);
  return static_cast<std::ptrdiff_t>(it - dates.begin()) - 1;
}

}  // namespace

AlignedDataset assemble(const RawSeries& target,
                        const std::vector<std::pair<RawSeries, TransformKind>>& predictors,
                        int ar_lag,
                        int holdout_rows,
                        TransformKind target_transform) {
  if (ar_lag != 0 && ar_lag != 1) throw ConfigError("assemble: ar_lag must be 0 or 1");
  if (holdout_rows < 0) throw ConfigError("assemble: holdout_rows must be >= 0");
  target.validate();
  for (const auto& [series, kind] : predictors) {
    series.validate();
    (void)kind;
  }

  const Date no_freeze = std::numeric_limits<Date>::max();
  const TransformedSeries ty = apply_transform(target, target_transform, no_freeze);

  const int drop = std::max(1, ar_lag);
  const int T = static_cast<int>(ty.values.size()) - drop;
  if (T < 1) throw DimensionError("assemble: target too short after transforms");
  if (holdout_rows >= T)
    throw ConfigError("assemble: holdout window does not fit inside the dataset");

  // Training cut-off for frozen normalization statistics.
  const Date freeze_date =
      holdout_rows > 0 ? ty.dates[static_cast<std::size_t>(drop + T - holdout_rows - 1)]
                       : no_freeze;

  std::vector<TransformedSeries> cols;
  cols.reserve(predictors.size());
  for (const auto& [series, kind] : predictors)
    cols.push_back(apply_transform(series, kind, freeze_date));

  const int k_extra = static_cast<int>(predictors.size()) + (ar_lag == 1 ? 1 : 0);
  AlignedDataset out;
  out.y.resize(T);
  out.X.resize(T, 1 + k_extra);
  out.column_names.push_back("intercept");
  for (const auto& c : cols) out.column_names.push_back(c.name);
  if (ar_lag == 1) out.column_names.push_back("AR1");
  out.dates.resize(T);

  for (int t = 0; t < T; ++t) {
    const int src = t + drop;
    const Date date = ty.dates[static_cast<std::size_t>(src)];
    out.y[t] = ty.values[static_cast<std::size_t>(src)];
    out.dates[static_cast<std::size_t>(t)] = date;
    out.X(t, 0) = 1.0;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      // Forward-fill: latest predictor observation on or before the target date.
      const std::ptrdiff_t idx = last_on_or_before(cols[j].dates, date);
      if (idx < 0)
        throw DataError("predictor '" + cols[j].name + "' has no value on or before " +
                        format_iso_date(date));
      out.X(t, 1 + static_cast<int>(j)) = cols[j].values[static_cast<std::size_t>(idx)];
    }
    if (ar_lag == 1) out.X(t, 1 + static_cast<int>(cols.size())) = ty.values[static_cast<std::size_t>(src - 1)];
  }

  out.validate();
  return out;
}

const ManifestEntry& Manifest::target() const {
  const ManifestEntry* found = nullptr;
  for (const auto& e : entries) {
    if (e.role == SeriesRole::Target) {
      if (found) throw ConfigError("manifest declares more than one target series");
      found = &e;
    }
  }
  if (!found) throw ConfigError("manifest declares no target series");
  return *found;
}

std::vector<const ManifestEntry*> Manifest::predictors() const {
  std::vector<const ManifestEntry*> out;
  for (const auto& e : entries)
    if (e.role != SeriesRole::Target) out.push_back(&e);
  return out;
}

Manifest parse_manifest(const std::string& path) {
  const KvFile file = KvFile::parse_file(path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();

  Manifest out;
  for (const auto* sec : file.find_all("series")) {
    if (sec->label.empty())
      throw ConfigError(sec->origin + ": series section needs a name, e.g. [series btc]");
    ManifestEntry e;
    e.name = sec->label;
    e.file = (base / sec->get("file")).string();
    e.role = role_from_string(sec->get_or("role", "both"));
    const std::string default_transform =
        e.role == SeriesRole::Target ? "pct_log_return" : "identity";
    e.transform = transform_from_string(sec->get_or("transform", default_transform));
    out.entries.push_back(std::move(e));
  }
  if (out.entries.empty()) throw ConfigError(path + ": manifest has no [series ...] sections");
  out.target();  // enforces exactly one target
  for (std::size_t i = 0; i < out.entries.size(); ++i)
    for (std::size_t j = i + 1; j < out.entries.size(); ++j)
      if (out.entries[i].name == out.entries[j].name)
        throw ConfigError(path + ": duplicate series name '" + out.entries[i].name + "'");
  return out;
}

AlignedDataset load_dataset(const Manifest& manifest, int ar_lag, int holdout_rows) {
  const ManifestEntry& target_entry = manifest.target();
  const RawSeries target = read_series_csv(target_entry.file, target_entry.name);
  std::vector<std::pair<RawSeries, TransformKind>> predictors;
  for (const ManifestEntry* e : manifest.predictors())
    predictors.emplace_back(read_series_csv(e->file, e->name), e->transform);
  return assemble(target, predictors, ar_lag, holdout_rows, target_entry.transform);
}

std::vector<std::string> mean_roster_from_manifest(const Manifest& m, int ar_lag) {
  std::vector<std::string> out;
  for (const auto& e : m.entries)
    if (e.role == SeriesRole::Predictor || e.role == SeriesRole::Both) out.push_back(e.name);
  if (ar_lag == 1) out.push_back("AR1");
  return out;
}

std::vector<std::string> transition_roster_from_manifest(const Manifest& m, int ar_lag) {
  std::vector<std::string> out;
  for (const auto& e : m.entries)
    if (e.role == SeriesRole::TransitionOnly || e.role == SeriesRole::Both)
      out.push_back(e.name);
  if (ar_lag == 1) out.push_back("AR1");
  return out;
}

}  // namespace mshmm
