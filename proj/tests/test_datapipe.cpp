#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "mshmm/datapipe.hpp"
#include "mshmm/errors.hpp"
#include "mshmm/io.hpp"
#include "mshmm/rng.hpp"

using namespace mshmm;
namespace fs = std::filesystem;

namespace {

RawSeries make_series(const std::string& name, Date start, std::vector<double> values) {
  RawSeries s;
  s.name = name;
  s.values = std::move(values);
  for (std::size_t i = 0; i < s.values.size(); ++i)
    s.dates.push_back(start + static_cast<Date>(i));
  return s;
}

const Date kStart = days_from_civil(2021, 3, 1);

}  // namespace

TEST_CASE("pct_log_returns matches direct evaluation") {
  CHECK(pct_log_returns({100, 100})[0] == doctest::Approx(0.0));
  CHECK(pct_log_returns({100, 110})[0] == doctest::Approx(9.5310).epsilon(1e-4));
  const auto two = pct_log_returns({50, 100, 50});
  CHECK(two[0] == doctest::Approx(100.0 * std::log(2.0)));
  CHECK(two[1] == doctest::Approx(-100.0 * std::log(2.0)));
}

TEST_CASE("pct_log_returns rejects non-positive prices with the offending index") {
  CHECK_THROWS_WITH_AS(pct_log_returns({100, -1, 100}),
                       doctest::Contains("index 1"), NumericError);
  CHECK_THROWS_AS(pct_log_returns({100}), DimensionError);
}

TEST_CASE("log-return round trip reconstructs prices") {
  Rng rng(7);
  std::vector<double> prices{250.0};
  for (int i = 0; i < 200; ++i)
    prices.push_back(prices.back() * std::exp(0.03 * rng.normal()));
  const auto returns = pct_log_returns(prices);
  double level = prices[0];
  for (std::size_t i = 0; i < returns.size(); ++i) {
    level *= std::exp(returns[i] / 100.0);
    CHECK(level == doctest::Approx(prices[i + 1]).epsilon(1e-12));
  }
}

TEST_CASE("normalize centers and scales") {
  const auto z = normalize({1, 2, 3});
  CHECK(z[0] == doctest::Approx(-1.0));
  CHECK(z[1] == doctest::Approx(0.0));
  CHECK(z[2] == doctest::Approx(1.0));
  CHECK_THROWS_AS(normalize({5, 5, 5}), NumericError);
}

TEST_CASE("normalize output moments and affine invariance") {
  Rng rng(11);
  std::vector<double> x(400);
  for (auto& v : x) v = 3.0 + 2.5 * rng.normal();
  const auto z = normalize(x);

  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= z.size();
  double ss = 0.0;
  for (double v : z) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (z.size() - 1));
  CHECK(std::abs(mean) < 1e-12);
  CHECK(std::abs(sd - 1.0) < 1e-12);

  std::vector<double> shifted(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) shifted[i] = 4.0 * x[i] - 17.0;
  const auto z2 = normalize(shifted);
  for (std::size_t i = 0; i < z.size(); ++i)
    CHECK(z2[i] == doctest::Approx(z[i]).epsilon(1e-10));
}

TEST_CASE("pct_change matches hand computation") {
  CHECK(pct_change({100, 90})[0] == doctest::Approx(-10.0));
  CHECK(pct_change({100, 100})[0] == doctest::Approx(0.0));
  const auto two = pct_change({10, 20, 10});
  CHECK(two[0] == doctest::Approx(100.0));
  CHECK(two[1] == doctest::Approx(-50.0));
  CHECK_THROWS_WITH_AS(pct_change({1, 0, 2}), doctest::Contains("index 1"), NumericError);
}

TEST_CASE("assemble shapes: 10 prices, one predictor, AR lag") {
  std::vector<double> prices;
  double p = 100.0;
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    prices.push_back(p);
    p *= std::exp(0.01 * rng.normal());
  }
  const RawSeries target = make_series("tgt", kStart, prices);

  std::vector<double> pv;
  for (int i = 0; i < 10; ++i) pv.push_back(std::sin(i * 0.8) + 0.1 * i);
  const RawSeries predictor = make_series("pred", kStart, pv);

  const AlignedDataset with_ar =
      assemble(target, {{predictor, TransformKind::Normalize}}, 1);
  CHECK(with_ar.rows() == 8);  // 10 prices -> 9 returns -> 8 rows after the lag
  CHECK(with_ar.columns() == 3);
  CHECK(with_ar.column_names == std::vector<std::string>{"intercept", "pred", "AR1"});

  // AR column equals the previous return.
  const auto returns = pct_log_returns(prices);
  for (int t = 0; t < with_ar.rows(); ++t) {
    CHECK(with_ar.y[t] == doctest::Approx(returns[t + 1]));
    CHECK(with_ar.X(t, 2) == doctest::Approx(returns[t]));
  }

  const AlignedDataset no_pred = assemble(target, {}, 0);
  CHECK(no_pred.columns() == 1);
  CHECK(no_pred.X.col(0).minCoeff() == 1.0);
}

TEST_CASE("assemble forward-fills predictors onto non-trading days") {
  std::vector<double> prices(12, 0.0);
  double p = 100.0;
  for (auto& v : prices) {
    v = p;
    p *= 1.01;
  }
  const RawSeries target = make_series("tgt", kStart, prices);

  // Predictor observed only every third day.
  RawSeries sparse;
  sparse.name = "sparse";
  for (int i = 0; i < 12; i += 3) {
    sparse.dates.push_back(kStart + i);
    sparse.values.push_back(static_cast<double>(i));
  }
  const AlignedDataset d = assemble(target, {{sparse, TransformKind::Identity}}, 0);
  for (int t = 0; t < d.rows(); ++t) {
    const Date date = d.dates[static_cast<std::size_t>(t)];
    const double expected = static_cast<double>(((date - kStart) / 3) * 3);
    CHECK(d.X(t, 1) == doctest::Approx(expected));
  }
}

TEST_CASE("assemble rejects a predictor that misses the target window") {
  const RawSeries target = make_series("tgt", kStart, {100, 101, 102, 103, 104, 105});
  const RawSeries late = make_series("late", kStart + 100, {1, 2, 3});
  CHECK_THROWS_AS(assemble(target, {{late, TransformKind::Identity}}, 0), DataError);
}

TEST_CASE("assemble rejects datasets too short for their design width") {
  // 6 prices -> 4 rows against 4 columns: T >= 2(k+1) fails.
  const RawSeries target = make_series("tgt", kStart, {100, 101, 102, 103, 104, 105});
  const RawSeries p1 = make_series("p1", kStart, {1, 2, 3, 2, 1, 2});
  const RawSeries p2 = make_series("p2", kStart, {2, 1, 2, 3, 2, 1});
  CHECK_THROWS_AS(assemble(target,
                           {{p1, TransformKind::Identity}, {p2, TransformKind::Identity}}, 1),
                  DimensionError);
}

TEST_CASE("assemble is deterministic") {
  std::vector<double> prices;
  double p = 50.0;
  Rng rng(5);
  for (int i = 0; i < 40; ++i) {
    prices.push_back(p);
    p *= std::exp(0.02 * rng.normal());
  }
  const RawSeries target = make_series("tgt", kStart, prices);
  std::vector<double> pv;
  for (int i = 0; i < 40; ++i) pv.push_back(std::cos(0.3 * i) * 2 + 5);
  const RawSeries predictor = make_series("pred", kStart, pv);

  const AlignedDataset a = assemble(target, {{predictor, TransformKind::Normalize}}, 1);
  const AlignedDataset b = assemble(target, {{predictor, TransformKind::Normalize}}, 1);
  CHECK(dataset_fingerprint(a) == dataset_fingerprint(b));
  CHECK((a.X - b.X).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("holdout rows freeze normalization statistics") {
  std::vector<double> prices;
  double p = 80.0;
  Rng rng(9);
  for (int i = 0; i < 60; ++i) {
    prices.push_back(p);
    p *= std::exp(0.01 * rng.normal());
  }
  const RawSeries target = make_series("tgt", kStart, prices);
  std::vector<double> pv;
  for (int i = 0; i < 60; ++i) pv.push_back(0.2 * i + (i > 48 ? 50.0 : 0.0));  // late shift
  const RawSeries predictor = make_series("pred", kStart, pv);

  const AlignedDataset frozen =
      assemble(target, {{predictor, TransformKind::Normalize}}, 0, 10);
  const AlignedDataset full = assemble(target, {{predictor, TransformKind::Normalize}}, 0, 0);
  // The late out-of-sample shift must not leak into the training rows.
  const int train = frozen.rows() - 10;
  double frozen_mean = 0.0, full_mean = 0.0;
  for (int t = 0; t < train; ++t) {
    frozen_mean += frozen.X(t, 1);
    full_mean += full.X(t, 1);
  }
  CHECK(std::abs(frozen_mean / train) < 0.2);   // centered on its own window
  CHECK(full_mean / train < -0.2);              // leaked statistics shift the window
}

TEST_CASE("CSV ingestion enforces schema and strict dates") {
  const fs::path dir = fs::temp_directory_path() / "mshmm_csv_test";
  fs::create_directories(dir);
  const std::string good = (dir / "good.csv").string();
  write_file_atomic(good, "date,value\n2020-01-01,1.5\n2020-01-02,2.5\n");
  const RawSeries s = read_series_csv(good, "g");
  CHECK(s.size() == 2);
  CHECK(s.values[1] == doctest::Approx(2.5));

  const std::string dup = (dir / "dup.csv").string();
  write_file_atomic(dup, "date,value\n2020-01-02,1.0\n2020-01-02,2.0\n");
  CHECK_THROWS_AS(read_series_csv(dup, "d"), DataError);

  const std::string missing = (dir / "missing.csv").string();
  write_file_atomic(missing, "date,value\n2020-01-01,\n");
  CHECK_THROWS_AS(read_series_csv(missing, "m"), DataError);

  CHECK_THROWS_AS(read_series_csv((dir / "absent.csv").string(), "a"), DataError);
}

TEST_CASE("manifest parsing resolves transforms, roles and relative paths") {
  const fs::path dir = fs::temp_directory_path() / "mshmm_manifest_test";
  fs::create_directories(dir / "data");
  write_file_atomic((dir / "data" / "t.csv").string(),
                    "date,value\n2020-01-01,100\n2020-01-02,101\n");
  write_file_atomic((dir / "manifest.ini").string(),
                    "[series tgt]\nfile = data/t.csv\nrole = target\n\n"
                    "[series vix]\nfile = data/t.csv\ntransform = log_level\nrole = both\n\n"
                    "[series sp]\nfile = data/t.csv\ntransform = log_return\nrole = predictor\n");
  const Manifest m = parse_manifest((dir / "manifest.ini").string());
  CHECK(m.entries.size() == 3);
  CHECK(m.target().name == "tgt");
  CHECK(m.target().transform == TransformKind::PctLogReturn);  // target default
  CHECK(m.entries[1].transform == TransformKind::LogLevel);
  CHECK(m.entries[2].role == SeriesRole::Predictor);

  CHECK(mean_roster_from_manifest(m, 1) == std::vector<std::string>{"vix", "sp", "AR1"});
  CHECK(transition_roster_from_manifest(m, 1) == std::vector<std::string>{"vix", "AR1"});
}
