#include <doctest.h>

#include <cmath>
#include <vector>

#include "mshmm/polyagamma.hpp"
#include "oracles.hpp"

using namespace mshmm;

TEST_CASE("moment formulas at reference points") {
  CHECK(pg_mean(1, 0.0) == doctest::Approx(0.25));
  CHECK(pg_mean(1, 2.0) == doctest::Approx(std::tanh(1.0) / 4.0));
  CHECK(pg_mean(4, 0.0) == doctest::Approx(1.0));
  CHECK(pg_variance(1, 0.0) == doctest::Approx(1.0 / 24.0));
  // Continuity of the small-c branches.
  CHECK(pg_mean(1, 1e-4) == doctest::Approx(pg_mean(1, 2e-4)).epsilon(1e-6));
  CHECK(pg_variance(1, 9e-4) == doctest::Approx(pg_variance(1, 2e-3)).epsilon(1e-4));
}

TEST_CASE("sample moments match tanh identities for a range of tilts") {
  const int n = 1000000;
  Rng rng(2024);
  for (const double c : {0.0, 0.5, 1.0, 2.0, 2.5, 5.0}) {
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) draws[static_cast<std::size_t>(i)] = sample_pg1(rng, c);

    const double mean = oracles::sample_mean(draws);
    const double se_mean = std::sqrt(pg_variance(1, c) / n);
    CHECK(std::abs(mean - pg_mean(1, c)) < 4.0 * se_mean);

    // Variance checked against batch-mean standard errors (no Gaussian
    // fourth-moment assumption).
    const int batches = 100, per = n / batches;
    std::vector<double> batch_var(batches);
    for (int b = 0; b < batches; ++b) {
      std::vector<double> chunk(draws.begin() + b * per, draws.begin() + (b + 1) * per);
      batch_var[static_cast<std::size_t>(b)] = oracles::sample_variance(chunk);
    }
    const double var_est = oracles::sample_mean(batch_var);
    const double se_var = std::sqrt(oracles::sample_variance(batch_var) / batches);
    CHECK(std::abs(var_est - pg_variance(1, c)) < 4.0 * se_var);
  }
}

TEST_CASE("PG(b, c) mean scales with b") {
  const int n = 200000;
  Rng rng(77);
  std::vector<double> draws(n);
  for (int i = 0; i < n; ++i) draws[static_cast<std::size_t>(i)] = sample_pg(rng, 3, 1.5);
  const double se = std::sqrt(pg_variance(3, 1.5) / n);
  CHECK(std::abs(oracles::sample_mean(draws) - pg_mean(3, 1.5)) < 4.0 * se);
}

TEST_CASE("PG(1, c) and PG(1, -c) are the same distribution") {
  const int n = 100000;
  Rng ra(11), rb(12);
  std::vector<double> pos(n), neg(n);
  for (int i = 0; i < n; ++i) {
    pos[static_cast<std::size_t>(i)] = sample_pg1(ra, 1.7);
    neg[static_cast<std::size_t>(i)] = sample_pg1(rb, -1.7);
  }
  // KS critical value at alpha = 0.001 for two samples of size n.
  const double crit = 1.95 * std::sqrt(2.0 / n);
  CHECK(oracles::ks_statistic(pos, neg) < crit);
}

TEST_CASE("exact sampler agrees with the truncated Gamma-sum construction") {
  const int n = 200000;
  Rng exact_rng(5), series_rng(6);
  for (const double c : {0.0, 1.0, 3.0}) {
    std::vector<double> exact(n), series(n);
    for (int i = 0; i < n; ++i) {
      exact[static_cast<std::size_t>(i)] = sample_pg1(exact_rng, c);
      series[static_cast<std::size_t>(i)] = oracles::pg_gamma_sum(series_rng, 1, c);
    }
    const double se = std::sqrt(2.0 * pg_variance(1, c) / n);
    CHECK(std::abs(oracles::sample_mean(exact) - oracles::sample_mean(series)) < 4.0 * se);
  }
}

TEST_CASE("fixed seed reproduces the stream bit-for-bit") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(sample_pg1(a, 0.8) == sample_pg1(b, 0.8));
}
