#include "mshmm/polyagamma.hpp"

#include <cmath>

#include "mshmm/errors.hpp"

namespace mshmm {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTrunc = 0.64;        // proposal switch point on the J* scale
constexpr double kTruncRecip = 1.0 / kTrunc;

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Piecewise series coefficient a_n(x) of the Jacobi J*(1, .) density.
double series_coef(int n, double x) {
  const double K = (n + 0.5) * kPi;
  if (x > kTrunc) return K * std::exp(-0.5 * K * K * x);
  const double expnt =
      -1.5 * (std::log(0.5 * kPi) + std::log(x)) + std::log(K) - 2.0 * (n + 0.5) * (n + 0.5) / x;
  return std::exp(expnt);
}

// Probability that the proposal draws from the right (exponential) branch.
double mass_texpon(double z) {
  const double t = kTrunc;
  const double fz = 0.125 * kPi * kPi + 0.5 * z * z;
  const double b = std::sqrt(1.0 / t) * (t * z - 1.0);
  const double a = -std::sqrt(1.0 / t) * (t * z + 1.0);
  const double x0 = std::log(fz) + fz * t;
  const double xb = x0 - z + std::log(norm_cdf(b));
  const double xa = x0 + z + std::log(norm_cdf(a));
  const double qdivp = 4.0 / kPi * (std::exp(xb) + std::exp(xa));
  return 1.0 / (1.0 + qdivp);
}

// Inverse-Gaussian(1/z, 1) restricted to (0, kTrunc).
double rtigauss(Rng& rng, double z) {
  z = std::fabs(z);
  const double t = kTrunc;
  double x = t + 1.0;
  if (kTruncRecip > z) {  // mean above the truncation point: one-sided sampler
    double alpha = 0.0;
    while (rng.uniform() > alpha) {
      double e1 = rng.exponential();
      double e2 = rng.exponential();
      while (e1 * e1 > 2.0 * e2 / t) {
        e1 = rng.exponential();
        e2 = rng.exponential();
      }
      x = 1.0 + e1 * t;
      x = t / (x * x);
      alpha = std::exp(-0.5 * z * z * x);
    }
  } else {
    const double mu = 1.0 / z;
    while (x > t) {
      double y = rng.normal();
      y *= y;
      const double half_mu = 0.5 * mu;
      const double mu_y = mu * y;
      x = mu + half_mu * mu_y - half_mu * std::sqrt(4.0 * mu_y + mu_y * mu_y);
      if (rng.uniform() > mu / (mu + x)) x = mu * mu / x;
    }
  }
  return x;
}

}  // namespace

double sample_pg1(Rng& rng, double c) {
  // PG(1, c) = J*(1, c/2) / 4; the sampler works on the J* scale.
  const double z = std::fabs(c) * 0.5;
  const double fz = 0.125 * kPi * kPi + 0.5 * z * z;
  const double p_right = mass_texpon(z);

  while (true) {
    double x;
    if (rng.uniform() < p_right)
      x = kTrunc + rng.exponential() / fz;
    else
      x = rtigauss(rng, z);

    // Alternating partial sums: accept on an odd index, resample on an even.
    double s = series_coef(0, x);
    const double y = rng.uniform() * s;
    int n = 0;
    while (true) {
      ++n;
      if (n % 2 == 1) {
        s -= series_coef(n, x);
        if (y <= s) return 0.25 * x;
      } else {
        s += series_coef(n, x);
        if (y > s) break;
      }
    }
  }
}

double sample_pg(Rng& rng, int b, double c) {
  if (b < 1) throw ConfigError("sample_pg: b must be a positive integer");
  double total = 0.0;
  for (int i = 0; i < b; ++i) total += sample_pg1(rng, c);
  return total;
}

double pg_mean(int b, double c) {
  const double ac = std::fabs(c);
  if (ac < 1e-4) return b * 0.25 * (1.0 - ac * ac / 12.0);
  return b * std::tanh(0.5 * c) / (2.0 * c);
}

double pg_variance(int b, double c) {
  const double ac = std::fabs(c);
  if (ac < 1e-3) return b / 24.0;
  const double sech_half = 1.0 / std::cosh(0.5 * ac);
  return b * (std::sinh(ac) - ac) * sech_half * sech_half / (4.0 * ac * ac * ac);
}

}  // namespace mshmm
