#ifndef MSHMM_RNG_HPP
#define MSHMM_RNG_HPP

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "mshmm/errors.hpp"

namespace mshmm {

// Deterministic random stream. One handle per chain; a handle must not be
// shared across concurrent callers. Distribution objects are constructed per
// call so the draw sequence depends only on the engine state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Unit-rate exponential.
  double exponential() {
    return std::exponential_distribution<double>(1.0)(engine_);
  }

  double gamma(double shape, double scale) {
    return std::gamma_distribution<double>(shape, scale)(engine_);
  }

  // Inverse-Gamma(shape, scale) with density ~ x^{-shape-1} exp(-scale/x).
  double inverse_gamma(double shape, double scale) {
    double g = gamma(shape, 1.0 / scale);
    if (g <= 0.0) g = std::numeric_limits<double>::min();
    return 1.0 / g;
  }

  // Index draw proportional to the (unnormalized, nonnegative) weights.
  int categorical(const Eigen::VectorXd& weights) {
    const double total = weights.sum();
    if (!(total > 0.0) || !std::isfinite(total))
      throw NumericError("categorical draw: weights do not sum to a positive finite value");
    double u = uniform() * total;
    for (int i = 0; i < weights.size() - 1; ++i) {
      u -= weights[i];
      if (u <= 0.0) return i;
    }
    return static_cast<int>(weights.size()) - 1;
  }

  Eigen::VectorXd standard_normal_vector(int n) {
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z[i] = normal();
    return z;
  }

  // Dirichlet draw via normalized Gammas.
  Eigen::VectorXd dirichlet(const Eigen::VectorXd& alpha) {
    Eigen::VectorXd g(alpha.size());
    for (int i = 0; i < alpha.size(); ++i) {
      g[i] = gamma(alpha[i], 1.0);
      if (g[i] <= 0.0) g[i] = std::numeric_limits<double>::min();
    }
    return g / g.sum();
  }

  std::uint64_t next_u64() { return engine_(); }

  // splitmix64 finalizer; used to derive independent per-model seeds.
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mshmm

#endif
