#ifndef MSHMM_POLYAGAMMA_HPP
#define MSHMM_POLYAGAMMA_HPP

#include "mshmm/rng.hpp"

namespace mshmm {

// Exact draw from PG(1, c) via the alternating-series rejection sampler on
// the tilted Jacobi density (truncated-exponential / truncated-inverse-
// Gaussian proposal mixture, left/right truncation point 0.64).
double sample_pg1(Rng& rng, double c);

// PG(b, c) for integer b >= 1, realized as the sum of b PG(1, c) draws.
double sample_pg(Rng& rng, int b, double c);

// E[PG(b, c)] = b * tanh(c/2) / (2c), with the c -> 0 limit b/4.
double pg_mean(int b, double c);

// Var[PG(b, c)] = b * (sinh(c) - c) * sech(c/2)^2 / (4 c^3), limit b/24.
double pg_variance(int b, double c);

}  // namespace mshmm

#endif
