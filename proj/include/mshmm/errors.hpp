#ifndef MSHMM_ERRORS_HPP
#define MSHMM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mshmm {

// Error taxonomy shared by the library and the CLI. The CLI maps each kind
// to a distinct exit code (see cli.cpp).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable or malformed input data (CSV, manifest, draw files).
struct DataError : Error {
  using Error::Error;
};

// Inconsistent shapes: rosters not covered by the dataset, draw/parameter
// dimension mismatches, misaligned horizons.
struct DimensionError : Error {
  using Error::Error;
};

// Numerical failure: non-finite likelihood, underflowed filter row,
// degenerate inputs (zero variance, non-positive price).
struct NumericError : Error {
  using Error::Error;
};

// Persisted draws do not match the dataset they are evaluated against.
struct FingerprintError : Error {
  using Error::Error;
};

// Invalid configuration or command-line arguments.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace mshmm

#endif
