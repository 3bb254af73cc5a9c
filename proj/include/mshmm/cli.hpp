#ifndef MSHMM_CLI_HPP
#define MSHMM_CLI_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mshmm/models.hpp"

namespace mshmm {

// Resolved run configuration: config file values with command-line overrides
// already applied.
struct RunConfig {
  std::string manifest_path;
  std::string out_dir;
  int horizons = 30;  // L, the one-step-ahead test window
  int ar_lag = 1;
  std::vector<std::string> roster;
  std::vector<std::string> rj_models;  // roster entries fitted with variable search
  McmcConfig mcmc;
  PriorConfig priors;

  void validate() const;
  static RunConfig from_file(const std::string& path);
};

struct SimulateOptions {
  std::string out_dir;
  std::uint64_t seed = 1;
  int length = 400;  // assembled dataset rows
  int states = 2;
  int covariates = 2;
};

int cmd_fit(const RunConfig& config);
int cmd_forecast(const RunConfig& config);
int cmd_report(const RunConfig& config);
int cmd_simulate(const SimulateOptions& options);

// Full command-line surface (argv without the program name). Returns the
// process exit code; never throws.
int run_cli(const std::vector<std::string>& args);

}  // namespace mshmm

#endif
