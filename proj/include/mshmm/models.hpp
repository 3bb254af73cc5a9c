#ifndef MSHMM_MODELS_HPP
#define MSHMM_MODELS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mshmm/datapipe.hpp"
#include "mshmm/hmm.hpp"
#include "mshmm/rng.hpp"
#include "mshmm/samplers.hpp"

namespace mshmm {

// Model roster. NHHM/HHM carry 2-5 hidden states; MS-RW is the two-state
// drift/variance special case; RW, AR(p) and KS are single-regime benchmarks.
enum class Family { NHHM, HHM, MSRW, RW, AR, KS };

Family family_from_string(const std::string& s);
std::string to_string(Family f);

struct ModelSpec {
  Family family = Family::RW;
  int states = 1;
  int ar_order = 0;  // AR family only: number of endogenous lags (1-5)
  bool rj_enabled = false;
  std::vector<std::string> mean_roster;   // dataset column names, intercept implied
  std::vector<std::string> trans_roster;  // transition-equation covariates (NHHM only)

  std::string name() const;  // NHHM_4, HHM_2, MS-RW, KS, AR5, RW
  void validate() const;

  static ModelSpec nhhm(int states, std::vector<std::string> mean_roster,
                        std::vector<std::string> trans_roster, bool rj = false);
  static ModelSpec hhm(int states, std::vector<std::string> mean_roster);
  static ModelSpec msrw();
  static ModelSpec rw();
  static ModelSpec ar(int order);
  static ModelSpec ks(std::vector<std::string> mean_roster);

  // Builds the spec named by its abbreviation, attaching the given rosters
  // where the family uses them.
  static ModelSpec from_name(const std::string& name, std::vector<std::string> mean_roster,
                             std::vector<std::string> trans_roster);
};

struct McmcConfig {
  int iterations = 20000;
  int burn_in = 10000;
  int thin = 5;
  std::uint64_t seed = 0;

  int retained() const { return (iterations - burn_in) / thin; }
  void validate() const;
};

// Prior hyperparameters; zero sigma_scale means "sample variance of y".
struct PriorConfig {
  double coef_var = 100.0;
  double sigma_shape = 2.0;
  double sigma_scale = 0.0;
  double trans_coef_var = 10.0;
  double inclusion_prior = 0.5;
};

// Design matrices resolved against a dataset for one model. Design row r
// corresponds to dataset row r + offset (offset > 0 only for AR lags).
struct ResolvedDesign {
  Eigen::VectorXd y;
  Eigen::MatrixXd X_mean;
  Eigen::MatrixXd X_trans;  // empty unless the model has multinomial transitions
  int offset = 0;
  std::vector<std::string> mean_names;
  std::vector<std::string> trans_names;
};

ResolvedDesign resolve_design(const AlignedDataset& data, const ModelSpec& spec);

// Retained MCMC output. States are relabeled by descending sigma2 before
// storage, so state 1 is always the highest-volatility regime.
struct PosteriorDraws {
  ModelSpec spec;
  std::uint64_t fingerprint = 0;  // of the dataset fit() received
  std::uint64_t seed = 0;
  int train_rows = 0;  // rows of that dataset
  int offset = 0;      // design offset (AR lags)
  std::vector<std::string> mean_names;
  std::vector<std::string> trans_names;

  std::vector<EmissionParams> emissions;
  std::vector<TransitionModel> transitions;
  std::vector<StatePath> paths;             // each of length train_rows - offset
  std::vector<std::vector<int>> inclusion;  // per draw, when rj_enabled
  std::vector<double> logliks;

  int size() const { return static_cast<int>(emissions.size()); }
  void validate() const;
};

// Full Gibbs run: (a) FFBS state draw, (b) per-state conjugate regression,
// (c) Polya-Gamma multinomial update (NHHM) or Dirichlet row update
// (HHM/MS-RW), (c') reversible-jump roster toggle when enabled. Single-regime
// families skip (a) and (c).
PosteriorDraws fit(const AlignedDataset& data, const ModelSpec& spec, const McmcConfig& config,
                   const PriorConfig& priors = {});

// The two-state Markov-switching random walk: intercept-only emissions with
// constant transition probabilities.
PosteriorDraws fit_msrw(const AlignedDataset& data, const McmcConfig& config,
                        const PriorConfig& priors = {});

// Within-sample posterior predictive replication: column j simulates the
// observation vector under retained draw j along its sampled state path.
// Rows correspond to dataset rows offset..train_rows-1.
Eigen::MatrixXd replicate_insample(Rng& rng, const PosteriorDraws& draws,
                                   const AlignedDataset& data);

void save_draws(const std::string& path, const PosteriorDraws& draws);
PosteriorDraws load_draws(const std::string& path);

// Posterior-mean table: one row per predictor, per-state coefficient columns.
struct PosteriorSummaryRow {
  std::string name;
  Eigen::VectorXd mean;            // per state; empty when not in the mean equation
  std::vector<bool> significant;   // zero outside the central 90% interval
  bool in_transition = false;
  bool has_inclusion = false;      // rj runs only
  double inclusion = 0.0;
};

std::vector<PosteriorSummaryRow> posterior_summary(const PosteriorDraws& draws);

}  // namespace mshmm

#endif
