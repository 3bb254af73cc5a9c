#include "mshmm/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mshmm/errors.hpp"
#include "mshmm/io.hpp"
#include "mshmm/kvconfig.hpp"
#include "mshmm/stats.hpp"

namespace mshmm {

Family family_from_string(const std::string& s) {
  if (s == "NHHM") return Family::NHHM;
  if (s == "HHM") return Family::HHM;
  if (s == "MS-RW" || s == "MSRW") return Family::MSRW;
  if (s == "RW") return Family::RW;
  if (s == "AR") return Family::AR;
  if (s == "KS") return Family::KS;
  throw ConfigError("unknown model family '" + s + "'");
}

std::string to_string(Family f) {
  switch (f) {
    case Family::NHHM: return "NHHM";
    case Family::HHM: return "HHM";
    case Family::MSRW: return "MS-RW";
    case Family::RW: return "RW";
    case Family::AR: return "AR";
    case Family::KS: return "KS";
  }
  return "?";
}

std::string ModelSpec::name() const {
  switch (family) {
    case Family::NHHM: return "NHHM_" + std::to_string(states);
    case Family::HHM: return "HHM_" + std::to_string(states);
    case Family::MSRW: return "MS-RW";
    case Family::RW: return "RW";
    case Family::AR: return "AR" + std::to_string(ar_order);
    case Family::KS: return "KS";
  }
  return "?";
}

void ModelSpec::validate() const {
  switch (family) {
    case Family::NHHM:
    case Family::HHM:
      if (states < 2 || states > 5)
        throw ConfigError(name() + ": hidden-state count must be 2-5");
      if (family == Family::HHM && !trans_roster.empty())
        throw ConfigError("HHM has constant transitions; transition roster must be empty");
      break;
    case Family::MSRW:
      if (states != 2) throw ConfigError("MS-RW has exactly 2 states");
      if (!mean_roster.empty() || !trans_roster.empty())
        throw ConfigError("MS-RW takes no predictors");
      break;
    case Family::RW:
      if (states != 1) throw ConfigError("RW is single-regime");
      if (!mean_roster.empty() || !trans_roster.empty() || ar_order != 0)
        throw ConfigError("RW takes no covariates and no AR term");
      break;
    case Family::AR:
      if (states != 1) throw ConfigError("AR is single-regime");
      if (ar_order < 1 || ar_order > 5) throw ConfigError("AR order must be 1-5");
      if (!mean_roster.empty() || !trans_roster.empty())
        throw ConfigError("AR uses lagged values only");
      break;
    case Family::KS:
      if (states != 1) throw ConfigError("KS is single-regime");
      break;
  }
  if (rj_enabled && family != Family::NHHM)
    throw ConfigError("variable search applies to multinomial transitions only");
  if (rj_enabled && trans_roster.empty())
    throw ConfigError("variable search needs at least one transition predictor");
}

ModelSpec ModelSpec::nhhm(int states, std::vector<std::string> mean_roster,
                          std::vector<std::string> trans_roster, bool rj) {
  ModelSpec s;
  s.family = Family::NHHM;
  s.states = states;
  s.mean_roster = std::move(mean_roster);
  s.trans_roster = std::move(trans_roster);
  s.rj_enabled = rj;
  s.validate();
  return s;
}

ModelSpec ModelSpec::hhm(int states, std::vector<std::string> mean_roster) {
  ModelSpec s;
  s.family = Family::HHM;
  s.states = states;
  s.mean_roster = std::move(mean_roster);
  s.validate();
  return s;
}

ModelSpec ModelSpec::msrw() {
  ModelSpec s;
  s.family = Family::MSRW;
  s.states = 2;
  return s;
}

ModelSpec ModelSpec::rw() {
  ModelSpec s;
  s.family = Family::RW;
  return s;
}

ModelSpec ModelSpec::ar(int order) {
  ModelSpec s;
  s.family = Family::AR;
  s.ar_order = order;
  s.validate();
  return s;
}

ModelSpec ModelSpec::ks(std::vector<std::string> mean_roster) {
  ModelSpec s;
  s.family = Family::KS;
  s.mean_roster = std::move(mean_roster);
  s.validate();
  return s;
}

ModelSpec ModelSpec::from_name(const std::string& name, std::vector<std::string> mean_roster,
                               std::vector<std::string> trans_roster) {
  auto parse_states = [&name](const std::string& prefix) {
    const std::string digits = name.substr(prefix.size());
    if (digits.size() != 1 || digits[0] < '0' || digits[0] > '9')
      throw ConfigError("bad model name '" + name + "'");
    return digits[0] - '0';
  };
  if (name.rfind("NHHM_", 0) == 0)
    return nhhm(parse_states("NHHM_"), std::move(mean_roster), std::move(trans_roster));
  if (name.rfind("HHM_", 0) == 0) return hhm(parse_states("HHM_"), std::move(mean_roster));
  if (name == "MS-RW" || name == "MSRW") return msrw();
  if (name == "RW") return rw();
  if (name == "KS") return ks(std::move(mean_roster));
  if (name.rfind("AR", 0) == 0 && name.size() == 3) return ar(parse_states("AR"));
  throw ConfigError("unknown model name '" + name + "'");
}

void McmcConfig::validate() const {
  if (iterations <= 0 || burn_in < 0 || thin < 1)
    throw ConfigError("mcmc config: iterations > 0, burn_in >= 0, thin >= 1 required");
  if (burn_in >= iterations) throw ConfigError("mcmc config: burn_in must be < iterations");
  if (retained() < 100)
    throw ConfigError("mcmc config: (iterations - burn_in)/thin must be at least 100");
}

ResolvedDesign resolve_design(const AlignedDataset& data, const ModelSpec& spec) {
  spec.validate();
  data.validate();
  ResolvedDesign d;
  const int T = data.rows();

  if (spec.family == Family::AR) {
    const int p = spec.ar_order;
    if (T <= 2 * (p + 1)) throw DimensionError("AR design: series too short for the lag order");
    d.offset = p;
    d.y = data.y.tail(T - p);
    d.X_mean.resize(T - p, p + 1);
    d.mean_names.push_back("intercept");
    for (int lag = 1; lag <= p; ++lag) d.mean_names.push_back("lag" + std::to_string(lag));
    for (int r = 0; r < T - p; ++r) {
      d.X_mean(r, 0) = 1.0;
      for (int lag = 1; lag <= p; ++lag) d.X_mean(r, lag) = data.y[r + p - lag];
    }
    return d;
  }

  auto columns_for = [&data](const std::vector<std::string>& roster) {
    std::vector<int> cols{0};
    for (const auto& name : roster) {
      const int idx = data.column_index(name);
      if (idx < 0) throw DimensionError("dataset has no column named '" + name + "'");
      if (idx == 0) throw ConfigError("the intercept is implied and cannot be listed");
      cols.push_back(idx);
    }
    return cols;
  };

  d.y = data.y;
  const std::vector<int> mean_cols = columns_for(spec.mean_roster);
  d.X_mean.resize(T, static_cast<int>(mean_cols.size()));
  for (std::size_t j = 0; j < mean_cols.size(); ++j) {
    d.X_mean.col(static_cast<int>(j)) = data.X.col(mean_cols[j]);
    d.mean_names.push_back(data.column_names[static_cast<std::size_t>(mean_cols[j])]);
  }

  if (spec.family == Family::NHHM) {
    const std::vector<int> trans_cols = columns_for(spec.trans_roster);
    d.X_trans.resize(T, static_cast<int>(trans_cols.size()));
    for (std::size_t j = 0; j < trans_cols.size(); ++j) {
      d.X_trans.col(static_cast<int>(j)) = data.X.col(trans_cols[j]);
      d.trans_names.push_back(data.column_names[static_cast<std::size_t>(trans_cols[j])]);
    }
  }
  return d;
}

void PosteriorDraws::validate() const {
  const int n = size();
  if (n == 0) throw DimensionError("posterior draws: empty");
  if (static_cast<int>(transitions.size()) != n || static_cast<int>(paths.size()) != n ||
      static_cast<int>(logliks.size()) != n)
    throw DimensionError("posterior draws: ragged draw lists");
  if (spec.rj_enabled && static_cast<int>(inclusion.size()) != n)
    throw DimensionError("posterior draws: missing inclusion indicators");
  const int m = spec.states;
  for (int j = 0; j < n; ++j) {
    if (emissions[static_cast<std::size_t>(j)].states() != m ||
        transitions[static_cast<std::size_t>(j)].states() != m)
      throw DimensionError("posterior draws: state-count mismatch at draw " + std::to_string(j));
    if (static_cast<int>(paths[static_cast<std::size_t>(j)].size()) != train_rows - offset)
      throw DimensionError("posterior draws: path length mismatch at draw " + std::to_string(j));
  }
}

namespace {

struct RelabeledDraw {
  EmissionParams emissions;
  TransitionModel transitions;
  StatePath path;
};

// Permutation ordering states by descending sigma2 (state 1 = most volatile).
std::vector<int> relabel_permutation(const EmissionParams& em) {
  std::vector<int> perm(static_cast<std::size_t>(em.states()));
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&em](int a, int b) { return em.sigma2[a] > em.sigma2[b]; });
  return perm;
}

RelabeledDraw relabel(const EmissionParams& em, const TransitionModel& trans,
                      const StatePath& path) {
  const int m = em.states();
  const std::vector<int> perm = relabel_permutation(em);
  RelabeledDraw out;
  out.emissions.coef.resize(m, em.coef.cols());
  out.emissions.sigma2.resize(m);
  std::vector<int> inverse(static_cast<std::size_t>(m));
  for (int s = 0; s < m; ++s) {
    out.emissions.coef.row(s) = em.coef.row(perm[static_cast<std::size_t>(s)]);
    out.emissions.sigma2[s] = em.sigma2[perm[static_cast<std::size_t>(s)]];
    inverse[static_cast<std::size_t>(perm[static_cast<std::size_t>(s)])] = s;
  }
  out.transitions = trans.permuted(perm);
  out.path.resize(path.size());
  for (std::size_t t = 0; t < path.size(); ++t)
    out.path[t] = inverse[static_cast<std::size_t>(path[t])];
  return out;
}

Eigen::MatrixXd count_transitions(const StatePath& path, int m) {
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t t = 0; t + 1 < path.size(); ++t) counts(path[t], path[t + 1]) += 1.0;
  return counts;
}

}  // namespace

PosteriorDraws fit(const AlignedDataset& data, const ModelSpec& spec, const McmcConfig& config,
                   const PriorConfig& priors) {
  spec.validate();
  config.validate();
  const ResolvedDesign d = resolve_design(data, spec);
  const int T = static_cast<int>(d.y.size());
  const int m = spec.states;
  const int k1 = static_cast<int>(d.X_mean.cols());
  const int k2 = static_cast<int>(d.X_trans.cols());
  const bool multinomial = spec.family == Family::NHHM;
  const bool constant_rows = spec.family == Family::HHM || spec.family == Family::MSRW;
  if (T < 2 * k1) throw DimensionError(spec.name() + ": not enough rows for the design");

  Rng rng(config.seed);

  const double y_var = variance_of(std::vector<double>(d.y.data(), d.y.data() + T));
  const double sigma_scale =
      priors.sigma_scale > 0.0 ? priors.sigma_scale : std::max(y_var, 1e-8);
  const LinearRegressionPrior reg_prior =
      LinearRegressionPrior::diffuse(k1, priors.coef_var, priors.sigma_shape, sigma_scale);

  // ---- Initialization: ridge OLS with a per-state intercept spread.
  EmissionParams em;
  em.coef.resize(m, k1);
  em.sigma2.resize(m);
  {
    const Eigen::MatrixXd xtx = d.X_mean.transpose() * d.X_mean +
                                1e-8 * Eigen::MatrixXd::Identity(k1, k1);
    const Eigen::VectorXd ols = xtx.llt().solve(d.X_mean.transpose() * d.y);
    double resid_var = (d.y - d.X_mean * ols).squaredNorm() / std::max(1, T - k1);
    if (!(resid_var > 1e-12)) resid_var = 1e-12;
    const double sd = std::sqrt(resid_var);
    for (int s = 0; s < m; ++s) {
      em.coef.row(s) = ols.transpose();
      if (m > 1) em.coef(s, 0) += sd * (-1.0 + 2.0 * s / (m - 1.0));
      em.sigma2[s] = resid_var;
    }
  }

  TransitionModel trans =
      multinomial
          ? TransitionModel::multinomial(
                std::vector<Eigen::MatrixXd>(m, Eigen::MatrixXd::Zero(k2, m)))
          : TransitionModel::constant(Eigen::MatrixXd::Constant(m, m, 1.0 / m));

  InclusionState gamma;
  if (spec.rj_enabled) gamma.gamma.assign(spec.trans_roster.size(), 1);
  std::vector<int> active_cols;
  auto rebuild_active = [&]() {
    active_cols.assign(1, 0);
    for (std::size_t p = 0; p < gamma.gamma.size(); ++p)
      if (gamma.gamma[p] == 1) active_cols.push_back(static_cast<int>(p) + 1);
    if (!spec.rj_enabled && multinomial) {
      active_cols.resize(static_cast<std::size_t>(k2));
      std::iota(active_cols.begin(), active_cols.end(), 0);
    }
  };
  rebuild_active();

  const Eigen::VectorXd init_dist = uniform_init(m);

  StatePath path(static_cast<std::size_t>(T), 0);
  if (m > 1) {
    // Initial path from a uniform-transition filter draw.
    const TransitionModel uniform_trans =
        TransitionModel::constant(Eigen::MatrixXd::Constant(m, m, 1.0 / m));
    const FilterResult fr =
        forward_filter(d.y, d.X_mean, Eigen::MatrixXd(), em, uniform_trans, init_dist);
    path = ffbs_sample(rng, fr, uniform_trans, Eigen::MatrixXd());
  }

  PosteriorDraws out;
  out.spec = spec;
  out.fingerprint = dataset_fingerprint(data);
  out.seed = config.seed;
  out.train_rows = data.rows();
  out.offset = d.offset;
  out.mean_names = d.mean_names;
  out.trans_names = d.trans_names;
  const int n_retained = config.retained();
  out.emissions.reserve(static_cast<std::size_t>(n_retained));

  std::vector<double> ys_buf;
  ys_buf.reserve(static_cast<std::size_t>(T));

  for (int it = 0; it < config.iterations; ++it) {
    // (a) hidden states
    const FilterResult fr = forward_filter(d.y, d.X_mean, d.X_trans, em, trans, init_dist);
    if (!std::isfinite(fr.loglik))
      throw NumericError(spec.name() + ": non-finite likelihood at iteration " +
                         std::to_string(it));
    if (m > 1) path = ffbs_sample(rng, fr, trans, d.X_trans);

    // (b) per-state regression blocks
    for (int s = 0; s < m; ++s) {
      std::vector<int> rows;
      for (int t = 0; t < T; ++t)
        if (path[static_cast<std::size_t>(t)] == s) rows.push_back(t);
      Eigen::VectorXd y_s(static_cast<Eigen::Index>(rows.size()));
      Eigen::MatrixXd X_s(static_cast<Eigen::Index>(rows.size()), k1);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        y_s[static_cast<Eigen::Index>(r)] = d.y[rows[r]];
        X_s.row(static_cast<Eigen::Index>(r)) = d.X_mean.row(rows[r]);
      }
      const LinRegDraw draw =
          gibbs_linear_regression(rng, y_s, X_s, reg_prior, em.sigma2[s]);
      em.coef.row(s) = draw.coef.transpose();
      em.sigma2[s] = draw.sigma2;
    }

    // (c) transition parameters
    if (multinomial) {
      gibbs_multinomial_logit(rng, path, d.X_trans, trans.beta(), priors.trans_coef_var,
                              active_cols);
      if (spec.rj_enabled) {
        rj_variable_select(rng, gamma, path, d.X_trans, trans.beta(), priors.trans_coef_var,
                           priors.inclusion_prior);
        rebuild_active();
      }
    } else if (constant_rows) {
      // Conjugate Dirichlet(1,...,1) row update from transition counts.
      const Eigen::MatrixXd counts = count_transitions(path, m);
      Eigen::MatrixXd P(m, m);
      for (int i = 0; i < m; ++i)
        P.row(i) = rng.dirichlet(counts.row(i).transpose().array() + 1.0).transpose();
      trans = TransitionModel::constant(std::move(P));
    }

    // retain post-burn-in, thinned, relabeled
    if (it >= config.burn_in && (it - config.burn_in) % config.thin == 0 &&
        out.size() < n_retained) {
      RelabeledDraw r = relabel(em, trans, path);
      out.emissions.push_back(std::move(r.emissions));
      out.transitions.push_back(std::move(r.transitions));
      out.paths.push_back(std::move(r.path));
      if (spec.rj_enabled) out.inclusion.push_back(gamma.gamma);
      out.logliks.push_back(fr.loglik);
    }
  }

  out.validate();
  return out;
}

PosteriorDraws fit_msrw(const AlignedDataset& data, const McmcConfig& config,
                        const PriorConfig& priors) {
  return fit(data, ModelSpec::msrw(), config, priors);
}

Eigen::MatrixXd replicate_insample(Rng& rng, const PosteriorDraws& draws,
                                   const AlignedDataset& data) {
  draws.validate();
  if (data.rows() != draws.train_rows)
    throw DimensionError("replicate: dataset rows != fitted training rows");
  const ResolvedDesign d = resolve_design(data, draws.spec);
  const int T = static_cast<int>(d.y.size());
  const int n = draws.size();
  Eigen::MatrixXd out(T, n);
  for (int j = 0; j < n; ++j) {
    const EmissionParams& em = draws.emissions[static_cast<std::size_t>(j)];
    const StatePath& path = draws.paths[static_cast<std::size_t>(j)];
    for (int t = 0; t < T; ++t) {
      const int s = path[static_cast<std::size_t>(t)];
      const double mu = d.X_mean.row(t).dot(em.coef.row(s));
      out(t, j) = mu + std::sqrt(em.sigma2[s]) * rng.normal();
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Draw-file serialization (versioned text header, draw-major records).

namespace {

constexpr const char* kDrawsMagic = "mshmm-draws";
constexpr const char* kDrawsVersion = "v1";

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ',';
    out += names[i];
  }
  return out.empty() ? "-" : out;
}

std::vector<std::string> split_names(const std::string& joined) {
  if (joined == "-") return {};
  return split_csv_list(joined);
}

}  // namespace

void save_draws(const std::string& path, const PosteriorDraws& draws) {
  draws.validate();
  std::ostringstream out;
  out << kDrawsMagic << ' ' << kDrawsVersion << '\n';
  out << "model " << draws.spec.name() << '\n';
  out << "family " << to_string(draws.spec.family) << '\n';
  out << "states " << draws.spec.states << '\n';
  out << "ar_order " << draws.spec.ar_order << '\n';
  out << "rj " << (draws.spec.rj_enabled ? 1 : 0) << '\n';
  out << "mean_roster " << join_names(draws.spec.mean_roster) << '\n';
  out << "trans_roster " << join_names(draws.spec.trans_roster) << '\n';
  out << "seed " << draws.seed << '\n';
  out << "train_rows " << draws.train_rows << '\n';
  out << "offset " << draws.offset << '\n';
  out << "fingerprint " << std::hex << draws.fingerprint << std::dec << '\n';
  out << "mean_cols " << join_names(draws.mean_names) << '\n';
  out << "trans_cols " << join_names(draws.trans_names) << '\n';
  out << "draws " << draws.size() << '\n';
  out << "end-header\n";

  const int m = draws.spec.states;
  for (int j = 0; j < draws.size(); ++j) {
    const auto& em = draws.emissions[static_cast<std::size_t>(j)];
    const auto& trans = draws.transitions[static_cast<std::size_t>(j)];
    out << "draw " << j << '\n';
    for (int s = 0; s < m; ++s) {
      out << "B " << s;
      for (int c = 0; c < em.coef.cols(); ++c) out << ' ' << format_double(em.coef(s, c));
      out << '\n';
    }
    out << "sigma2";
    for (int s = 0; s < m; ++s) out << ' ' << format_double(em.sigma2[s]);
    out << '\n';
    if (trans.kind() == TransitionModel::Kind::Constant) {
      out << "trans constant\n";
      for (int i = 0; i < m; ++i) {
        out << "P " << i;
        for (int c = 0; c < m; ++c) out << ' ' << format_double(trans.matrix()(i, c));
        out << '\n';
      }
    } else {
      out << "trans multinomial\n";
      for (int i = 0; i < m; ++i) {
        out << "beta " << i;
        const auto& b = trans.beta()[static_cast<std::size_t>(i)];
        for (int r = 0; r < b.rows(); ++r)
          for (int c = 0; c < b.cols(); ++c) out << ' ' << format_double(b(r, c));
        out << '\n';
      }
    }
    out << "z";
    for (int st : draws.paths[static_cast<std::size_t>(j)]) out << ' ' << st + 1;
    out << '\n';
    if (draws.spec.rj_enabled) {
      out << "gamma";
      for (int g : draws.inclusion[static_cast<std::size_t>(j)]) out << ' ' << g;
      out << '\n';
    }
    out << "loglik " << format_double(draws.logliks[static_cast<std::size_t>(j)]) << '\n';
  }
  write_file_atomic(path, out.str());
}

namespace {

void expect_token(std::istream& in, const std::string& expected, const std::string& path) {
  std::string tok;
  if (!(in >> tok) || tok != expected)
    throw DataError(path + ": corrupt draw file (expected '" + expected + "', got '" + tok +
                    "')");
}

}  // namespace

PosteriorDraws load_draws(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string tok;
  expect_token(in, kDrawsMagic, path);
  expect_token(in, kDrawsVersion, path);

  PosteriorDraws out;
  std::string model_name, family_str, mean_roster, trans_roster, mean_cols, trans_cols;
  int states = 0, ar_order = 0, rj = 0, n_draws = 0;

  while (in >> tok && tok != "end-header") {
    if (tok == "model") in >> model_name;
    else if (tok == "family") in >> family_str;
    else if (tok == "states") in >> states;
    else if (tok == "ar_order") in >> ar_order;
    else if (tok == "rj") in >> rj;
    else if (tok == "mean_roster") in >> mean_roster;
    else if (tok == "trans_roster") in >> trans_roster;
    else if (tok == "seed") in >> out.seed;
    else if (tok == "train_rows") in >> out.train_rows;
    else if (tok == "offset") in >> out.offset;
    else if (tok == "fingerprint") in >> std::hex >> out.fingerprint >> std::dec;
    else if (tok == "mean_cols") in >> mean_cols;
    else if (tok == "trans_cols") in >> trans_cols;
    else if (tok == "draws") in >> n_draws;
    else throw DataError(path + ": unknown header field '" + tok + "'");
  }
  if (tok != "end-header") throw DataError(path + ": truncated header");

  out.spec.family = family_from_string(family_str);
  out.spec.states = states;
  out.spec.ar_order = ar_order;
  out.spec.rj_enabled = rj != 0;
  out.spec.mean_roster = split_names(mean_roster);
  out.spec.trans_roster = split_names(trans_roster);
  out.spec.validate();
  if (out.spec.name() != model_name)
    throw DataError(path + ": header model name mismatch");
  out.mean_names = split_names(mean_cols);
  out.trans_names = split_names(trans_cols);

  const int m = states;
  const int T = out.train_rows - out.offset;
  const int k1 = static_cast<int>(out.mean_names.size());
  const int k2 = static_cast<int>(out.trans_names.size());

  for (int j = 0; j < n_draws; ++j) {
    expect_token(in, "draw", path);
    int idx;
    in >> idx;
    EmissionParams em;
    em.coef.resize(m, k1);
    em.sigma2.resize(m);
    for (int s = 0; s < m; ++s) {
      expect_token(in, "B", path);
      int srow;
      in >> srow;
      for (int c = 0; c < k1; ++c) in >> em.coef(s, c);
    }
    expect_token(in, "sigma2", path);
    for (int s = 0; s < m; ++s) in >> em.sigma2[s];

    expect_token(in, "trans", path);
    std::string kind;
    in >> kind;
    TransitionModel trans = TransitionModel::constant(Eigen::MatrixXd::Identity(1, 1));
    if (kind == "constant") {
      Eigen::MatrixXd P(m, m);
      for (int i = 0; i < m; ++i) {
        expect_token(in, "P", path);
        int irow;
        in >> irow;
        for (int c = 0; c < m; ++c) in >> P(i, c);
      }
      trans = TransitionModel::constant(std::move(P));
    } else if (kind == "multinomial") {
      std::vector<Eigen::MatrixXd> beta(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) {
        expect_token(in, "beta", path);
        int irow;
        in >> irow;
        Eigen::MatrixXd b(k2, m);
        for (int r = 0; r < k2; ++r)
          for (int c = 0; c < m; ++c) in >> b(r, c);
        beta[static_cast<std::size_t>(i)] = std::move(b);
      }
      trans = TransitionModel::multinomial(std::move(beta));
    } else {
      throw DataError(path + ": unknown transition kind '" + kind + "'");
    }

    expect_token(in, "z", path);
    StatePath zpath(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
      int v;
      in >> v;
      if (v < 1 || v > m) throw DataError(path + ": state out of range in draw file");
      zpath[static_cast<std::size_t>(t)] = v - 1;
    }
    std::vector<int> g;
    if (out.spec.rj_enabled) {
      expect_token(in, "gamma", path);
      g.resize(out.spec.trans_roster.size());
      for (auto& v : g) in >> v;
    }
    expect_token(in, "loglik", path);
    double ll;
    in >> ll;
    if (!in) throw DataError(path + ": truncated draw record " + std::to_string(j));

    out.emissions.push_back(std::move(em));
    out.transitions.push_back(std::move(trans));
    out.paths.push_back(std::move(zpath));
    if (out.spec.rj_enabled) out.inclusion.push_back(std::move(g));
    out.logliks.push_back(ll);
  }
  out.validate();
  return out;
}

std::vector<PosteriorSummaryRow> posterior_summary(const PosteriorDraws& draws) {
  draws.validate();
  const int n = draws.size();
  const int m = draws.spec.states;
  const int k1 = static_cast<int>(draws.mean_names.size());

  Eigen::VectorXd incl;
  if (draws.spec.rj_enabled) incl = inclusion_probabilities(draws.inclusion);

  std::vector<PosteriorSummaryRow> rows;
  for (int c = 0; c < k1; ++c) {
    PosteriorSummaryRow row;
    row.name = draws.mean_names[static_cast<std::size_t>(c)];
    row.mean.resize(m);
    row.significant.assign(static_cast<std::size_t>(m), false);
    for (int s = 0; s < m; ++s) {
      std::vector<double> coef(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j)
        coef[static_cast<std::size_t>(j)] = draws.emissions[static_cast<std::size_t>(j)].coef(s, c);
      row.mean[s] = mean_of(coef);
      std::sort(coef.begin(), coef.end());
      const double lo = quantile_sorted(coef, 0.05);
      const double hi = quantile_sorted(coef, 0.95);
      // "Significant at the 10% level": zero outside the central 90% interval.
      row.significant[static_cast<std::size_t>(s)] = (lo > 0.0 && hi > 0.0) || (lo < 0.0 && hi < 0.0);
    }
    rows.push_back(std::move(row));
  }

  // Transition-equation predictors, including any not in the mean equation.
  for (std::size_t p = 0; p < draws.spec.trans_roster.size(); ++p) {
    const std::string& name = draws.spec.trans_roster[p];
    PosteriorSummaryRow* row = nullptr;
    for (auto& r : rows)
      if (r.name == name) row = &r;
    if (!row) {
      rows.push_back({});
      row = &rows.back();
      row->name = name;
    }
    row->in_transition = true;
    if (draws.spec.rj_enabled) {
      row->has_inclusion = true;
      row->inclusion = incl[static_cast<Eigen::Index>(p)];
    }
  }
  return rows;
}

}  // namespace mshmm
