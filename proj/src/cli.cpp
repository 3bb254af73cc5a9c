#include "mshmm/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mshmm/errors.hpp"
#include "mshmm/forecast.hpp"
#include "mshmm/io.hpp"
#include "mshmm/kvconfig.hpp"
#include "mshmm/stats.hpp"
#include "mshmm/synthetic.hpp"

namespace fs = std::filesystem;

namespace mshmm {

namespace {

std::uint64_t hash_name(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Right-padded plain-text table.
std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c >= width.size()) width.push_back(0);
      width[c] = std::max(width[c], row[c].size());
    }
  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c];
      if (c + 1 < row.size())
        out << std::string(width[c] - row[c].size() + 2, ' ');
    }
    out << '\n';
  }
  return out.str();
}

std::string fmt2_or_dash(double v) {
  return std::isfinite(v) ? format_fixed(v, 2) : std::string("-");
}

ModelSpec spec_for(const RunConfig& config, const Manifest& manifest,
                   const std::string& name) {
  const auto mean_roster = mean_roster_from_manifest(manifest, config.ar_lag);
  const auto trans_roster = transition_roster_from_manifest(manifest, config.ar_lag);
  ModelSpec spec = ModelSpec::from_name(name, mean_roster, trans_roster);
  for (const auto& rj_name : config.rj_models)
    if (rj_name == name) {
      spec.rj_enabled = true;
      spec.validate();
    }
  return spec;
}

struct LoadedRun {
  Manifest manifest;
  AlignedDataset full;
  int train_rows = 0;
};

LoadedRun load_run(const RunConfig& config) {
  LoadedRun run;
  run.manifest = parse_manifest(config.manifest_path);
  run.full = load_dataset(run.manifest, config.ar_lag, config.horizons);
  run.train_rows = run.full.rows() - config.horizons;
  if (run.train_rows < 1)
    throw DimensionError("test window does not fit inside the dataset");
  return run;
}

std::string draws_path(const RunConfig& config, const std::string& model) {
  return (fs::path(config.out_dir) / "draws" / (model + ".draws")).string();
}

PosteriorDraws load_checked_draws(const RunConfig& config, const LoadedRun& run,
                                  const std::string& model) {
  PosteriorDraws draws = load_draws(draws_path(config, model));
  if (draws.train_rows + config.horizons != run.full.rows())
    throw FingerprintError(model + ": draw file was fitted with train_rows = " +
                           std::to_string(draws.train_rows) + ", incompatible with L = " +
                           std::to_string(config.horizons));
  const std::uint64_t expected = dataset_fingerprint(run.full.head(draws.train_rows));
  if (expected != draws.fingerprint)
    throw FingerprintError(model + ": draw file does not match the assembled dataset");
  return draws;
}

void write_trace_csv(const RunConfig& config, const PosteriorDraws& draws) {
  const int m = draws.spec.states;
  std::ostringstream out;
  out << "draw,loglik";
  for (int s = 1; s <= m; ++s) out << ",sigma2_" << s;
  for (int s = 1; s <= m; ++s) out << ",intercept_" << s;
  out << '\n';
  for (int j = 0; j < draws.size(); ++j) {
    out << j << ',' << format_double(draws.logliks[static_cast<std::size_t>(j)]);
    for (int s = 0; s < m; ++s)
      out << ',' << format_double(draws.emissions[static_cast<std::size_t>(j)].sigma2[s]);
    for (int s = 0; s < m; ++s)
      out << ',' << format_double(draws.emissions[static_cast<std::size_t>(j)].coef(s, 0));
    out << '\n';
  }
  write_file_atomic(
      (fs::path(config.out_dir) / "trace" / (draws.spec.name() + "_trace.csv")).string(),
      out.str());
}

void write_posterior_mean_tables(const RunConfig& config, const PosteriorDraws& draws) {
  const auto rows = posterior_summary(draws);
  const int m = draws.spec.states;
  const bool with_inclusion = draws.spec.rj_enabled;

  std::vector<std::vector<std::string>> text;
  std::vector<std::string> header{"Predictor"};
  for (int s = 1; s <= m; ++s) header.push_back("State " + std::to_string(s));
  if (with_inclusion) header.push_back("Probabilities");
  text.push_back(header);

  std::ostringstream csv;
  csv << "predictor";
  for (int s = 1; s <= m; ++s) csv << ",state" << s << "_mean,state" << s << "_significant";
  if (with_inclusion) csv << ",inclusion";
  csv << '\n';

  for (const auto& row : rows) {
    std::vector<std::string> line{row.name};
    csv << row.name;
    for (int s = 0; s < m; ++s) {
      if (row.mean.size() > 0) {
        std::string cell = format_fixed(row.mean[s], 2);
        if (row.significant[static_cast<std::size_t>(s)]) cell += "*";
        line.push_back(cell);
        csv << ',' << format_double(row.mean[s]) << ','
            << (row.significant[static_cast<std::size_t>(s)] ? 1 : 0);
      } else {
        line.push_back("-");
        csv << ",,";
      }
    }
    if (with_inclusion) {
      if (row.has_inclusion) {
        // Inclusion probabilities at 2 decimals; >= 0.4 marked bold.
        const std::string p = format_fixed(row.inclusion, 2);
        line.push_back(row.inclusion >= 0.4 ? "**" + p + "**" : p);
        csv << ',' << format_double(row.inclusion);
      } else {
        line.push_back("-");
        csv << ',';
      }
    }
    text.push_back(std::move(line));
    csv << '\n';
  }

  const fs::path base = fs::path(config.out_dir) / "tables";
  write_file_atomic((base / (draws.spec.name() + "_posterior_means.txt")).string(),
                    render_table(text));
  write_file_atomic((base / (draws.spec.name() + "_posterior_means.csv")).string(), csv.str());
}

}  // namespace

void RunConfig::validate() const {
  if (manifest_path.empty()) throw ConfigError("run config: manifest path is required");
  if (out_dir.empty()) throw ConfigError("run config: output directory is required");
  if (horizons < 1) throw ConfigError("run config: horizons must be at least 1");
  if (ar_lag != 0 && ar_lag != 1) throw ConfigError("run config: ar_lag must be 0 or 1");
  if (roster.empty()) throw ConfigError("run config: model roster is empty");
  for (const auto& rj_name : rj_models) {
    bool found = false;
    for (const auto& name : roster) found = found || name == rj_name;
    if (!found)
      throw ConfigError("run config: rj model '" + rj_name + "' is not in the roster");
  }
  mcmc.validate();
}

RunConfig RunConfig::from_file(const std::string& path) {
  const KvFile file = KvFile::parse_file(path);
  const fs::path base = fs::path(path).parent_path();
  RunConfig config;

  const KvFile::Section* run = file.find("run");
  if (!run) throw ConfigError(path + ": missing [run] section");
  config.manifest_path = (base / run->get("manifest")).string();
  config.out_dir = (base / run->get("out")).string();
  config.horizons = static_cast<int>(run->has("horizons") ? run->get_int("horizons") : 30);
  config.ar_lag = static_cast<int>(run->has("ar_lag") ? run->get_int("ar_lag") : 1);
  if (run->has("seed"))
    config.mcmc.seed = static_cast<std::uint64_t>(run->get_int("seed"));

  const KvFile::Section* models = file.find("models");
  if (!models) throw ConfigError(path + ": missing [models] section");
  config.roster = split_csv_list(models->get("roster"));
  config.rj_models = split_csv_list(models->get_or("rj", ""));

  if (const KvFile::Section* mcmc = file.find("mcmc")) {
    config.mcmc.iterations =
        static_cast<int>(mcmc->has("iterations") ? mcmc->get_int("iterations") : 20000);
    config.mcmc.burn_in =
        static_cast<int>(mcmc->has("burn_in") ? mcmc->get_int("burn_in") : 10000);
    config.mcmc.thin = static_cast<int>(mcmc->has("thin") ? mcmc->get_int("thin") : 5);
  }

  if (const KvFile::Section* priors = file.find("priors")) {
    if (priors->has("coef_var")) config.priors.coef_var = priors->get_double("coef_var");
    if (priors->has("sigma_shape"))
      config.priors.sigma_shape = priors->get_double("sigma_shape");
    if (priors->has("sigma_scale") && priors->get_or("sigma_scale", "auto") != "auto")
      config.priors.sigma_scale = priors->get_double("sigma_scale");
    if (priors->has("trans_coef_var"))
      config.priors.trans_coef_var = priors->get_double("trans_coef_var");
    if (priors->has("inclusion_prob"))
      config.priors.inclusion_prior = priors->get_double("inclusion_prob");
  }
  return config;
}

int cmd_fit(const RunConfig& config) {
  config.validate();
  const LoadedRun run = load_run(config);
  const AlignedDataset train = run.full.head(run.train_rows);

  for (const auto& name : config.roster) {
    const ModelSpec spec = spec_for(config, run.manifest, name);
    McmcConfig mcmc = config.mcmc;
    mcmc.seed = Rng::mix(config.mcmc.seed, hash_name(name));
    const PosteriorDraws draws = fit(train, spec, mcmc, config.priors);
    save_draws(draws_path(config, name), draws);
    write_trace_csv(config, draws);
    write_posterior_mean_tables(config, draws);
    std::cout << "fitted " << name << " (" << draws.size() << " retained draws)\n";
  }
  return 0;
}

int cmd_forecast(const RunConfig& config) {
  config.validate();
  const LoadedRun run = load_run(config);

  std::vector<EvaluationReport> reports;
  for (const auto& name : config.roster) {
    const PosteriorDraws draws = load_checked_draws(config, run, name);
    Rng rng(Rng::mix(config.mcmc.seed, hash_name(name + "/forecast")));
    const auto samples = one_step_forecasts(rng, draws, run.full, config.horizons);
    const EvaluationReport report = evaluate_forecasts(name, samples);

    std::ostringstream csv;
    csv << "horizon,crps,mse\n";
    for (std::size_t l = 0; l < report.crps.size(); ++l)
      csv << l + 1 << ',' << format_double(report.crps[l]) << ','
          << format_double(report.mse[l]) << '\n';
    csv << "average," << format_double(report.avg_crps) << ','
        << format_double(report.avg_mse) << '\n';
    write_file_atomic(
        (fs::path(config.out_dir) / "forecast" / (name + "_scores.csv")).string(), csv.str());
    reports.push_back(report);
  }

  const ComparisonTable table = compare_models(reports);

  std::ostringstream csv;
  csv << "model,avg_crps,avg_mse";
  for (int h : table.spot_horizons) csv << ",crps_h" << h << ",mse_h" << h;
  csv << '\n';
  for (const auto& r : table.ranked) {
    csv << r.model << ',' << format_double(r.avg_crps) << ',' << format_double(r.avg_mse);
    for (int h : table.spot_horizons)
      csv << ',' << format_double(r.crps[static_cast<std::size_t>(h - 1)]) << ','
          << format_double(r.mse[static_cast<std::size_t>(h - 1)]);
    csv << '\n';
  }
  write_file_atomic((fs::path(config.out_dir) / "forecast" / "comparison.csv").string(),
                    csv.str());

  // Text table in the familiar "CRPS (MSE)" layout, lowest CRPS per column
  // starred. Ranking is by average CRPS.
  std::vector<std::vector<std::string>> text;
  std::vector<std::string> header{"Model"};
  for (int h : table.spot_horizons) header.push_back(std::to_string(h));
  header.push_back("Average");
  text.push_back(std::move(header));

  std::vector<int> best_per_spot;
  for (int h : table.spot_horizons) best_per_spot.push_back(table.best_for_horizon(h));

  for (std::size_t i = 0; i < table.ranked.size(); ++i) {
    const auto& r = table.ranked[i];
    std::vector<std::string> row{r.model};
    for (std::size_t c = 0; c < table.spot_horizons.size(); ++c) {
      const int h = table.spot_horizons[c];
      std::string cell = format_fixed(r.crps[static_cast<std::size_t>(h - 1)], 2) + " (" +
                         format_fixed(r.mse[static_cast<std::size_t>(h - 1)], 2) + ")";
      if (static_cast<int>(i) == best_per_spot[c]) cell = "*" + cell + "*";
      row.push_back(std::move(cell));
    }
    std::string avg = format_fixed(r.avg_crps, 2) + " (" + format_fixed(r.avg_mse, 2) + ")";
    if (i == 0) avg = "*" + avg + "*";
    row.push_back(std::move(avg));
    text.push_back(std::move(row));
  }
  write_file_atomic((fs::path(config.out_dir) / "forecast" / "comparison.txt").string(),
                    render_table(text));
  std::cout << "forecast evaluation written for " << reports.size() << " models\n";
  return 0;
}

int cmd_report(const RunConfig& config) {
  config.validate();
  const LoadedRun run = load_run(config);
  const AlignedDataset train = run.full.head(run.train_rows);
  const fs::path base = fs::path(config.out_dir) / "report";

  std::vector<std::vector<std::string>> coverage_text{{"Model", "Proportion", "MSE"}};
  std::ostringstream coverage_csv;
  coverage_csv << "model,proportion,outliers,rows,insample_mse\n";

  for (const auto& name : config.roster) {
    const PosteriorDraws draws = load_checked_draws(config, run, name);
    const ResolvedDesign design = resolve_design(train, draws.spec);
    const int T = static_cast<int>(design.y.size());
    const int m = draws.spec.states;

    Rng rng(Rng::mix(config.mcmc.seed, hash_name(name + "/report")));
    const Eigen::MatrixXd replicated = replicate_insample(rng, draws, train);

    const Coverage cov = coverage_report(replicated, design.y);
    double insample_mse = 0.0;
    for (int t = 0; t < T; ++t)
      for (int j = 0; j < replicated.cols(); ++j) {
        const double dlt = design.y[t] - replicated(t, j);
        insample_mse += dlt * dlt;
      }
    insample_mse /= static_cast<double>(T) * static_cast<double>(replicated.cols());
    coverage_text.push_back({name, cov.formatted(), format_fixed(insample_mse, 2)});
    coverage_csv << name << ',' << format_double(cov.proportion()) << ',' << cov.outliers
                 << ',' << cov.rows << ',' << format_double(insample_mse) << '\n';

    // Replicated-band series (observed, 0.5% / 50% / 99.5% row quantiles).
    {
      std::ostringstream csv;
      csv << "date,value,q005,q50,q995\n";
      std::vector<double> rowbuf(static_cast<std::size_t>(replicated.cols()));
      for (int t = 0; t < T; ++t) {
        for (int j = 0; j < replicated.cols(); ++j)
          rowbuf[static_cast<std::size_t>(j)] = replicated(t, j);
        std::sort(rowbuf.begin(), rowbuf.end());
        csv << format_iso_date(train.dates[static_cast<std::size_t>(t + draws.offset)]) << ','
            << format_double(design.y[t]) << ',' << format_double(quantile_sorted(rowbuf, 0.005))
            << ',' << format_double(quantile_sorted(rowbuf, 0.5)) << ','
            << format_double(quantile_sorted(rowbuf, 0.995)) << '\n';
      }
      write_file_atomic((base / (name + "_bands.csv")).string(), csv.str());
    }

    // State summary (occupancies, per-state return moments).
    const StateSummary summary = state_summary(draws.paths, design.y, m);
    {
      std::vector<std::vector<std::string>> text{{"State", "Occupancy", "Average", "Std"}};
      std::ostringstream csv;
      csv << "state,occupancy,average,std\n";
      for (int s = 0; s < m; ++s) {
        text.push_back({std::to_string(s + 1), format_fixed(summary.occupancy[s], 2),
                        fmt2_or_dash(summary.mean[s]), fmt2_or_dash(summary.stddev[s])});
        csv << s + 1 << ',' << format_double(summary.occupancy[s]) << ','
            << (std::isfinite(summary.mean[s]) ? format_double(summary.mean[s]) : "") << ','
            << (std::isfinite(summary.stddev[s]) ? format_double(summary.stddev[s]) : "")
            << '\n';
      }
      write_file_atomic((base / (name + "_states.txt")).string(), render_table(text));
      write_file_atomic((base / (name + "_states.csv")).string(), csv.str());
    }

    // Returns colored by the MAP smoothed classification.
    {
      std::ostringstream csv;
      csv << "date,value,state\n";
      for (int t = 0; t < T; ++t)
        csv << format_iso_date(train.dates[static_cast<std::size_t>(t + draws.offset)]) << ','
            << format_double(design.y[t]) << ','
            << summary.map_state[static_cast<std::size_t>(t)] + 1 << '\n';
      write_file_atomic((base / (name + "_state_returns.csv")).string(), csv.str());
    }

    // Smoothed state probabilities averaged over retained parameter draws.
    {
      Eigen::MatrixXd smoothed = Eigen::MatrixXd::Zero(T, m);
      const Eigen::VectorXd init = uniform_init(m);
      for (int j = 0; j < draws.size(); ++j)
        smoothed += smoothed_probs(design.y, design.X_mean, design.X_trans,
                                   draws.emissions[static_cast<std::size_t>(j)],
                                   draws.transitions[static_cast<std::size_t>(j)], init);
      smoothed /= static_cast<double>(draws.size());

      std::ostringstream csv;
      csv << "date,state,probability\n";
      for (int t = 0; t < T; ++t)
        for (int s = 0; s < m; ++s)
          csv << format_iso_date(train.dates[static_cast<std::size_t>(t + draws.offset)]) << ','
              << s + 1 << ',' << format_fixed(smoothed(t, s), 6) << '\n';
      write_file_atomic((base / (name + "_smoothed.csv")).string(), csv.str());
    }
  }

  write_file_atomic((base / "coverage.txt").string(), render_table(coverage_text));
  write_file_atomic((base / "coverage.csv").string(), coverage_csv.str());
  std::cout << "diagnostics written for " << config.roster.size() << " models\n";
  return 0;
}

int cmd_simulate(const SimulateOptions& options) {
  if (options.out_dir.empty()) throw ConfigError("simulate: output directory is required");
  if (options.length < 30) throw ConfigError("simulate: length must be at least 30");
  if (options.states < 1 || options.states > 5)
    throw ConfigError("simulate: states must be 1-5");
  if (options.covariates < 1) throw ConfigError("simulate: need at least one covariate");

  const int m = options.states;
  const int gen_rows = options.length + 1;  // one row is dropped on reassembly
  const int k = 1 + options.covariates + 1;  // intercept + covariates + AR1

  GenerativeSpec spec;
  spec.states = m;
  spec.T = gen_rows;
  spec.seed = options.seed;
  spec.covariates = options.covariates;
  spec.ar_term = true;
  spec.emissions.coef = Eigen::MatrixXd::Zero(m, k);
  spec.emissions.sigma2.resize(m);
  for (int s = 0; s < m; ++s) {
    spec.emissions.coef(s, 0) = m == 1 ? 0.2 : -2.0 + 4.0 * s / (m - 1.0);
    spec.emissions.sigma2[s] = std::pow(2.0, m - 1 - s);
  }
  if (m == 1) {
    spec.transitions = TransitionModel::constant(Eigen::MatrixXd::Identity(1, 1));
  } else {
    // Transitions react to the first covariate; mild stickiness via the
    // intercepts.
    std::vector<Eigen::MatrixXd> beta(static_cast<std::size_t>(m),
                                      Eigen::MatrixXd::Zero(k, m));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j + 1 < m; ++j) beta[static_cast<std::size_t>(i)](0, j) = i == j ? 1.0 : 0.0;
      beta[static_cast<std::size_t>(i)](1, 0) = 2.0;
    }
    spec.transitions = TransitionModel::multinomial(std::move(beta));
  }

  const Generated gen = generate(spec);
  const fs::path base(options.out_dir);
  const fs::path data_dir = base / "data";

  // Target prices reconstructed so that pct_log_return recovers the series.
  {
    std::ostringstream csv;
    csv << "date,value\n";
    double price = 100.0;
    csv << format_iso_date(gen.data.dates.front() - 1) << ',' << format_double(price) << '\n';
    for (int t = 0; t < gen.data.y.size(); ++t) {
      price *= std::exp(gen.data.y[t] / 100.0);
      csv << format_iso_date(gen.data.dates[static_cast<std::size_t>(t)]) << ','
          << format_double(price) << '\n';
    }
    write_file_atomic((data_dir / "target.csv").string(), csv.str());
  }
  for (int j = 0; j < options.covariates; ++j) {
    std::ostringstream csv;
    csv << "date,value\n";
    for (int t = 0; t < gen.data.y.size(); ++t)
      csv << format_iso_date(gen.data.dates[static_cast<std::size_t>(t)]) << ','
          << format_double(gen.data.X(t, 1 + j)) << '\n';
    write_file_atomic((data_dir / ("x" + std::to_string(j + 1) + ".csv")).string(), csv.str());
  }
  {
    std::ostringstream csv;
    csv << "date,state\n";
    for (std::size_t t = 0; t < gen.truth.size(); ++t)
      csv << format_iso_date(gen.data.dates[t]) << ',' << gen.truth[t] + 1 << '\n';
    write_file_atomic((base / "truth_states.csv").string(), csv.str());
  }

  {
    std::ostringstream manifest;
    manifest << "# synthetic dataset manifest\n";
    manifest << "[series target]\n";
    manifest << "file = data/target.csv\n";
    manifest << "transform = pct_log_return\n";
    manifest << "role = target\n";
    for (int j = 1; j <= options.covariates; ++j) {
      manifest << "\n[series x" << j << "]\n";
      manifest << "file = data/x" << j << ".csv\n";
      manifest << "transform = identity\n";
      manifest << "role = both\n";
    }
    write_file_atomic((base / "manifest.ini").string(), manifest.str());
  }

  {
    std::ostringstream config;
    config << "[run]\n";
    config << "manifest = manifest.ini\n";
    config << "out = results\n";
    config << "horizons = 10\n";
    config << "ar_lag = 1\n";
    config << "seed = " << options.seed << "\n\n";
    config << "[models]\n";
    config << "roster = " << (m > 1 ? "NHHM_" + std::to_string(m) + ",MS-RW,RW" : "RW,KS")
           << "\n";
    config << "rj =\n\n";
    config << "[mcmc]\n";
    config << "iterations = 3000\n";
    config << "burn_in = 1000\n";
    config << "thin = 2\n";
    write_file_atomic((base / "config.ini").string(), config.str());
  }

  std::cout << "synthetic dataset written to " << options.out_dir << "\n";
  return 0;
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Bayesian regime-switching return models: fit, forecast, evaluate"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::string models_override;
  std::uint64_t seed_override = 0;
  int horizons_override = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration file")->required();
    cmd->add_option("--out", out_override, "output directory override");
    cmd->add_option("--models", models_override, "comma-separated roster override");
    cmd->add_option("--seed", seed_override, "seed override");
    cmd->add_option("--horizons", horizons_override, "test-window length override");
  };

  CLI::App* fit_cmd = app.add_subcommand("fit", "fit the model roster and persist draws");
  CLI::App* forecast_cmd =
      app.add_subcommand("forecast", "score one-step-ahead predictive densities");
  CLI::App* report_cmd =
      app.add_subcommand("report", "in-sample coverage, state summaries, plot data");
  add_common(fit_cmd);
  add_common(forecast_cmd);
  add_common(report_cmd);

  SimulateOptions sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "write a synthetic dataset bundle");
  sim_cmd->add_option("--out", sim.out_dir, "output directory")->required();
  sim_cmd->add_option("--seed", sim.seed, "generator seed");
  sim_cmd->add_option("--length", sim.length, "assembled dataset rows");
  sim_cmd->add_option("--states", sim.states, "hidden states");
  sim_cmd->add_option("--covariates", sim.covariates, "covariate count");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sim_cmd->parsed()) return cmd_simulate(sim);

    CLI::App* active = fit_cmd->parsed() ? fit_cmd
                       : forecast_cmd->parsed() ? forecast_cmd
                                                : report_cmd;
    RunConfig config = RunConfig::from_file(config_path);
    if (!out_override.empty()) config.out_dir = out_override;
    if (!models_override.empty()) config.roster = split_csv_list(models_override);
    if (active->count("--seed") > 0) config.mcmc.seed = seed_override;
    if (horizons_override >= 0) config.horizons = horizons_override;

    if (fit_cmd->parsed()) return cmd_fit(config);
    if (forecast_cmd->parsed()) return cmd_forecast(config);
    if (report_cmd->parsed()) return cmd_report(config);
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const FingerprintError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 5;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 6;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 7;
  }
}

}  // namespace mshmm
