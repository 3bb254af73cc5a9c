#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "mshmm/cli.hpp"
#include "mshmm/io.hpp"

using namespace mshmm;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "mshmm_cli_test";

// All regular files under a directory, keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file())
      out[fs::relative(entry.path(), dir).string()] = read_file(entry.path().string());
  return out;
}

void write_config(const fs::path& path, const std::string& roster, int horizons,
                  std::uint64_t seed, const std::string& rj = "",
                  const std::string& out_dir = "results") {
  std::string cfg;
  cfg += "[run]\n";
  cfg += "manifest = manifest.ini\n";
  cfg += "out = " + out_dir + "\n";
  cfg += "horizons = " + std::to_string(horizons) + "\n";
  cfg += "ar_lag = 1\n";
  cfg += "seed = " + std::to_string(seed) + "\n\n";
  cfg += "[models]\n";
  cfg += "roster = " + roster + "\n";
  cfg += "rj = " + rj + "\n\n";
  cfg += "[mcmc]\n";
  cfg += "iterations = 300\n";
  cfg += "burn_in = 100\n";
  cfg += "thin = 2\n";
  write_file_atomic(path.string(), cfg);
}

int run(std::vector<std::string> args) { return run_cli(std::move(args)); }

}  // namespace

TEST_CASE("end-to-end pipeline: determinism, idempotency, artifact set") {
  const fs::path dir = kRoot / "pipeline";
  fs::remove_all(dir);
  REQUIRE(run({"simulate", "--out", dir.string(), "--seed", "2101", "--length", "170"}) == 0);
  write_config(dir / "config.ini", "NHHM_2,MS-RW,RW", 8, 2101, "NHHM_2");

  const std::string cfg = (dir / "config.ini").string();
  const std::string out_a = (dir / "run_a").string();
  const std::string out_b = (dir / "run_b").string();

  REQUIRE(run({"fit", "--config", cfg, "--out", out_a}) == 0);
  REQUIRE(run({"forecast", "--config", cfg, "--out", out_a}) == 0);
  REQUIRE(run({"report", "--config", cfg, "--out", out_a}) == 0);

  REQUIRE(run({"fit", "--config", cfg, "--out", out_b}) == 0);
  REQUIRE(run({"forecast", "--config", cfg, "--out", out_b}) == 0);
  REQUIRE(run({"report", "--config", cfg, "--out", out_b}) == 0);

  const auto a = snapshot(out_a);
  const auto b = snapshot(out_b);
  REQUIRE(a.size() == b.size());
  for (const auto& [rel, content] : a) {
    INFO("file ", rel);
    REQUIRE(b.count(rel) == 1);
    CHECK(content == b.at(rel));
  }

  // Expected artifact names for each command.
  CHECK(a.count("draws/NHHM_2.draws") == 1);
  CHECK(a.count("trace/MS-RW_trace.csv") == 1);
  CHECK(a.count("tables/NHHM_2_posterior_means.txt") == 1);
  CHECK(a.count("forecast/RW_scores.csv") == 1);
  CHECK(a.count("forecast/comparison.txt") == 1);
  CHECK(a.count("report/coverage.txt") == 1);
  CHECK(a.count("report/NHHM_2_smoothed.csv") == 1);
  CHECK(a.count("report/MS-RW_states.csv") == 1);

  // No temp files left behind.
  for (const auto& [rel, content] : a) CHECK(rel.find(".tmp") == std::string::npos);

  // Re-running a command into the same directory is byte-idempotent.
  REQUIRE(run({"forecast", "--config", cfg, "--out", out_a}) == 0);
  CHECK(snapshot(out_a) == a);

  // The rj-enabled posterior-means table carries the probabilities column;
  // every inclusion cell is a two-decimal value, bold-marked iff >= 0.40.
  const std::string& table = a.at("tables/NHHM_2_posterior_means.txt");
  CHECK(table.find("Probabilities") != std::string::npos);
  {
    std::istringstream lines(table);
    std::string line;
    std::getline(lines, line);  // header
    int inclusion_cells = 0;
    while (std::getline(lines, line)) {
      const auto last_space = line.find_last_of(' ');
      std::string cell = line.substr(last_space + 1);
      if (cell == "-") continue;
      ++inclusion_cells;
      bool bold = false;
      if (cell.rfind("**", 0) == 0 && cell.size() > 4) {
        bold = true;
        cell = cell.substr(2, cell.size() - 4);
      }
      REQUIRE(cell.size() == 4);  // d.dd
      CHECK(cell[1] == '.');
      const double p = std::stod(cell);
      CHECK(bold == (p >= 0.40));
    }
    CHECK(inclusion_cells == 3);  // x1, x2, AR1
  }

  // Occupancies in the state summary sum to one.
  const std::string& states_csv = a.at("report/NHHM_2_states.csv");
  std::istringstream in(states_csv);
  std::string line;
  std::getline(in, line);  // header
  double occ_total = 0.0;
  while (std::getline(in, line)) {
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    occ_total += std::stod(line.substr(first + 1, second - first - 1));
  }
  CHECK(occ_total == doctest::Approx(1.0).epsilon(1e-9));

  // Smoothed probabilities for a single-regime model are identically one.
  const std::string& rw_smoothed = a.at("report/RW_smoothed.csv");
  std::istringstream sin(rw_smoothed);
  std::getline(sin, line);
  while (std::getline(sin, line))
    CHECK(line.substr(line.rfind(',') + 1) == "1.000000");
}

TEST_CASE("the full roster fits and is named by abbreviation") {
  const fs::path dir = kRoot / "roster";
  fs::remove_all(dir);
  REQUIRE(run({"simulate", "--out", dir.string(), "--seed", "7", "--length", "170"}) == 0);
  write_config(dir / "config.ini",
               "NHHM_2,NHHM_3,NHHM_4,NHHM_5,HHM_2,HHM_3,HHM_4,HHM_5,MS-RW,KS,AR5,RW", 8, 7);
  REQUIRE(run({"fit", "--config", (dir / "config.ini").string()}) == 0);
  for (const std::string name : {"NHHM_2", "NHHM_3", "NHHM_4", "NHHM_5", "HHM_2", "HHM_3",
                                 "HHM_4", "HHM_5", "MS-RW", "KS", "AR5", "RW"})
    CHECK(fs::exists(dir / "results" / "draws" / (name + ".draws")));
}

TEST_CASE("forecast with a single horizon: the average equals the only column") {
  const fs::path dir = kRoot / "single_horizon";
  fs::remove_all(dir);
  REQUIRE(run({"simulate", "--out", dir.string(), "--seed", "12", "--length", "150"}) == 0);
  // AR5 and KS exercise the lagged/offset design path through the forecaster.
  write_config(dir / "config.ini", "RW,AR5,KS", 1, 12);
  const std::string cfg = (dir / "config.ini").string();
  REQUIRE(run({"fit", "--config", cfg}) == 0);
  REQUIRE(run({"forecast", "--config", cfg}) == 0);
  REQUIRE(run({"report", "--config", cfg}) == 0);
  CHECK(fs::exists(dir / "results/forecast/AR5_scores.csv"));
  CHECK(fs::exists(dir / "results/report/KS_bands.csv"));

  const std::string scores = read_file((dir / "results/forecast/RW_scores.csv").string());
  std::istringstream in(scores);
  std::string header, row1, avg;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, avg);
  CHECK(row1.substr(0, 2) == "1,");
  CHECK(avg.substr(0, 8) == "average,");
  CHECK(row1.substr(2) == avg.substr(8));
}

TEST_CASE("fingerprint mismatch and error exit codes") {
  const fs::path dir = kRoot / "errors";
  fs::remove_all(dir);
  REQUIRE(run({"simulate", "--out", dir.string(), "--seed", "5", "--length", "150"}) == 0);
  write_config(dir / "config.ini", "RW", 5, 5);
  const std::string cfg = (dir / "config.ini").string();
  REQUIRE(run({"fit", "--config", cfg}) == 0);

  // Tamper with one data point: the dataset no longer matches the draws.
  const std::string target_csv = (dir / "data" / "target.csv").string();
  const std::string original = read_file(target_csv);
  {
    std::istringstream in(original);
    std::ostringstream out;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
      if (row == 20) {
        const auto comma = line.find(',');
        line = line.substr(0, comma + 1) + "123.456";
      }
      out << line << '\n';
      ++row;
    }
    write_file_atomic(target_csv, out.str());
  }
  CHECK(run({"forecast", "--config", cfg}) == 5);
  write_file_atomic(target_csv, original);

  // Changing L breaks the train/test split contract.
  CHECK(run({"forecast", "--config", cfg, "--horizons", "6"}) == 5);

  // Missing config file; malformed config; unreadable data.
  CHECK(run({"fit", "--config", (dir / "absent.ini").string()}) == 2);
  write_file_atomic((dir / "broken.ini").string(), "[models]\nroster = RW\n");
  CHECK(run({"fit", "--config", (dir / "broken.ini").string()}) == 6);
  write_config(dir / "badmanifest.ini", "RW", 5, 5);
  fs::remove(dir / "data" / "x1.csv");
  CHECK(run({"fit", "--config", cfg}) == 2);

  // Bad command line.
  CHECK(run({"fit"}) != 0);
  CHECK(run({}) != 0);
}
