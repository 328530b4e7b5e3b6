#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kcbs/config.hpp"
#include "kcbs/errors.hpp"
#include "kcbs/montecarlo.hpp"
#include "kcbs/oracle.hpp"
#include "kcbs/pentagram.hpp"
#include "kcbs/report.hpp"
#include "kcbs/version.hpp"

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("cannot open output file '" + path.string() + "'");
  }
  out << content;
  if (!out) {
    throw std::invalid_argument("failed writing output file '" + path.string() + "'");
  }
}

int run_ideal(const std::string& format) {
  if (format == "json") {
    nlohmann::json j = kcbs::report::ideal_json();
    kcbs::report::Manifest m;
    m.subcommand = "ideal";
    m.config_path = "(defaults)";
    j["manifest"] = kcbs::report::manifest_json(m);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << kcbs::report::ideal_text();
  }
  return 0;
}

int run_geometry(const std::string& format, const std::string& out_dir) {
  const kcbs::pentagram::Pentagram p = kcbs::pentagram::regular_pentagram();
  kcbs::report::Manifest m;
  m.subcommand = "geometry";
  m.config_path = "(defaults)";
  if (!out_dir.empty()) {
    m.outputs = {"geometry_directions.csv", "geometry_overlaps.csv", "pentagram.txt"};
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    write_file(dir / "geometry_directions.csv", kcbs::report::geometry_directions_csv(p, m));
    write_file(dir / "geometry_overlaps.csv", kcbs::report::geometry_overlaps_csv(p, m));
    write_file(dir / "pentagram.txt", kcbs::pentagram::to_text(p));
    std::cout << kcbs::report::geometry_text();
  } else if (format == "csv") {
    std::cout << kcbs::report::geometry_directions_csv(p, m) << '\n'
              << kcbs::report::geometry_overlaps_csv(p, m);
  } else {
    std::cout << kcbs::report::geometry_text();
  }
  return 0;
}

int run_simulate(const std::string& config_path, bool seed_given, std::uint64_t seed,
                 const std::string& out_dir) {
  kcbs::montecarlo::ExperimentConfig cfg;
  if (!config_path.empty()) {
    cfg = kcbs::config::load_experiment_config(config_path);
  }
  if (seed_given) cfg.rng_seed = seed;

  const kcbs::montecarlo::PipelineResult result = kcbs::montecarlo::run_experiment(cfg);

  kcbs::report::Manifest m;
  m.subcommand = "simulate";
  m.config_path = config_path.empty() ? "(defaults)" : config_path;
  m.seed = cfg.rng_seed;
  m.has_seed = true;
  m.outputs = {"results_a.csv", "results_b.json"};

  // render both documents before touching the filesystem so a failure
  // cannot leave one stale file next to one fresh file
  const std::string csv = kcbs::report::correlations_csv(result, m);
  const std::string json = kcbs::report::results_json(result, cfg, m).dump(2) + "\n";

  const fs::path dir(out_dir.empty() ? "." : out_dir);
  fs::create_directories(dir);
  write_file(dir / "results_a.csv", csv);
  write_file(dir / "results_b.json", json);

  std::cout << kcbs::report::pipeline_summary(result);
  return 0;
}

int run_oracle(const std::vector<double>& corr_arg, const std::string& from_path,
               bool eps_given, double eps_arg, double tol, const std::string& format) {
  kcbs::report::OracleReportData data;
  data.tolerance = tol;

  if (!from_path.empty()) {
    std::ifstream in(from_path);
    if (!in) {
      throw std::invalid_argument("cannot open results file '" + from_path + "'");
    }
    nlohmann::json j;
    try {
      in >> j;
      const auto& terms = j.at("terms");
      if (terms.size() != 5) {
        throw std::invalid_argument("results document must contain five terms");
      }
      for (std::size_t i = 0; i < 5; ++i) {
        data.correlations[i] = terms[i].at("value").get<double>();
      }
      data.epsilon = j.at("epsilon").at("value").get<double>();
      data.has_epsilon = true;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("'" + from_path + "' is not a results document: " + e.what());
    }
  } else {
    if (corr_arg.size() != 5) {
      throw std::invalid_argument("--correlations needs exactly five values");
    }
    for (std::size_t i = 0; i < 5; ++i) data.correlations[i] = corr_arg[i];
  }
  if (eps_given) {
    data.epsilon = eps_arg;
    data.has_epsilon = true;
  }

  data.pentagon = kcbs::oracle::jpd_feasible(data.correlations, tol);
  if (data.has_epsilon) {
    data.extended = kcbs::oracle::epsilon_adjusted_feasible(data.correlations, data.epsilon, tol);
  }

  if (format == "json") {
    kcbs::report::Manifest m;
    m.subcommand = "oracle";
    m.config_path = from_path.empty() ? "(defaults)" : from_path;
    std::cout << kcbs::report::oracle_json(data, m).dump(2) << '\n';
  } else {
    std::cout << kcbs::report::oracle_text(data);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pentagram contextuality experiment: exact values, geometry, "
               "counting simulation, and classical feasibility oracles"};
  app.require_subcommand(1);
  std::string version_line = std::string(kcbs::kToolName) + " " + kcbs::kVersion;
  app.set_version_flag("--version", version_line);

  auto* ideal = app.add_subcommand("ideal", "print the exact quantum predictions");
  std::string ideal_format = "text";
  ideal->add_option("--format", ideal_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* geometry = app.add_subcommand("geometry", "print or export the measurement geometry");
  std::string geometry_format = "text";
  std::string geometry_out;
  geometry->add_option("--format", geometry_format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}));
  geometry->add_option("--out", geometry_out, "directory for the geometry files");

  auto* simulate = app.add_subcommand("simulate", "run the counting experiment end to end");
  std::string sim_config;
  std::string sim_out;
  std::uint64_t sim_seed = 0;
  simulate->add_option("--config", sim_config, "experiment configuration file")
      ->check(CLI::ExistingFile);
  auto* seed_opt = simulate->add_option("--seed", sim_seed, "override the configured RNG seed");
  simulate->add_option("--out", sim_out, "directory for results_a.csv and results_b.json");

  auto* oracle = app.add_subcommand("oracle", "decide whether correlations admit a joint model");
  std::vector<double> oracle_corr;
  std::string oracle_from;
  double oracle_eps = 0.0;
  double oracle_tol = 1e-9;
  std::string oracle_format = "text";
  auto* corr_opt = oracle
                       ->add_option("--correlations", oracle_corr,
                                    "five pairwise correlations, comma separated")
                       ->delimiter(',')
                       ->expected(5);
  auto* from_opt =
      oracle->add_option("--from", oracle_from, "read correlations and epsilon from results_b.json")
          ->check(CLI::ExistingFile);
  auto* eps_opt = oracle->add_option("--epsilon", oracle_eps, "drift correction for the extended check");
  oracle->add_option("--tol", oracle_tol, "feasibility band half-width per coordinate")
      ->check(CLI::NonNegativeNumber);
  oracle->add_option("--format", oracle_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  corr_opt->excludes(from_opt);
  from_opt->excludes(corr_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // collapse the library's many parse-error codes onto the documented
    // contract: 0 for --help/--version, 1 for any invalid invocation
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(ideal)) {
      return run_ideal(ideal_format);
    }
    if (app.got_subcommand(geometry)) {
      return run_geometry(geometry_format, geometry_out);
    }
    if (app.got_subcommand(simulate)) {
      return run_simulate(sim_config, seed_opt->count() > 0, sim_seed, sim_out);
    }
    if (oracle_corr.empty() && oracle_from.empty()) {
      throw std::invalid_argument("oracle needs --correlations or --from");
    }
    return run_oracle(oracle_corr, oracle_from, eps_opt->count() > 0, oracle_eps, oracle_tol,
                      oracle_format);
  } catch (const kcbs::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected failure: " << e.what() << '\n';
    return 2;
  }
}
