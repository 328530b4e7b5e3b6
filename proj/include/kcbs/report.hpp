#pragma once

/// @file report.hpp
/// @brief Deterministic renderings of results: CSV tables, JSON documents,
/// and human-readable text blocks. Every output embeds a manifest naming the
/// tool version, subcommand, configuration, seed, and sibling outputs, and
/// contains no clocks or machine identity, so byte-identical reruns are a
/// testable guarantee.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "kcbs/montecarlo.hpp"
#include "kcbs/oracle.hpp"
#include "kcbs/pentagram.hpp"

namespace kcbs::report {

struct Manifest {
  std::string subcommand;
  std::string config_path;  ///< "(defaults)" when no file was given
  std::uint64_t seed = 0;
  bool has_seed = false;    ///< geometry and oracle runs draw nothing
  std::vector<std::string> outputs;
};

/// '#'-prefixed header lines for CSV and text files.
std::string manifest_header(const Manifest& m);
nlohmann::json manifest_json(const Manifest& m);

/// Per-stage detector probabilities and correlation terms, stages 1..5.
std::string correlations_csv(const montecarlo::PipelineResult& r, const Manifest& m);

/// Complete machine-readable record: config echo, raw counts, efficiency
/// fit, corrected probabilities, terms, epsilon, and the verdict.
nlohmann::json results_json(const montecarlo::PipelineResult& r,
                            const montecarlo::ExperimentConfig& cfg, const Manifest& m);

std::string pipeline_summary(const montecarlo::PipelineResult& r);

std::string ideal_text();
nlohmann::json ideal_json();

std::string geometry_text();
std::string geometry_directions_csv(const pentagram::Pentagram& p, const Manifest& m);
std::string geometry_overlaps_csv(const pentagram::Pentagram& p, const Manifest& m);

struct OracleReportData {
  std::array<double, 5> correlations{};
  double tolerance = 0.0;
  bool has_epsilon = false;
  double epsilon = 0.0;
  oracle::FeasibilityResult pentagon;
  oracle::FeasibilityResult extended;  ///< meaningful only when has_epsilon
};

std::string oracle_text(const OracleReportData& d);
nlohmann::json oracle_json(const OracleReportData& d, const Manifest& m);

}  // namespace kcbs::report
