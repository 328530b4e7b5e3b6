#pragma once

/// @file montecarlo.hpp
/// @brief Photon-counting simulation and the statistical pipeline that turns
/// raw clicks into correlation terms, the drift correction epsilon, and the
/// final inequality verdict.
///
/// Each heralded photon lands in one of the three output modes of the stage
/// circuit (or is absorbed by a block), then passes a common loss element and
/// its detector's quantum efficiency; surviving clicks can still be spoiled
/// by an accidental coincidence, which removes them from the singles counts.
/// Counts conserve photons exactly: clicks + no_click + double_click equals
/// the heralds.
///
/// Relative detector efficiencies are re-estimated from the counts themselves
/// by making the efficiency-corrected totals agree across stages, mirroring
/// how the real apparatus is calibrated, so the pipeline never peeks at the
/// configured truth.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kcbs/optics.hpp"

namespace kcbs::montecarlo {

struct ExperimentConfig {
  int photons_per_run = 3500;
  int runs = 20;
  std::uint64_t rng_seed = 20110707;
  std::array<double, 3> detector_efficiency{1.0, 1.0, 1.0};  ///< D1..D3, each in (0,1]
  double pre_detector_loss = 0.0;   ///< common loss before the detectors, [0,1)
  double accidental_rate = 0.0;    ///< chance a click is spoiled by a coincidence, [0,1)
  std::string angle_preset = "exact";  ///< "exact" or "nominal"
  std::array<double, 6> dial_offsets{};  ///< degrees: prep A, prep B, WP1..WP4
  double spatial_phase_error = 0.0;      ///< radians, on the third mode

  optics::AngleSet angle_set() const;
  /// @throws std::invalid_argument naming the offending field
  void validate() const;
};

/// Click totals of one run at one stage, by detector.
struct RunCounts {
  std::array<std::int64_t, 3> clicks{};
  std::int64_t no_click = 0;
  std::int64_t double_click = 0;
};

struct StageCounts {
  int stage = 0;
  int photons_per_run = 0;
  /// True when the stage circuit absorbs part of the beam (stages 6 and 7).
  /// Blocked stages have intrinsically smaller totals, so they carry no
  /// information about detector ratios via the equal-totals principle.
  bool blocked = false;
  std::vector<RunCounts> runs;
};

/// Simulates all runs of one stage. Runs are independent (seeded per run from
/// the stage seed), so they are farmed out across threads; the counts are
/// identical to the serial reference for any thread count.
StageCounts simulate_stage(int stage, const ExperimentConfig& cfg);

/// Serial reference implementation with the same per-run seeding.
StageCounts simulate_stage_reference(int stage, const ExperimentConfig& cfg);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct EfficiencyFit {
  std::array<double, 3> eta{};        ///< relative efficiencies, mean fixed to 1
  std::array<double, 3> std_error{};  ///< spread of per-run refits / sqrt(runs)
  std::vector<std::array<double, 3>> per_run;
};

/// Estimates relative detector efficiencies from pooled counts by minimizing
/// the across-stage variance of the corrected totals sum_d N(stage, d) / eta_d
/// (coordinate descent on two log-efficiencies; the third is fixed by the
/// mean-1 convention). Standard errors come from refitting each run alone.
/// Only flux-conserving stages enter the variance objective: a blocked stage
/// loses photons by design, so its raw total is not comparable and would bias
/// the fit. Blocked stages are still corrected with the fitted ratios.
/// @throws kcbs::NumericalError when the counts cannot identify the ratios
EfficiencyFit fit_relative_efficiencies(const std::vector<StageCounts>& stages);

/// Efficiency-corrected click shares: per run, clicks[d] / eta[d] normalized
/// over detectors. Values are means over runs; errors are SD / sqrt(runs).
struct CorrectedStage {
  int stage = 0;
  std::array<Estimate, 3> p_detector;
  std::vector<std::array<double, 3>> per_run;
};
/// @throws kcbs::NumericalError on a run with zero surviving clicks
CorrectedStage apply_efficiency(const StageCounts& counts, const std::array<double, 3>& eta);

struct CorrelationEstimate {
  int stage = 0;
  std::pair<int, int> pair_indices;  ///< 1-based, 6 = closing observable
  Estimate term;                     ///< P(both +1) - P(first -1) - P(second -1)
  std::vector<double> per_run;
};

/// The five pairwise terms from corrected stages 1..5 (order checked).
std::array<CorrelationEstimate, 5> estimate_correlations(
    const std::vector<CorrectedStage>& stages);

struct EpsilonEstimate {
  Estimate epsilon;
  Estimate p_minus_given_plus;  ///< P(A1' = -1 | A1 = +1), from stage 6
  Estimate p_plus_given_minus;  ///< P(A1' = +1 | A1 = -1), from stage 7
  Estimate p_a1_plus;           ///< P(A1 = +1), from stage 1
};

/// Drift correction epsilon = 2 [ P(A1'=-1|A1=+1) P(A1=+1)
///                              + P(A1'=+1|A1=-1) P(A1=-1) ],
/// with the error propagated from the three measured ingredients.
EpsilonEstimate estimate_epsilon(const CorrectedStage& blocked_plus,
                                 const CorrectedStage& blocked_minus,
                                 const CorrectedStage& stage1);

struct InequalityResult {
  double lhs = 0.0;
  double lhs_std_error = 0.0;
  double epsilon = 0.0;
  double epsilon_std_error = 0.0;
  double bound = 0.0;        ///< -3 - epsilon
  bool violated = false;     ///< lhs strictly below the bound
  double significance = 0.0; ///< (bound - lhs) / combined standard error
};

InequalityResult evaluate_inequality(const std::array<CorrelationEstimate, 5>& terms,
                                     const EpsilonEstimate& eps);

struct PipelineResult {
  std::vector<StageCounts> counts;        ///< stages 1..7
  EfficiencyFit efficiency;
  std::vector<CorrectedStage> corrected;  ///< stages 1..7
  std::array<CorrelationEstimate, 5> correlations;
  EpsilonEstimate epsilon;
  InequalityResult inequality;
};

/// Full pipeline: simulate stages 1..7, fit efficiencies, correct, estimate.
PipelineResult run_experiment(const ExperimentConfig& cfg);

/// Probability-level predictions of the configured optical model (detection
/// layer excluded); the values the sampled estimates converge to when the
/// detection layer is unbiased or corrected away.
double deterministic_lhs(const ExperimentConfig& cfg);
double deterministic_epsilon(const ExperimentConfig& cfg);

}  // namespace kcbs::montecarlo
