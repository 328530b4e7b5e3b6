#pragma once

/// @file optics.hpp
/// @brief Three-mode model of the measurement apparatus.
///
/// A single photon enters mode 1; two half-wave plates prepare the state,
/// then up to four two-mode transformations steer it so that at stage k the
/// three output modes carry the outcomes of the k-th compatible observable
/// pair. Blocking one of the prepared modes turns stage 5 into the two
/// consistency checks that calibrate how far the closing observable drifts
/// from the opening one.
///
/// Conventions fixed here (and relied on by the tests):
///  - Measurement plates act in the compensated gauge
///    E(t) = [[cos 2t, -sin 2t], [-sin 2t, -cos 2t]] (fixed sign flips are
///    absorbed by compensation plates and interferometer phase adjustment).
///    A plate whose dial sits exactly at its 0-degree off position is
///    calibrated out of the circuit entirely.
///  - The transformation pairs are (1,2), (1,3), (2,3), (1,2) in beam order.
///  - Detector wiring is constant across stages: mode 1 -> D2, mode 2 -> D3,
///    mode 3 -> D1 (reconstructed from the coincidence-table layout).

#include <array>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kcbs/qutrit.hpp"

namespace kcbs::optics {

/// Ordered pair of distinct mode indices (0-based).
struct ModePair {
  int a, b;
};

/// Ideal half-wave plate at angle degrees from the horizontal axis:
/// [[cos 2t, sin 2t], [sin 2t, -cos 2t]] on the mode pair.
struct HalfWavePlate {
  double angle_deg;
  ModePair pair;
};

/// Arbitrary real orthogonal 2x2 block (row-major), validated on use.
struct FixedBlock2x2 {
  std::array<double, 4> m;
  ModePair pair;
};

/// Absorbs (zeroes) the listed modes.
struct Block {
  std::array<bool, 3> modes;
};

/// Multiplies one mode's amplitude by exp(i * phase).
struct RelativePhase {
  double phase_rad;
  int mode;
};

using Element = std::variant<HalfWavePlate, FixedBlock2x2, Block, RelativePhase>;

struct OpticalCircuit {
  std::vector<Element> elements;
};

/// Row-major half-wave plate Jones matrix (involutory, determinant -1).
std::array<double, 4> hwp_matrix(double angle_deg);

/// Measurement plate in the compensated gauge (see file comment).
std::array<double, 4> plate_block(double angle_deg);

/// Dial angles in degrees for the two preparation plates and WP1..WP4.
/// exact() derives the dials from the closed-form block entries; nominal()
/// uses the published settings rounded to 0.1 degree (gap below 0.05 degree).
/// offsets are added to the dials, including plates whose preset dial is the
/// 0-degree off position (a misaligned idle plate still disturbs the beam).
struct AngleSet {
  double wp_a;
  double wp_b;
  std::array<double, 4> wp;       ///< active dials for WP1..WP4
  std::array<double, 6> offsets;  ///< wp_a, wp_b, wp1..wp4

  static AngleSet exact();
  static AngleSet nominal();
};

inline constexpr std::array<ModePair, 4> kTransformPairs{{{0, 1}, {0, 2}, {1, 2}, {0, 1}}};

/// mode index -> detector index (D1 = 0, D2 = 1, D3 = 2).
inline constexpr std::array<int, 3> kModeToDetector{1, 2, 0};

/// Stage circuit. Stages 1..5 measure the five observable pairs; stage 6 is
/// the stage-5 circuit with the first prepared mode blocked (conditioning on
/// A1 = +1), stage 7 blocks the other two modes (conditioning on A1 = -1).
/// Element order: preparation plates, block, relative phase on mode 3,
/// measurement plates in beam order.
/// @throws std::invalid_argument for stage outside 1..7.
OpticalCircuit build_stage(int stage, const AngleSet& angles = AngleSet::exact(),
                           double spatial_phase_error = 0.0);

struct PropagationResult {
  qutrit::Amplitudes amplitudes;
  double survival;  ///< squared norm of the final amplitudes
};

/// Applies the elements in order. Without Block elements the map is unitary
/// and survival stays 1 up to rounding.
/// @throws std::invalid_argument on a non-orthogonal FixedBlock2x2 or bad indices.
PropagationResult propagate(const qutrit::QutritState& input, const OpticalCircuit& circuit);

std::array<double, 3> mode_probabilities(const PropagationResult& r);

/// Landing probabilities of the stage circuit on the source state (1, 0, 0).
struct StageProbabilities {
  std::array<double, 3> by_mode;
  double survival;
};
StageProbabilities stage_mode_probabilities(int stage, const AngleSet& angles = AngleSet::exact(),
                                            double spatial_phase_error = 0.0);

enum class OutcomeLabel { first_minus, second_minus, both_plus };

/// Which outcome each mode (and each detector) carries at a measurement stage.
/// The three labels are always exactly {A_i = -1, A_j = -1, both +1}.
struct DetectorMap {
  int stage;
  std::pair<int, int> pair_indices;          ///< 1-based; 6 denotes the closing observable A1'
  std::array<OutcomeLabel, 3> by_mode;       ///< outcome carried by mode 1..3
  std::array<OutcomeLabel, 3> by_detector;   ///< outcome seen by D1..D3
  std::array<std::string, 3> condition_names;  ///< per detector, e.g. "P(A1=-1,A2=1)"

  static DetectorMap for_stage(int stage);   ///< stages 1..5
};

/// Observable name for 1-based index (6 -> "A1'").
std::string observable_name(int index);

enum class BlockChoice {
  a1_mode,      ///< block the mode that would click for A1 = -1
  other_modes,  ///< block the two complementary modes
};

struct BlockingResult {
  double survival;
  std::array<double, 3> conditional_by_mode;  ///< final mode probabilities / survival
  double p_aprime_minus;  ///< conditional probability of the A1' click mode
  double p_aprime_plus;   ///< complement (both other modes)
};

/// Conditionals of the blocked stage-5 circuit. With exact dials both
/// configurations are deterministic: blocking the A1 mode leaves zero
/// amplitude on the A1' mode, blocking the others concentrates all of it there.
/// @throws kcbs::NumericalError if nothing survives the block.
BlockingResult blocking_probabilities(BlockChoice which, const AngleSet& angles = AngleSet::exact(),
                                      double spatial_phase_error = 0.0);

struct EquivalenceReport {
  int stage;
  std::array<double, 3> circuit_by_mode;
  std::array<double, 3> predicted_by_mode;
  double max_abs_deviation;
  bool pass;
};

/// Compares the circuit's landing probabilities against the geometry-side
/// prediction (click probabilities of the optimal state on the pentagram
/// directions, routed through the stage's mode labels).
EquivalenceReport stage_equivalence_check(int stage, double tolerance,
                                          const AngleSet& angles = AngleSet::exact(),
                                          double spatial_phase_error = 0.0);

}  // namespace kcbs::optics
