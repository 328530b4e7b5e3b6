#pragma once

/// @file pentagram.hpp
/// @brief Regular-pentagram measurement geometry and exact predictions.
///
/// Five unit directions l_1..l_5 on a cone around a symmetry axis, cyclically
/// adjacent pairs orthogonal, next neighbors overlapping by (sqrt5 - 1)/2.
/// A state on the axis clicks on each direction with probability 1/sqrt5,
/// which drives the five-term correlation sum down to 5 - 4*sqrt5.

#include <array>
#include <string>

#include "kcbs/eigen3x3.hpp"
#include "kcbs/qutrit.hpp"

namespace kcbs::pentagram {

/// Entries of the two-mode measurement blocks: alpha^2 + beta^2 = 1,
/// beta equals the next-neighbor overlap (sqrt5 - 1)/2, alpha = sqrt(beta).
inline const double kAlpha = 0.78615137775742328;  // sqrt((sqrt5 - 1) / 2)
inline const double kBeta = 0.61803398874989485;   // sqrt((3 - sqrt5) / 2)

struct Pentagram {
  std::array<qutrit::Direction, 5> directions;
  qutrit::Direction symmetry_axis;
  /// |l5 . l1| residual left by perturbed construction; 0 for the regular one.
  double closure_overlap;
};

/// The regular construction: l_1 = (a, a, c) with a^2 = (5 - sqrt5)/10,
/// c = 5^(-1/4), successive directions obtained by 144-degree rotations
/// about the z axis. Symmetry axis (0, 0, 1).
Pentagram regular_pentagram();

/// The maximally violating state: the symmetry axis itself, (0, 0, 1).
qutrit::QutritState optimal_state();

/// Coordinates of a state in the orthonormal frame (l1, l2, l1 x l2).
std::array<qutrit::Complex, 3> state_in_basis(const qutrit::QutritState& state, const Pentagram& p);

/// Sum of the five cyclic pair correlations; algebraically equal to
/// 5 - 4 * sum_i click_probability(state, l_i) because every direction
/// appears in exactly two adjacent pairs.
/// @param compat_tol orthogonality gate applied to every cyclic pair; pass a
///   looser value to evaluate perturbed geometries whose closure pair does
///   not meet the default gate.
/// @throws std::invalid_argument via pair_correlation if a pair fails the gate.
double kcbs_value(const qutrit::QutritState& state, const Pentagram& p,
                  double compat_tol = qutrit::kCompatTolerance);

struct ViolationResult {
  double value;                 ///< 5 - 4 * lambda_max
  double lambda_max;            ///< top eigenvalue of sum_i l_i l_i^T
  qutrit::QutritState maximizer;  ///< top eigenvector as a real state
};

/// Best attainable correlation sum for this geometry over all states:
/// minimizing 5 - 4 <psi| M |psi> with M = sum_i l_i l_i^T picks the top
/// eigenvector of M. For the regular pentagram lambda_max = sqrt5.
ViolationResult max_quantum_violation(const Pentagram& p);

/// Tilts the whole figure by axis_tilt radians about the x axis, then swings
/// each direction i by jitter[i] radians along its azimuthal tangent (the
/// unit vector axis x l_i), and finally re-imposes adjacent orthogonality by
/// one Gram-Schmidt pass around the cycle. The tangent swing multiplies the
/// direction's axis overlap by cos(jitter[i]), so any nonzero jitter strictly
/// loosens the cone; a uniform jitter is first-order equivalent to a rigid
/// rotation about the axis, so the attainable violation moves only at second
/// order. The (l5, l1) pair cannot be closed by the Gram-Schmidt pass; its
/// residual overlap is reported in closure_overlap rather than hidden.
/// @throws std::invalid_argument if a jittered direction collapses onto its
///   predecessor and cannot be re-orthogonalized.
Pentagram perturbed_pentagram(double axis_tilt, const std::array<double, 5>& jitter);

/// Mode-frame transforms of the five measurement stages: identity, then
/// cumulative products of the two-mode blocks (embedded with -1 on the
/// untouched mode so each factor is a proper rotation). Consecutive matrices
/// share one row up to sign; the remaining rows pair off with overlaps of
/// magnitude (sqrt5 - 1)/2.
std::array<eig::Mat3, 5> stage_matrices();

/// Five rows of three components, 17 significant digits (round-trip exact).
std::string to_text(const Pentagram& p);

/// Parses the to_text format. The symmetry axis is recovered as the top
/// eigenvector of sum_i l_i l_i^T; the closure overlap as |l5 . l1|.
/// @throws std::invalid_argument on malformed input.
Pentagram from_text(const std::string& text);

}  // namespace kcbs::pentagram
