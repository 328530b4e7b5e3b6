#pragma once

/// @file oracle.hpp
/// @brief Classical oracles for the pentagon correlation polytope.
///
/// A deterministic noncontextual model assigns fixed values a_i in {-1, +1}
/// to the five observables; the achievable correlation vectors
/// (a1 a2, a2 a3, a3 a4, a4 a5, a5 a1) span a polytope whose minimum cycle
/// sum is -3. The extended oracle adds a sixth value a1' and the edge
/// (a1, a1'), which is how the drift-adjusted bound -3 - epsilon arises.
///
/// Feasibility questions are decided by a dense phase-one simplex over the
/// explicit vertex list; infeasibility certificates are produced separately
/// by scanning the known complete facet list of the cycle polytope (box
/// constraints plus odd-signed cycle sums bounded by n - 2).

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace kcbs::oracle {

/// Correlation vector of one deterministic assignment, pentagon edges
/// (1,2), (2,3), (3,4), (4,5), (5,1).
std::array<int, 5> pentagon_vertex(const std::array<int, 5>& assignment);

/// Extended correlation vector over edges (1,2), (2,3), (3,4), (4,5),
/// (5,1'), (1',1); the last entry is the drift edge a1' a1.
std::array<int, 6> extended_vertex(const std::array<int, 6>& assignment);

/// All 32 deterministic assignments of the five observables.
std::vector<std::array<int, 5>> pentagon_assignments();

/// All 64 deterministic assignments including the closing observable a1'.
std::vector<std::array<int, 6>> extended_assignments();

struct PentagonScan {
  int minimum;
  int maximum;
  std::vector<std::array<int, 5>> minimizers;  ///< assignments attaining the minimum
  std::vector<std::array<int, 5>> maximizers;
};

/// Exhaustive scan of the pentagon cycle sum over all 32 assignments.
PentagonScan scan_pentagon_sum();

struct ExtendedScan {
  int minimum;
  std::vector<std::array<int, 6>> minimizers;
};

/// Exhaustive scan of (a1 a2 + a2 a3 + a3 a4 + a4 a5 + a5 a1') - a1 a1'
/// over all 64 assignments, optionally restricted to a1' = a1.
ExtendedScan scan_extended_sum(bool restrict_to_consistent = false);

struct FeasibilityResult {
  bool feasible;
  /// Vertex weights of a joint distribution reproducing the query within
  /// tolerance (empty when infeasible). Indexed like the assignment lists.
  std::vector<double> witness;
  /// For infeasible queries: the most violated facet of the cycle polytope,
  /// as a human-readable inequality plus its raw data. Empty when feasible.
  std::string facet_description;
  std::vector<double> facet_coefficients;
  double facet_bound = 0.0;
  double facet_lhs = 0.0;
};

/// Does any joint probability distribution over the 32 assignments reproduce
/// the five pairwise correlations within +- tolerance per coordinate?
FeasibilityResult jpd_feasible(const std::array<double, 5>& correlations, double tolerance = 1e-9);

/// Same question for the six-edge cycle with the drift edge pinned to
/// 1 - epsilon (the value implied by the measured drift probabilities).
FeasibilityResult epsilon_adjusted_feasible(const std::array<double, 5>& correlations,
                                            double epsilon, double tolerance = 1e-9);

/// Independent decision procedure: checks the query against the complete
/// facet list of the cycle polytope directly (no linear programming).
/// Facet tolerance is scaled by the L1 norm of the facet coefficients, so
/// the two procedures can disagree only within a sliver of width ~tolerance
/// around the boundary.
bool cycle_facet_feasible(const std::vector<double>& query, double tolerance = 1e-9);

}  // namespace kcbs::oracle
