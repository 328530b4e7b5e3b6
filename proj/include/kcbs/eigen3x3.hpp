#pragma once

/// @file eigen3x3.hpp
/// @brief Self-contained symmetric 3x3 eigensolver.
///
/// Eigenvalues come from the trigonometric solution of the characteristic
/// polynomial; eigenvectors from row cross products of (A - lambda I).
/// When the spectrum is nearly degenerate (adjacent gap below kDegenerateGap
/// relative to the matrix scale) the solver falls back to cyclic Jacobi
/// sweeps, which stay well conditioned there.

#include <array>

namespace kcbs::eig {

using Mat3 = std::array<std::array<double, 3>, 3>;

inline constexpr double kDegenerateGap = 1e-8;

struct SymmetricEigen {
  std::array<double, 3> values;                  ///< ascending
  std::array<std::array<double, 3>, 3> vectors;  ///< vectors[i] pairs with values[i], unit norm
};

/// @throws std::invalid_argument if the matrix is not symmetric within 1e-10.
SymmetricEigen eigen_symmetric_3x3(const Mat3& a);

}  // namespace kcbs::eig
