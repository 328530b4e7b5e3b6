#pragma once

/// @file qutrit.hpp
/// @brief Exact three-level (spin-1) state algebra.
///
/// Observables are dichotomic: A_d = 2*S_d^2 - 1 for a measurement direction d,
/// with outcome -1 exactly when the photon ends up in the mode associated with d.
/// Two observables are jointly measurable iff their directions are orthogonal,
/// in which case the -1 outcomes are mutually exclusive.

#include <array>
#include <complex>

namespace kcbs::qutrit {

using Complex = std::complex<double>;
using Amplitudes = std::array<Complex, 3>;

/// Norm slack accepted by state and direction constructors.
inline constexpr double kNormTolerance = 1e-12;

/// Default orthogonality gate for joint measurability.
inline constexpr double kCompatTolerance = 1e-9;

/// Dichotomic outcome of a direction observable.
enum class OutcomeValue : int { minus = -1, plus = +1 };

/// Real unit vector in R^3. Construction validates the Euclidean norm.
class Direction {
 public:
  /// @throws std::invalid_argument if |norm - 1| > kNormTolerance.
  Direction(double x, double y, double z);

  /// Scales (x, y, z) to unit length. @throws std::invalid_argument on near-zero input.
  static Direction normalized(double x, double y, double z);

  double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
  const std::array<double, 3>& components() const { return v_; }

 private:
  std::array<double, 3> v_;
};

double dot(const Direction& a, const Direction& b);

/// Normalized cross product. @throws std::invalid_argument for near-parallel inputs.
Direction cross(const Direction& a, const Direction& b);

/// Normalized pure state of the three-mode system.
/// States differing by a global phase are physically identical; no
/// canonical representative is enforced, comparisons go through probabilities.
class QutritState {
 public:
  /// @throws std::invalid_argument if |norm - 1| > kNormTolerance.
  explicit QutritState(const Amplitudes& a);
  QutritState(Complex c1, Complex c2, Complex c3);

  const Amplitudes& amplitudes() const { return a_; }
  Complex operator[](int i) const { return a_[static_cast<std::size_t>(i)]; }

 private:
  Amplitudes a_;
};

/// State with norm <= 1, produced by absorbing elements (mode blocks).
class SubnormalizedState {
 public:
  /// @throws std::invalid_argument if norm exceeds 1 + kNormTolerance.
  explicit SubnormalizedState(const Amplitudes& a);

  const Amplitudes& amplitudes() const { return a_; }
  double norm_squared() const;

 private:
  Amplitudes a_;
};

/// True iff the directions are orthogonal within tol, i.e. the observables
/// A_a and A_b are jointly measurable.
bool compatible(const Direction& a, const Direction& b, double tol = kCompatTolerance);

/// P(A_d = -1) = |<d|psi>|^2. The inner product conjugates the state side;
/// for real directions that convention is invisible. Result clamped to [0, 1].
double click_probability(const QutritState& state, const Direction& d);

/// <A_i A_j> = 1 - 2 P(A_i = -1) - 2 P(A_j = -1) for compatible directions;
/// the joint (-1, -1) outcome is structurally impossible, which is what
/// collapses the four-term expectation to this form.
/// @throws std::invalid_argument naming the overlap when |<d_i|d_j>| > tol.
double pair_correlation(const QutritState& state, const Direction& di, const Direction& dj,
                        double tol = kCompatTolerance);

/// Applies a 2x2 unitary block (row-major) to modes (mode_a, mode_b), identity
/// on the third mode. @throws std::invalid_argument if the block is not unitary
/// within 1e-10 or the mode indices are invalid.
QutritState two_mode_transform(const QutritState& state, int mode_a, int mode_b,
                               const std::array<Complex, 4>& block);

}  // namespace kcbs::qutrit
