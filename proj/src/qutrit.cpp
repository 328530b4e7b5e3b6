#include "kcbs/qutrit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace kcbs::qutrit {

namespace {

std::string overlap_message(const char* what, double value) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s (value %.6e)", what, value);
  return buf;
}

}  // namespace

Direction::Direction(double x, double y, double z) : v_{x, y, z} {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (std::abs(n - 1.0) > kNormTolerance) {
    throw std::invalid_argument(overlap_message("direction is not unit length", n));
  }
}

Direction Direction::normalized(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (n < 1e-14) {
    throw std::invalid_argument("cannot normalize a near-zero vector");
  }
  return Direction(x / n, y / n, z / n);
}

double dot(const Direction& a, const Direction& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Direction cross(const Direction& a, const Direction& b) {
  const double x = a[1] * b[2] - a[2] * b[1];
  const double y = a[2] * b[0] - a[0] * b[2];
  const double z = a[0] * b[1] - a[1] * b[0];
  return Direction::normalized(x, y, z);
}

QutritState::QutritState(const Amplitudes& a) : a_(a) {
  const double n2 = std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]);
  if (std::abs(std::sqrt(n2) - 1.0) > kNormTolerance) {
    throw std::invalid_argument(overlap_message("state is not normalized", std::sqrt(n2)));
  }
}

QutritState::QutritState(Complex c1, Complex c2, Complex c3) : QutritState(Amplitudes{c1, c2, c3}) {}

SubnormalizedState::SubnormalizedState(const Amplitudes& a) : a_(a) {
  const double n2 = std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]);
  if (n2 > 1.0 + 10.0 * kNormTolerance) {
    throw std::invalid_argument(overlap_message("subnormalized state exceeds unit norm", std::sqrt(n2)));
  }
}

double SubnormalizedState::norm_squared() const {
  return std::norm(a_[0]) + std::norm(a_[1]) + std::norm(a_[2]);
}

bool compatible(const Direction& a, const Direction& b, double tol) {
  return std::abs(dot(a, b)) <= tol;
}

double click_probability(const QutritState& state, const Direction& d) {
  Complex ip = 0.0;
  for (int i = 0; i < 3; ++i) ip += d[i] * state[i];
  return std::clamp(std::norm(ip), 0.0, 1.0);
}

double pair_correlation(const QutritState& state, const Direction& di, const Direction& dj,
                        double tol) {
  const double overlap = dot(di, dj);
  if (std::abs(overlap) > tol) {
    throw std::invalid_argument(
        overlap_message("pair_correlation requires compatible directions; overlap too large", overlap));
  }
  return 1.0 - 2.0 * click_probability(state, di) - 2.0 * click_probability(state, dj);
}

QutritState two_mode_transform(const QutritState& state, int mode_a, int mode_b,
                               const std::array<Complex, 4>& block) {
  if (mode_a < 0 || mode_a > 2 || mode_b < 0 || mode_b > 2 || mode_a == mode_b) {
    throw std::invalid_argument("two_mode_transform: mode indices must be distinct and in 0..2");
  }
  // Unitarity: columns orthonormal.
  const Complex c00 = block[0], c01 = block[1], c10 = block[2], c11 = block[3];
  const double n0 = std::norm(c00) + std::norm(c10);
  const double n1 = std::norm(c01) + std::norm(c11);
  const Complex off = std::conj(c00) * c01 + std::conj(c10) * c11;
  if (std::abs(n0 - 1.0) > 1e-10 || std::abs(n1 - 1.0) > 1e-10 || std::abs(off) > 1e-10) {
    throw std::invalid_argument("two_mode_transform: block is not unitary within 1e-10");
  }
  Amplitudes a = state.amplitudes();
  const Complex va = a[static_cast<std::size_t>(mode_a)];
  const Complex vb = a[static_cast<std::size_t>(mode_b)];
  a[static_cast<std::size_t>(mode_a)] = c00 * va + c01 * vb;
  a[static_cast<std::size_t>(mode_b)] = c10 * va + c11 * vb;
  return QutritState(a);
}

}  // namespace kcbs::qutrit
