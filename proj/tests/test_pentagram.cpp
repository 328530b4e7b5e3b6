#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>

#include "kcbs/pentagram.hpp"
#include "kcbs/rng.hpp"

using namespace kcbs;
using namespace kcbs::pentagram;
using qutrit::Direction;
using qutrit::QutritState;

namespace {

const double kSqrt5 = std::sqrt(5.0);
const double kOptimum = 5.0 - 4.0 * kSqrt5;

QutritState random_real_state(Rng& rng) {
  double x = 2.0 * rng.uniform() - 1.0;
  double y = 2.0 * rng.uniform() - 1.0;
  double z = 2.0 * rng.uniform() - 1.0;
  const double n = std::sqrt(x * x + y * y + z * z);
  if (n < 1e-3) return QutritState(0.0, 0.0, 1.0);
  return QutritState(x / n, y / n, z / n);
}

}  // namespace

TEST_CASE("regular construction matches the closed form") {
  const Pentagram p = regular_pentagram();
  const double a = std::sqrt((5.0 - kSqrt5) / 10.0);
  const double c = std::pow(5.0, -0.25);
  CHECK(p.directions[0][0] == doctest::Approx(a).epsilon(1e-15));
  CHECK(p.directions[0][1] == doctest::Approx(a).epsilon(1e-15));
  CHECK(p.directions[0][2] == doctest::Approx(c).epsilon(1e-15));
  CHECK(p.symmetry_axis[2] == doctest::Approx(1.0));
  CHECK(p.closure_overlap == 0.0);
  // every direction sits on the same cone around the axis
  for (const auto& d : p.directions) {
    CHECK(dot(d, p.symmetry_axis) == doctest::Approx(c).epsilon(1e-14));
  }
}

TEST_CASE("adjacent pairs are orthogonal, next neighbors overlap by beta") {
  const Pentagram p = regular_pentagram();
  for (int i = 0; i < 5; ++i) {
    const double adj = dot(p.directions[i], p.directions[(i + 1) % 5]);
    CHECK(std::abs(adj) < 1e-12);
    const double next = dot(p.directions[i], p.directions[(i + 2) % 5]);
    CHECK(std::abs(next) == doctest::Approx(kBeta).epsilon(1e-13));
  }
  CHECK(kAlpha * kAlpha + kBeta * kBeta == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kBeta == doctest::Approx((kSqrt5 - 1.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("the axis state clicks with probability one over sqrt5 everywhere") {
  const Pentagram p = regular_pentagram();
  const QutritState psi = optimal_state();
  for (const auto& d : p.directions) {
    CHECK(qutrit::click_probability(psi, d) == doctest::Approx(1.0 / kSqrt5).epsilon(1e-14));
  }
}

TEST_CASE("correlation sum of the axis state reaches the quantum optimum") {
  const Pentagram p = regular_pentagram();
  CHECK(kcbs_value(optimal_state(), p) == doctest::Approx(kOptimum).epsilon(1e-14));
  CHECK(kcbs_value(optimal_state(), p) < -3.0);
}

TEST_CASE("correlation sum equals five minus four times the click mass") {
  const Pentagram p = regular_pentagram();
  Rng rng(55);
  for (int i = 0; i < 100; ++i) {
    const QutritState s = random_real_state(rng);
    double mass = 0.0;
    for (const auto& d : p.directions) mass += qutrit::click_probability(s, d);
    CHECK(kcbs_value(s, p) == doctest::Approx(5.0 - 4.0 * mass).epsilon(1e-12));
    // no state does better than the top eigenvector
    CHECK(kcbs_value(s, p) >= kOptimum - 1e-12);
  }
}

TEST_CASE("eigensolver route reproduces the optimum and the maximizer") {
  const ViolationResult v = max_quantum_violation(regular_pentagram());
  CHECK(std::abs(v.value - kOptimum) < 1e-9);
  CHECK(std::abs(v.lambda_max - kSqrt5) < 1e-12);
  // the maximizer is the symmetry axis up to sign
  CHECK(std::abs(std::abs(v.maximizer[2]) - 1.0) < 1e-9);
  CHECK(kcbs_value(v.maximizer, regular_pentagram()) == doctest::Approx(v.value).epsilon(1e-9));
}

TEST_CASE("state coordinates in the direction frame") {
  const Pentagram p = regular_pentagram();
  const auto coords = state_in_basis(optimal_state(), p);
  const double c = std::pow(5.0, -0.25);
  CHECK(coords[0].real() == doctest::Approx(c).epsilon(1e-13));
  CHECK(coords[1].real() == doctest::Approx(c).epsilon(1e-13));
  double n2 = 0.0;
  for (const auto& x : coords) n2 += std::norm(x);
  CHECK(n2 == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("rigid tilts preserve the attainable value") {
  const std::array<double, 5> no_jitter{};
  for (double tilt : {0.05, 0.3, 1.0}) {
    const Pentagram p = perturbed_pentagram(tilt, no_jitter);
    CHECK(p.closure_overlap < 1e-12);
    for (int i = 0; i < 5; ++i) {
      CHECK(std::abs(dot(p.directions[i], p.directions[(i + 1) % 5])) < 1e-12);
    }
    const ViolationResult v = max_quantum_violation(p);
    CHECK(std::abs(v.value - kOptimum) < 1e-9);
    // the maximizer follows the tilted axis
    CHECK(qutrit::click_probability(v.maximizer, p.symmetry_axis) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("zero perturbation reproduces the regular construction") {
  const Pentagram p = perturbed_pentagram(0.0, {});
  const Pentagram q = regular_pentagram();
  for (int i = 0; i < 5; ++i) {
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(p.directions[i][k] - q.directions[i][k]) < 1e-12);
    }
  }
  CHECK(p.closure_overlap < 1e-12);
}

TEST_CASE("jitter weakens the axis state and barely moves the attainable value") {
  const std::array<double, 5> jitter{0.01, 0.01, 0.01, 0.01, 0.01};
  const Pentagram p = perturbed_pentagram(0.0, jitter);
  // orthogonality is restored around the cycle except at the closure pair
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(dot(p.directions[i], p.directions[i + 1])) < 1e-10);
  }
  CHECK(p.closure_overlap == doctest::Approx(std::abs(dot(p.directions[4], p.directions[0]))));

  // the axis state no longer lines up with the jittered directions
  const double loose = std::max(1e-9, 2.0 * p.closure_overlap);
  CHECK(kcbs_value(optimal_state(), p, loose) > kOptimum);

  // first-order insensitivity of the extremal value
  const ViolationResult v = max_quantum_violation(p);
  CHECK(std::abs(v.value - kOptimum) < 0.01);
}

TEST_CASE("the closure residual is surfaced, not hidden") {
  const std::array<double, 5> jitter{0.05, -0.04, 0.03, 0.05, -0.02};
  const Pentagram p = perturbed_pentagram(0.0, jitter);
  CHECK(p.closure_overlap > 1e-6);
  // the residual fails the default compatibility gate but passes a loosened one
  CHECK_THROWS_AS(kcbs_value(optimal_state(), p), std::invalid_argument);
  CHECK_NOTHROW(kcbs_value(optimal_state(), p, 10.0 * p.closure_overlap));
}

TEST_CASE("a tilted figure is no longer maximized by the untilted axis state") {
  const Pentagram p = perturbed_pentagram(0.1, {});
  const double axis_state_value = kcbs_value(optimal_state(), p);
  const ViolationResult v = max_quantum_violation(p);
  CHECK(v.value < axis_state_value - 1e-6);
  CHECK(std::abs(v.value - kOptimum) < 1e-9);
}

TEST_CASE("stage transforms start at identity and chain with shared rows") {
  const auto mats = stage_matrices();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(mats[0][i][j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-15));
    }
  }
  CHECK(mats[1][0][0] == doctest::Approx(-kAlpha).epsilon(1e-13));
  CHECK(mats[1][0][1] == doctest::Approx(kBeta).epsilon(1e-13));
  CHECK(mats[1][0][2] == doctest::Approx(0.0));

  for (int k = 0; k < 5; ++k) {
    // each transform is orthogonal with determinant +1
    const auto& m = mats[k];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double d = 0.0;
        for (int t = 0; t < 3; ++t) d += m[i][t] * m[j][t];
        CHECK(d == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
      }
    }
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    CHECK(det == doctest::Approx(1.0).epsilon(1e-12));
  }

  for (int k = 0; k + 1 < 5; ++k) {
    // consecutive transforms share one row up to sign
    int shared = 0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double plus = 0.0;
        double minus = 0.0;
        for (int t = 0; t < 3; ++t) {
          plus = std::max(plus, std::abs(mats[k][i][t] - mats[k + 1][j][t]));
          minus = std::max(minus, std::abs(mats[k][i][t] + mats[k + 1][j][t]));
        }
        if (std::min(plus, minus) < 1e-10) ++shared;
      }
    }
    CHECK(shared == 1);
  }
}

TEST_CASE("text round trip preserves the geometry") {
  const Pentagram p = regular_pentagram();
  const std::string text = to_text(p);
  const Pentagram q = from_text(text);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(q.directions[i][j] == doctest::Approx(p.directions[i][j]).epsilon(1e-15));
    }
  }
  CHECK(std::abs(std::abs(dot(q.symmetry_axis, p.symmetry_axis)) - 1.0) < 1e-10);
  CHECK(q.closure_overlap < 1e-12);
}

TEST_CASE("malformed geometry text is rejected") {
  CHECK_THROWS_AS(from_text(""), std::invalid_argument);
  CHECK_THROWS_AS(from_text("1 0 0\n0 1 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(from_text("a b c\na b c\na b c\na b c\na b c\n"), std::invalid_argument);
}
