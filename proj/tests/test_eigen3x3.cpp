#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "kcbs/eigen3x3.hpp"
#include "kcbs/rng.hpp"

using namespace kcbs;
using kcbs::eig::Mat3;

namespace {

// max |A v - lambda v| over all pairs plus orthonormality residual
double decomposition_residual(const Mat3& a, const eig::SymmetricEigen& e) {
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      double av = 0.0;
      for (int j = 0; j < 3; ++j) av += a[i][j] * e.vectors[k][j];
      worst = std::max(worst, std::abs(av - e.values[k] * e.vectors[k][i]));
    }
  }
  for (int k = 0; k < 3; ++k) {
    for (int l = k; l < 3; ++l) {
      double d = 0.0;
      for (int i = 0; i < 3; ++i) d += e.vectors[k][i] * e.vectors[l][i];
      worst = std::max(worst, std::abs(d - (k == l ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("diagonal matrices are returned sorted ascending") {
  const Mat3 a{{{3.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 2.0}}};
  const auto e = eig::eigen_symmetric_3x3(a);
  CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(e.values[2] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(std::abs(e.vectors[0][1]) == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors[1][2]) == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors[2][0]) == doctest::Approx(1.0));
}

TEST_CASE("a hand-solved 2+1 block matrix") {
  // block [[2,1],[1,2]] has eigenvalues 1 and 3
  const Mat3 a{{{2.0, 1.0, 0.0}, {1.0, 2.0, 0.0}, {0.0, 0.0, 5.0}}};
  const auto e = eig::eigen_symmetric_3x3(a);
  CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.values[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(e.values[2] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(decomposition_residual(a, e) < 1e-10);
}

TEST_CASE("degenerate spectra fall back to a well conditioned path") {
  // eigenvalues 1, 1, 4 along (1,1,1)/sqrt3
  Mat3 a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = (i == j ? 2.0 : 1.0);
  const auto e = eig::eigen_symmetric_3x3(a);
  CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.values[2] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(decomposition_residual(a, e) < 1e-10);

  const double s = 1.0 / std::sqrt(3.0);
  double overlap = 0.0;
  for (int i = 0; i < 3; ++i) overlap += e.vectors[2][i] * s;
  CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("nearly degenerate gaps stay accurate") {
  const Mat3 a{{{1.0, 1e-10, 0.0}, {1e-10, 1.0 + 1e-11, 0.0}, {0.0, 0.0, 2.0}}};
  const auto e = eig::eigen_symmetric_3x3(a);
  CHECK(decomposition_residual(a, e) < 1e-9);
  CHECK(e.values[2] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("random symmetric matrices decompose to tight residuals") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    Mat3 a;
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        a[i][j] = 4.0 * rng.uniform() - 2.0;
        a[j][i] = a[i][j];
      }
    }
    const auto e = eig::eigen_symmetric_3x3(a);
    CHECK(decomposition_residual(a, e) < 1e-9);
    CHECK(e.values[0] <= e.values[1]);
    CHECK(e.values[1] <= e.values[2]);
    // trace and sum of eigenvalues agree
    const double tr = a[0][0] + a[1][1] + a[2][2];
    CHECK(e.values[0] + e.values[1] + e.values[2] == doctest::Approx(tr).epsilon(1e-10));
  }
}

TEST_CASE("asymmetric input is rejected") {
  const Mat3 a{{{1.0, 0.5, 0.0}, {0.4, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
  CHECK_THROWS_AS(eig::eigen_symmetric_3x3(a), std::invalid_argument);
}

TEST_CASE("scaled matrices keep relative accuracy") {
  for (double scale : {1e-8, 1.0, 1e8}) {
    const Mat3 a{{{2.0 * scale, 1.0 * scale, 0.0},
                  {1.0 * scale, 2.0 * scale, 0.0},
                  {0.0, 0.0, 5.0 * scale}}};
    const auto e = eig::eigen_symmetric_3x3(a);
    CHECK(e.values[0] == doctest::Approx(1.0 * scale).epsilon(1e-10));
    CHECK(e.values[2] == doctest::Approx(5.0 * scale).epsilon(1e-10));
    CHECK(decomposition_residual(a, e) < 1e-9 * scale + 1e-12);
  }
}
