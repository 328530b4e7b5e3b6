#include "kcbs/eigen3x3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kcbs::eig {

namespace {

using Vec3 = std::array<double, 3>;

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double matrix_scale(const Mat3& a) {
  double s = 0.0;
  for (const auto& row : a)
    for (double x : row) s = std::max(s, std::abs(x));
  return std::max(s, 1e-300);
}

std::array<double, 3> eigenvalues_closed_form(const Mat3& a) {
  const double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
  const double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
  if (p1 == 0.0) {
    std::array<double, 3> d{a[0][0], a[1][1], a[2][2]};
    std::sort(d.begin(), d.end());
    return d;
  }
  const double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) +
                    (a[2][2] - q) * (a[2][2] - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  Mat3 b{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b[i][j] = (a[i][j] - (i == j ? q : 0.0)) / p;
  const double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                      b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                      b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const double r = std::clamp(detb / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double two_pi_3 = 2.0 * std::numbers::pi / 3.0;
  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + two_pi_3);
  return {lo, 3.0 * q - hi - lo, hi};
}

/// Eigenvector from the null space of (A - lambda I): the two most
/// independent rows span the orthogonal complement.
Vec3 eigenvector_for(const Mat3& a, double lambda) {
  Mat3 m = a;
  for (int i = 0; i < 3; ++i) m[i][i] -= lambda;
  const Vec3 c01 = cross(m[0], m[1]);
  const Vec3 c02 = cross(m[0], m[2]);
  const Vec3 c12 = cross(m[1], m[2]);
  Vec3 best = c01;
  if (norm(c02) > norm(best)) best = c02;
  if (norm(c12) > norm(best)) best = c12;
  const double n = norm(best);
  if (n == 0.0) return {0.0, 0.0, 0.0};  // degenerate, caller falls back to Jacobi
  return {best[0] / n, best[1] / n, best[2] / n};
}

SymmetricEigen jacobi(Mat3 a) {
  Mat3 v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  const double scale = matrix_scale(a);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = std::sqrt(a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]);
    if (off <= 1e-15 * scale) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(a[p][q]) <= 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        Mat3 r{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
        r[p][p] = c; r[q][q] = c; r[p][q] = s; r[q][p] = -s;
        // a <- r^T a r, v <- v r
        Mat3 tmp{};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            tmp[i][j] = r[0][i] * a[0][j] + r[1][i] * a[1][j] + r[2][i] * a[2][j];
        Mat3 an{};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            an[i][j] = tmp[i][0] * r[0][j] + tmp[i][1] * r[1][j] + tmp[i][2] * r[2][j];
        a = an;
        Mat3 vn{};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            vn[i][j] = v[i][0] * r[0][j] + v[i][1] * r[1][j] + v[i][2] * r[2][j];
        v = vn;
      }
    }
  }
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a[i][i] < a[j][j]; });
  SymmetricEigen out{};
  for (int k = 0; k < 3; ++k) {
    out.values[k] = a[order[k]][order[k]];
    for (int i = 0; i < 3; ++i) out.vectors[k][i] = v[i][order[k]];
  }
  return out;
}

void fix_sign(Vec3& v) {
  int imax = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  if (v[imax] < 0.0)
    for (double& x : v) x = -x;
}

}  // namespace

SymmetricEigen eigen_symmetric_3x3(const Mat3& a) {
  const double scale = matrix_scale(a);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(a[i][j] - a[j][i]) > 1e-10 * scale) {
        throw std::invalid_argument("eigen_symmetric_3x3: matrix is not symmetric");
      }

  const auto vals = eigenvalues_closed_form(a);
  const double gap = std::min(vals[1] - vals[0], vals[2] - vals[1]);
  SymmetricEigen out{};
  if (gap < kDegenerateGap * scale) {
    out = jacobi(a);
  } else {
    out.values = vals;
    for (int k = 0; k < 3; ++k) {
      out.vectors[k] = eigenvector_for(a, vals[k]);
      if (norm(out.vectors[k]) < 0.5) {  // numerically rank-deficient, be safe
        out = jacobi(a);
        break;
      }
    }
  }
  for (auto& v : out.vectors) fix_sign(v);
  return out;
}

}  // namespace kcbs::eig
