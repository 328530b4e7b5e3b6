#include "kcbs/pentagram.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace kcbs::pentagram {

namespace {

using Vec3 = std::array<double, 3>;
using qutrit::Direction;

Vec3 to_vec(const Direction& d) { return d.components(); }

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
double vdot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double vnorm(const Vec3& a) { return std::sqrt(vdot(a, a)); }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Rodrigues rotation of v about unit axis u by angle rad.
Vec3 rotate(const Vec3& v, const Vec3& u, double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  const Vec3 uxv{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
  const double ud = vdot(u, v);
  Vec3 out;
  for (int i = 0; i < 3; ++i) out[i] = v[i] * c + uxv[i] * s + u[i] * ud * (1.0 - c);
  return out;
}

const double kA = std::sqrt((5.0 - std::sqrt(5.0)) / 10.0);
const double kC = std::pow(5.0, -0.25);

}  // namespace

Pentagram regular_pentagram() {
  const double step = 144.0 * std::numbers::pi / 180.0;
  std::array<Vec3, 5> dirs;
  dirs[0] = {kA, kA, kC};
  for (int i = 1; i < 5; ++i) {
    dirs[i] = rotate(dirs[i - 1], {0.0, 0.0, 1.0}, step);
  }
  return Pentagram{
      {Direction::normalized(dirs[0][0], dirs[0][1], dirs[0][2]),
       Direction::normalized(dirs[1][0], dirs[1][1], dirs[1][2]),
       Direction::normalized(dirs[2][0], dirs[2][1], dirs[2][2]),
       Direction::normalized(dirs[3][0], dirs[3][1], dirs[3][2]),
       Direction::normalized(dirs[4][0], dirs[4][1], dirs[4][2])},
      Direction(0.0, 0.0, 1.0),
      0.0};
}

qutrit::QutritState optimal_state() { return qutrit::QutritState(0.0, 0.0, 1.0); }

std::array<qutrit::Complex, 3> state_in_basis(const qutrit::QutritState& state, const Pentagram& p) {
  const Direction e3 = qutrit::cross(p.directions[0], p.directions[1]);
  const Direction* basis[3] = {&p.directions[0], &p.directions[1], &e3};
  std::array<qutrit::Complex, 3> out{};
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) out[static_cast<std::size_t>(k)] += (*basis[k])[i] * state[i];
  }
  return out;
}

double kcbs_value(const qutrit::QutritState& state, const Pentagram& p, double compat_tol) {
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) {
    sum += qutrit::pair_correlation(state, p.directions[static_cast<std::size_t>(i)],
                                    p.directions[static_cast<std::size_t>((i + 1) % 5)], compat_tol);
  }
  return sum;
}

ViolationResult max_quantum_violation(const Pentagram& p) {
  eig::Mat3 m{};
  for (const auto& d : p.directions) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] += d[i] * d[j];
  }
  const auto es = eig::eigen_symmetric_3x3(m);
  const auto& v = es.vectors[2];
  return ViolationResult{5.0 - 4.0 * es.values[2], es.values[2],
                         qutrit::QutritState(v[0], v[1], v[2])};
}

Pentagram perturbed_pentagram(double axis_tilt, const std::array<double, 5>& jitter) {
  const Pentagram reg = regular_pentagram();
  Vec3 axis = to_vec(reg.symmetry_axis);
  std::array<Vec3, 5> dirs;
  for (int i = 0; i < 5; ++i) dirs[static_cast<std::size_t>(i)] = to_vec(reg.directions[static_cast<std::size_t>(i)]);

  if (axis_tilt != 0.0) {
    const Vec3 x{1.0, 0.0, 0.0};
    axis = rotate(axis, x, axis_tilt);
    for (auto& d : dirs) d = rotate(d, x, axis_tilt);
  }

  // Jitter direction i along its azimuthal tangent around the axis. The
  // overlap with the axis shrinks by cos(j) regardless of the jitter sign.
  for (int i = 0; i < 5; ++i) {
    const double j = jitter[static_cast<std::size_t>(i)];
    if (j == 0.0) continue;
    Vec3& d = dirs[static_cast<std::size_t>(i)];
    Vec3 t = cross(axis, d);
    const double tn = vnorm(t);
    if (tn < 1e-12) {
      throw std::invalid_argument("perturbed_pentagram: direction parallel to axis, jitter plane undefined");
    }
    t = scale(t, 1.0 / tn);
    for (int k = 0; k < 3; ++k) d[k] = d[k] * std::cos(j) + t[k] * std::sin(j);
  }

  // One Gram-Schmidt pass around the cycle restores adjacent orthogonality
  // for pairs (1,2)..(4,5); the (5,1) pair is left as the closure residual.
  for (int i = 1; i < 5; ++i) {
    Vec3& d = dirs[static_cast<std::size_t>(i)];
    const Vec3& prev = dirs[static_cast<std::size_t>(i - 1)];
    const Vec3 proj = scale(prev, vdot(d, prev));
    Vec3 r = sub(d, proj);
    const double rn = vnorm(r);
    if (rn < 1e-6) {
      throw std::invalid_argument("perturbed_pentagram: jitter too large, re-orthogonalization failed");
    }
    d = scale(r, 1.0 / rn);
  }

  const double closure = std::abs(vdot(dirs[4], dirs[0]));
  return Pentagram{
      {Direction::normalized(dirs[0][0], dirs[0][1], dirs[0][2]),
       Direction::normalized(dirs[1][0], dirs[1][1], dirs[1][2]),
       Direction::normalized(dirs[2][0], dirs[2][1], dirs[2][2]),
       Direction::normalized(dirs[3][0], dirs[3][1], dirs[3][2]),
       Direction::normalized(dirs[4][0], dirs[4][1], dirs[4][2])},
      Direction::normalized(axis[0], axis[1], axis[2]),
      closure};
}

std::array<eig::Mat3, 5> stage_matrices() {
  // Two-mode blocks embedded as proper rotations: -1 on the untouched mode
  // keeps det = +1 without changing which mode carries which measurement.
  struct Embed {
    int a, b;
    double m00, m01, m10, m11;
  };
  const Embed blocks[4] = {
      {0, 1, -kAlpha, kBeta, kBeta, kAlpha},
      {0, 2, -kAlpha, kBeta, kBeta, kAlpha},
      {1, 2, -kAlpha, kBeta, kBeta, kAlpha},
      {0, 1, -kBeta, kAlpha, kAlpha, kBeta},
  };
  std::array<eig::Mat3, 5> out{};
  eig::Mat3 cur{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  out[0] = cur;
  for (int k = 0; k < 4; ++k) {
    const Embed& e = blocks[k];
    eig::Mat3 g{};
    for (int i = 0; i < 3; ++i) g[i][i] = -1.0;
    g[e.a][e.a] = e.m00;
    g[e.a][e.b] = e.m01;
    g[e.b][e.a] = e.m10;
    g[e.b][e.b] = e.m11;
    eig::Mat3 next{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        next[i][j] = g[i][0] * cur[0][j] + g[i][1] * cur[1][j] + g[i][2] * cur[2][j];
    cur = next;
    out[static_cast<std::size_t>(k + 1)] = cur;
  }
  return out;
}

std::string to_text(const Pentagram& p) {
  std::string out;
  char buf[128];
  for (const auto& d : p.directions) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", d[0], d[1], d[2]);
    out += buf;
  }
  return out;
}

Pentagram from_text(const std::string& text) {
  std::istringstream in(text);
  std::vector<Vec3> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    Vec3 v{};
    if (!(ls >> v[0] >> v[1] >> v[2])) {
      throw std::invalid_argument("pentagram text: expected three components per row");
    }
    std::string rest;
    if (ls >> rest) {
      throw std::invalid_argument("pentagram text: trailing content after three components");
    }
    rows.push_back(v);
  }
  if (rows.size() != 5) {
    throw std::invalid_argument("pentagram text: expected exactly five rows");
  }

  eig::Mat3 m{};
  for (const auto& d : rows)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] += d[i] * d[j];
  const auto es = eig::eigen_symmetric_3x3(m);
  Vec3 axis = es.vectors[2];
  Vec3 mean{};
  for (const auto& d : rows)
    for (int i = 0; i < 3; ++i) mean[i] += d[i];
  if (vdot(axis, mean) < 0.0) axis = scale(axis, -1.0);

  const double closure = std::abs(vdot(rows[4], rows[0]));
  return Pentagram{
      {Direction(rows[0][0], rows[0][1], rows[0][2]),
       Direction(rows[1][0], rows[1][1], rows[1][2]),
       Direction(rows[2][0], rows[2][1], rows[2][2]),
       Direction(rows[3][0], rows[3][1], rows[3][2]),
       Direction(rows[4][0], rows[4][1], rows[4][2])},
      Direction::normalized(axis[0], axis[1], axis[2]),
      closure};
}

}  // namespace kcbs::pentagram
