#include "kcbs/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "kcbs/errors.hpp"

namespace kcbs::oracle {
namespace {

int sign_bit(std::uint32_t mask, int i) { return (mask >> i) & 1u ? 1 : -1; }

struct SimplexOutcome {
  bool feasible;
  std::vector<double> weights;  // vertex weights when feasible
};

/// Phase-one simplex deciding whether the query lies in the convex hull of
/// the vertices, with a +- tol band per coordinate. Bland's rule throughout,
/// so termination is guaranteed; the data are O(1) integers so the dense
/// tableau stays well conditioned.
SimplexOutcome hull_phase_one(const std::vector<std::vector<double>>& verts,
                              const std::vector<double>& query, double tol) {
  const std::size_t nv = verts.size();
  const std::size_t d = query.size();
  const std::size_t rows = 1 + 2 * d;
  const std::size_t n_real = nv + 2 * d;  // vertex weights + band slacks

  std::vector<std::vector<double>> t(rows, std::vector<double>(n_real, 0.0));
  std::vector<double> b(rows, 0.0);
  for (std::size_t k = 0; k < nv; ++k) t[0][k] = 1.0;  // total probability
  b[0] = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < nv; ++k) {
      t[1 + i][k] = verts[k][i];
      t[1 + d + i][k] = -verts[k][i];
    }
    t[1 + i][nv + i] = 1.0;
    b[1 + i] = query[i] + tol;
    t[1 + d + i][nv + d + i] = 1.0;
    b[1 + d + i] = tol - query[i];
  }

  double bmax = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (b[r] < 0.0) {
      b[r] = -b[r];
      for (auto& v : t[r]) v = -v;
    }
    bmax = std::max(bmax, b[r]);
  }

  // initial basis: a row's own slack if it kept coefficient +1, else a fresh
  // artificial column appended on the right
  std::vector<std::size_t> basis(rows);
  std::size_t ncols = n_real;
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t slack = n_real;  // row 0 has none
    if (r >= 1 && r <= d) slack = nv + (r - 1);
    if (r > d) slack = nv + d + (r - 1 - d);
    if (slack < n_real && t[r][slack] > 0.5) {
      basis[r] = slack;
    } else {
      for (std::size_t rr = 0; rr < rows; ++rr) t[rr].push_back(rr == r ? 1.0 : 0.0);
      basis[r] = ncols++;
    }
  }

  // objective row for min(sum of artificials), expressed over non-basics
  std::vector<double> z(ncols, 0.0);
  double zrhs = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (basis[r] >= n_real) {
      for (std::size_t j = 0; j < ncols; ++j) z[j] += t[r][j];
      zrhs += b[r];
    }
  }

  const double enter_eps = 1e-11;
  const double pivot_eps = 1e-11;
  for (long iter = 0; iter < 500000; ++iter) {
    std::size_t enter = ncols;
    for (std::size_t j = 0; j < n_real; ++j) {  // Bland: smallest eligible index
      if (z[j] > enter_eps) {
        enter = j;
        break;
      }
    }
    if (enter == ncols) break;

    std::size_t leave = rows;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows; ++r) {
      if (t[r][enter] > pivot_eps) {
        const double ratio = std::max(b[r], 0.0) / t[r][enter];
        if (ratio < best - 1e-15 ||
            (ratio < best + 1e-15 && (leave == rows || basis[r] < basis[leave]))) {
          best = ratio;
          leave = r;
        }
      }
    }
    if (leave == rows) {
      throw NumericalError("phase-one simplex lost boundedness, tableau corrupted");
    }

    const double piv = t[leave][enter];
    for (std::size_t j = 0; j < ncols; ++j) t[leave][j] /= piv;
    b[leave] /= piv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave) continue;
      const double f = t[r][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < ncols; ++j) t[r][j] -= f * t[leave][j];
      b[r] -= f * b[leave];
    }
    const double fz = z[enter];
    if (fz != 0.0) {
      for (std::size_t j = 0; j < ncols; ++j) z[j] -= fz * t[leave][j];
      zrhs -= fz * b[leave];
    }
    basis[leave] = enter;
    if (iter == 499999) {
      throw NumericalError("phase-one simplex exceeded its iteration budget");
    }
  }

  SimplexOutcome out;
  out.feasible = zrhs <= 1e-10 * (1.0 + bmax);
  if (out.feasible) {
    out.weights.assign(nv, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      if (basis[r] < nv) out.weights[basis[r]] = std::max(b[r], 0.0);
    }
    double sum = 0.0;
    for (double w : out.weights) sum += w;
    if (sum > 1e-9) {
      for (double& w : out.weights) w /= sum;
    }
  }
  return out;
}

std::string facet_text(const std::vector<double>& coeffs, double bound) {
  std::string s;
  char buf[48];
  bool first = true;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0.0) continue;
    std::snprintf(buf, sizeof(buf), "%sc%u", coeffs[i] > 0 ? "+" : "-",
                  static_cast<unsigned>(i + 1));
    if (!first) s += ' ';
    s += buf;
    first = false;
  }
  std::snprintf(buf, sizeof(buf), " <= %g", bound);
  s += buf;
  return s;
}

/// Fills the facet fields of an infeasible result with the most violated
/// facet of the cycle polytope (box facet or odd-signed cycle sum).
void attach_certificate(FeasibilityResult& res, const std::vector<double>& q) {
  const std::size_t n = q.size();
  double best_gap = -std::numeric_limits<double>::infinity();
  std::vector<double> best_coeffs;
  double best_bound = 0.0;
  double best_lhs = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    for (const double s : {1.0, -1.0}) {
      const double lhs = s * q[i];
      if (lhs - 1.0 > best_gap) {
        best_gap = lhs - 1.0;
        best_coeffs.assign(n, 0.0);
        best_coeffs[i] = s;
        best_bound = 1.0;
        best_lhs = lhs;
      }
    }
  }
  const std::uint32_t total = 1u << n;
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    if ((std::popcount(mask) & 1) == 0) continue;  // odd number of minus signs
    double lhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) lhs -= sign_bit(mask, static_cast<int>(i)) * q[i];
    // mask bits mark the minus positions: coefficient -1 where bit set
    const double bound = static_cast<double>(n) - 2.0;
    if (lhs - bound > best_gap) {
      best_gap = lhs - bound;
      best_coeffs.assign(n, 1.0);
      for (std::size_t i = 0; i < n; ++i) {
        if ((mask >> i) & 1u) best_coeffs[i] = -1.0;
      }
      best_bound = bound;
      best_lhs = lhs;
    }
  }

  if (best_gap > 0.0) {
    res.facet_coefficients = best_coeffs;
    res.facet_bound = best_bound;
    res.facet_lhs = best_lhs;
    res.facet_description = facet_text(best_coeffs, best_bound);
  } else {
    res.facet_description =
        "no facet violated beyond tolerance; query sits in the boundary sliver";
  }
}

FeasibilityResult decide(const std::vector<std::vector<double>>& verts,
                         const std::vector<double>& query, double tol) {
  if (tol < 0.0) {
    throw std::invalid_argument("feasibility tolerance must be nonnegative");
  }
  FeasibilityResult res;
  const SimplexOutcome s = hull_phase_one(verts, query, tol);
  res.feasible = s.feasible;
  if (s.feasible) {
    res.witness = s.weights;
  } else {
    attach_certificate(res, query);
  }
  return res;
}

}  // namespace

std::array<int, 5> pentagon_vertex(const std::array<int, 5>& a) {
  for (int v : a) {
    if (v != 1 && v != -1) throw std::invalid_argument("assignment values must be +1 or -1");
  }
  return {a[0] * a[1], a[1] * a[2], a[2] * a[3], a[3] * a[4], a[4] * a[0]};
}

std::array<int, 6> extended_vertex(const std::array<int, 6>& a) {
  for (int v : a) {
    if (v != 1 && v != -1) throw std::invalid_argument("assignment values must be +1 or -1");
  }
  // edges (1,2), (2,3), (3,4), (4,5), (5,1'), (1',1); a[5] is a1'
  return {a[0] * a[1], a[1] * a[2], a[2] * a[3], a[3] * a[4], a[4] * a[5], a[5] * a[0]};
}

std::vector<std::array<int, 5>> pentagon_assignments() {
  std::vector<std::array<int, 5>> all;
  all.reserve(32);
  for (std::uint32_t m = 0; m < 32; ++m) {
    all.push_back({sign_bit(m, 0), sign_bit(m, 1), sign_bit(m, 2), sign_bit(m, 3), sign_bit(m, 4)});
  }
  return all;
}

std::vector<std::array<int, 6>> extended_assignments() {
  std::vector<std::array<int, 6>> all;
  all.reserve(64);
  for (std::uint32_t m = 0; m < 64; ++m) {
    all.push_back({sign_bit(m, 0), sign_bit(m, 1), sign_bit(m, 2), sign_bit(m, 3), sign_bit(m, 4),
                   sign_bit(m, 5)});
  }
  return all;
}

PentagonScan scan_pentagon_sum() {
  PentagonScan scan;
  scan.minimum = 6;
  scan.maximum = -6;
  for (const auto& a : pentagon_assignments()) {
    const auto v = pentagon_vertex(a);
    int sum = 0;
    for (int e : v) sum += e;
    if (sum < scan.minimum) {
      scan.minimum = sum;
      scan.minimizers.clear();
    }
    if (sum == scan.minimum) scan.minimizers.push_back(a);
    if (sum > scan.maximum) {
      scan.maximum = sum;
      scan.maximizers.clear();
    }
    if (sum == scan.maximum) scan.maximizers.push_back(a);
  }
  return scan;
}

ExtendedScan scan_extended_sum(bool restrict_to_consistent) {
  ExtendedScan scan;
  scan.minimum = 7;
  for (const auto& a : extended_assignments()) {
    if (restrict_to_consistent && a[5] != a[0]) continue;
    const auto v = extended_vertex(a);
    // cycle sum over the five measured edges minus the drift edge
    const int sum = v[0] + v[1] + v[2] + v[3] + v[4] - v[5];
    if (sum < scan.minimum) {
      scan.minimum = sum;
      scan.minimizers.clear();
    }
    if (sum == scan.minimum) scan.minimizers.push_back(a);
  }
  return scan;
}

FeasibilityResult jpd_feasible(const std::array<double, 5>& correlations, double tolerance) {
  std::vector<std::vector<double>> verts;
  verts.reserve(32);
  for (const auto& a : pentagon_assignments()) {
    const auto v = pentagon_vertex(a);
    verts.emplace_back(v.begin(), v.end());
  }
  return decide(verts, std::vector<double>(correlations.begin(), correlations.end()), tolerance);
}

FeasibilityResult epsilon_adjusted_feasible(const std::array<double, 5>& correlations,
                                            double epsilon, double tolerance) {
  if (!std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be finite");
  }
  std::vector<std::vector<double>> verts;
  verts.reserve(64);
  for (const auto& a : extended_assignments()) {
    const auto v = extended_vertex(a);
    verts.emplace_back(v.begin(), v.end());
  }
  std::vector<double> query(correlations.begin(), correlations.end());
  query.push_back(1.0 - epsilon);  // measured drift pins the closing edge
  return decide(verts, query, tolerance);
}

bool cycle_facet_feasible(const std::vector<double>& query, double tolerance) {
  if (tolerance < 0.0) {
    throw std::invalid_argument("feasibility tolerance must be nonnegative");
  }
  const std::size_t n = query.size();
  if (n < 3 || n > 16) {
    throw std::invalid_argument("facet check expects a cycle of length 3..16");
  }
  for (double q : query) {
    if (std::abs(q) > 1.0 + tolerance) return false;
  }
  const std::uint32_t total = 1u << n;
  const double slack = static_cast<double>(n) * tolerance;  // L1 norm of the facet
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    if ((std::popcount(mask) & 1) == 0) continue;
    double lhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) lhs -= sign_bit(mask, static_cast<int>(i)) * query[i];
    if (lhs > static_cast<double>(n) - 2.0 + slack) return false;
  }
  return true;
}

}  // namespace kcbs::oracle
