#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "kcbs/oracle.hpp"
#include "kcbs/rng.hpp"

using namespace kcbs;
using namespace kcbs::oracle;

namespace {

// the ideal five-term correlation vector, each term (1 - 2/sqrt5) - 2/sqrt5
std::array<double, 5> ideal_correlations() {
  const double t = 1.0 - 4.0 / std::sqrt(5.0);
  return {t, t, t, t, t};
}

double witness_reproduction_error(const FeasibilityResult& r,
                                  const std::array<double, 5>& query) {
  const auto assignments = pentagon_assignments();
  std::array<double, 5> acc{};
  for (std::size_t k = 0; k < assignments.size(); ++k) {
    const auto v = pentagon_vertex(assignments[k]);
    for (int i = 0; i < 5; ++i) acc[i] += r.witness[k] * v[i];
  }
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) worst = std::max(worst, std::abs(acc[i] - query[i]));
  return worst;
}

}  // namespace

TEST_CASE("vertices are products of adjacent assignments") {
  const auto v = pentagon_vertex({1, 1, 1, 1, 1});
  for (int e : v) CHECK(e == 1);
  const auto w = pentagon_vertex({1, -1, 1, -1, 1});
  CHECK(w[0] == -1);
  CHECK(w[1] == -1);
  CHECK(w[2] == -1);
  CHECK(w[3] == -1);
  CHECK(w[4] == 1);

  const auto x = extended_vertex({1, -1, 1, -1, 1, -1});
  // edges (1,2), (2,3), (3,4), (4,5), (5,1'), (1',1)
  CHECK(x[0] == -1);
  CHECK(x[3] == -1);
  CHECK(x[4] == -1);  // a5 * a1'
  CHECK(x[5] == -1);  // a1' * a1
}

TEST_CASE("assignment enumerations are complete and distinct") {
  const auto a5 = pentagon_assignments();
  CHECK(a5.size() == 32);
  std::set<std::array<int, 5>> s5(a5.begin(), a5.end());
  CHECK(s5.size() == 32);
  for (const auto& a : a5) {
    for (int v : a) CHECK(std::abs(v) == 1);
  }

  const auto a6 = extended_assignments();
  CHECK(a6.size() == 64);
  std::set<std::array<int, 6>> s6(a6.begin(), a6.end());
  CHECK(s6.size() == 64);
}

TEST_CASE("cycle sum scan finds the odd-cycle bound") {
  const PentagonScan scan = scan_pentagon_sum();
  CHECK(scan.minimum == -3);
  CHECK(scan.maximum == 5);
  // four of five edges can disagree, never five; ten ways times nothing else
  CHECK(scan.minimizers.size() == 10);
  CHECK(scan.maximizers.size() == 2);
  for (const auto& a : scan.minimizers) {
    const auto v = pentagon_vertex(a);
    int sum = 0;
    for (int e : v) sum += e;
    CHECK(sum == -3);
  }
}

TEST_CASE("drift-edge scan reaches minus four two ways") {
  const ExtendedScan scan = scan_extended_sum();
  CHECK(scan.minimum == -4);
  // ten consistent minimizers plus the two fully alternating chains
  CHECK(scan.minimizers.size() == 12);

  const ExtendedScan consistent = scan_extended_sum(true);
  CHECK(consistent.minimum == -4);
  CHECK(consistent.minimizers.size() == 10);
  for (const auto& a : consistent.minimizers) CHECK(a[5] == a[0]);
}

TEST_CASE("vertex queries are feasible with sharp witnesses") {
  const auto assignments = pentagon_assignments();
  for (const auto& a : assignments) {
    const auto v = pentagon_vertex(a);
    std::array<double, 5> q;
    for (int i = 0; i < 5; ++i) q[i] = v[i];
    const FeasibilityResult r = jpd_feasible(q);
    CHECK(r.feasible);
    REQUIRE(r.witness.size() == 32);
    CHECK(witness_reproduction_error(r, q) < 1e-7);
  }
}

TEST_CASE("interior and boundary points of the polytope are feasible") {
  const FeasibilityResult inside = jpd_feasible({-0.6, -0.6, -0.6, -0.6, -0.6});
  CHECK(inside.feasible);
  REQUIRE(inside.witness.size() == 32);
  double total = 0.0;
  for (double w : inside.witness) {
    CHECK(w >= -1e-9);
    total += w;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(witness_reproduction_error(inside, {-0.6, -0.6, -0.6, -0.6, -0.6}) < 1e-7);
  CHECK(inside.facet_description.empty());

  // sits exactly on the cycle facet c1+c2+c3 >= -3 restricted to three edges
  const FeasibilityResult boundary = jpd_feasible({-1.0, -1.0, -1.0, 0.0, 0.0});
  CHECK(boundary.feasible);
}

TEST_CASE("the quantum point is infeasible and certified by the full cycle facet") {
  const FeasibilityResult r = jpd_feasible(ideal_correlations());
  CHECK_FALSE(r.feasible);
  CHECK(r.witness.empty());
  CHECK(r.facet_description == "-c1 -c2 -c3 -c4 -c5 <= 3");
  CHECK(r.facet_bound == doctest::Approx(3.0));
  // sum of the ideal terms is 4 sqrt5 - 5 on the minus side
  CHECK(r.facet_lhs == doctest::Approx(4.0 * std::sqrt(5.0) - 5.0).epsilon(1e-12));
  CHECK(r.facet_lhs > r.facet_bound);
}

TEST_CASE("measured correlations from the coincidence table are infeasible") {
  const std::array<double, 5> measured{-0.805, -0.804, -0.709, -0.810, -0.766};
  const FeasibilityResult r = jpd_feasible(measured);
  CHECK_FALSE(r.feasible);
  CHECK(r.facet_description == "-c1 -c2 -c3 -c4 -c5 <= 3");
  CHECK(r.facet_lhs == doctest::Approx(3.894).epsilon(1e-12));
}

TEST_CASE("box violations are certified by a box facet") {
  const FeasibilityResult r = jpd_feasible({-1.2, 0.0, 0.0, 0.0, 0.0});
  CHECK_FALSE(r.feasible);
  CHECK(r.facet_description == "-c1 <= 1");
  CHECK(r.facet_lhs == doctest::Approx(1.2));
}

TEST_CASE("drift adjustment keeps the measured point infeasible for small epsilon") {
  const std::array<double, 5> measured{-0.805, -0.804, -0.709, -0.810, -0.766};
  const FeasibilityResult r = epsilon_adjusted_feasible(measured, 0.0815);
  CHECK_FALSE(r.feasible);
  CHECK(r.facet_description == "-c1 -c2 -c3 -c4 -c5 +c6 <= 4");
  // lhs = 3.894 + (1 - 0.0815)
  CHECK(r.facet_lhs == doctest::Approx(4.8125).epsilon(1e-12));

  // an enormous drift allowance absorbs the whole violation
  const FeasibilityResult loose = epsilon_adjusted_feasible(measured, 1.0);
  CHECK(loose.feasible);
  REQUIRE(loose.witness.size() == 64);
  double total = 0.0;
  for (double w : loose.witness) {
    CHECK(w >= -1e-9);
    total += w;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("zero drift reduces the extended oracle to the pentagon one") {
  const FeasibilityResult ext = epsilon_adjusted_feasible(ideal_correlations(), 0.0);
  CHECK_FALSE(ext.feasible);
  const FeasibilityResult ext_ok = epsilon_adjusted_feasible({-0.6, -0.6, -0.6, -0.6, -0.6}, 0.0);
  CHECK(ext_ok.feasible);
}

TEST_CASE("facet decision agrees with the simplex on random queries") {
  Rng rng(sub_seed(99, 1, 0));
  int disagreements = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    std::array<double, 5> q;
    for (auto& c : q) c = 2.0 * rng.uniform() - 1.0;
    const bool lp = jpd_feasible(q).feasible;
    const bool facet = cycle_facet_feasible({q[0], q[1], q[2], q[3], q[4]});
    if (lp != facet) ++disagreements;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("facet decision handles the six-edge cycle as well") {
  // the quantum point with the drift edge at its ideal value violates the odd cut
  const double t = 1.0 - 4.0 / std::sqrt(5.0);
  CHECK_FALSE(cycle_facet_feasible({t, t, t, t, t, 1.0}));
  CHECK(cycle_facet_feasible({-0.6, -0.6, -0.6, -0.6, -0.6, 1.0}));
  // near the boundary the tolerance widens the feasible side
  CHECK(cycle_facet_feasible({-1.0, -1.0, -1.0, -1.0, 1.0, 1.0}));
}

TEST_CASE("negative tolerances are rejected") {
  CHECK_THROWS_AS(jpd_feasible({0.0, 0.0, 0.0, 0.0, 0.0}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_adjusted_feasible({0.0, 0.0, 0.0, 0.0, 0.0}, 0.1, -1e-3),
                  std::invalid_argument);
  CHECK_THROWS_AS(cycle_facet_feasible({0.0, 0.0, 0.0, 0.0, 0.0}, -0.5), std::invalid_argument);
}

TEST_CASE("tolerance widens the acceptance band") {
  // facet lhs 3.0005 against bound 3: infeasible at 1e-9, feasible at 1e-3
  const std::array<double, 5> q{-1.0, -1.0, -1.0, -1.0, 0.9995};
  CHECK_FALSE(jpd_feasible(q, 1e-9).feasible);
  CHECK(jpd_feasible(q, 1e-3).feasible);
  CHECK_FALSE(cycle_facet_feasible({q[0], q[1], q[2], q[3], q[4]}, 1e-9));
  CHECK(cycle_facet_feasible({q[0], q[1], q[2], q[3], q[4]}, 1e-3));
}
