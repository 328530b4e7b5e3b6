#include "kcbs/optics.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>

#include "kcbs/errors.hpp"
#include "kcbs/pentagram.hpp"

namespace kcbs::optics {
namespace {

constexpr double kPi = 3.14159265358979323846;

double deg_to_rad(double deg) { return deg * kPi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

void check_pair(const ModePair& p) {
  if (p.a < 0 || p.a > 2 || p.b < 0 || p.b > 2 || p.a == p.b) {
    throw std::invalid_argument("mode pair must hold two distinct indices in 0..2");
  }
}

// na = m00 a + m01 b applied in place on the pair's amplitudes
void apply_2x2(qutrit::Amplitudes& amps, const ModePair& p, const std::array<double, 4>& m) {
  const qutrit::Complex a = amps[static_cast<std::size_t>(p.a)];
  const qutrit::Complex b = amps[static_cast<std::size_t>(p.b)];
  amps[static_cast<std::size_t>(p.a)] = m[0] * a + m[1] * b;
  amps[static_cast<std::size_t>(p.b)] = m[2] * a + m[3] * b;
}

void check_orthogonal(const std::array<double, 4>& m) {
  const double c0 = m[0] * m[0] + m[2] * m[2];
  const double c1 = m[1] * m[1] + m[3] * m[3];
  const double x = m[0] * m[1] + m[2] * m[3];
  if (std::abs(c0 - 1.0) > 1e-10 || std::abs(c1 - 1.0) > 1e-10 || std::abs(x) > 1e-10) {
    throw std::invalid_argument("fixed 2x2 block is not orthogonal");
  }
}

// Dials that reproduce the closed-form plate blocks exactly (up to rounding).
double exact_wp_a_deg() {
  const double c = std::pow(5.0, -0.25);
  return rad_to_deg(-std::acos(c)) / 2.0;
}

double exact_wp_b_deg() {
  const double c = std::pow(5.0, -0.25);
  const double perp = std::sqrt(1.0 - 2.0 / std::sqrt(5.0));
  const double s = -std::sqrt(1.0 - c * c);  // sin of the first plate's doubled angle
  return rad_to_deg(std::atan2(c / s, perp / s)) / 2.0;
}

double exact_wp123_deg() {
  // plate_block(t) = [[-alpha, beta], [beta, alpha]]
  return rad_to_deg(std::atan2(-pentagram::kBeta, -pentagram::kAlpha)) / 2.0 + 180.0;
}

double exact_wp4_deg() {
  // plate_block(t) = [[-beta, alpha], [alpha, beta]]
  return rad_to_deg(std::atan2(-pentagram::kAlpha, -pentagram::kBeta)) / 2.0;
}

// Outcome carried by each mode, per measurement stage (rows: stages 1..5).
constexpr OutcomeLabel kF = OutcomeLabel::first_minus;
constexpr OutcomeLabel kS = OutcomeLabel::second_minus;
constexpr OutcomeLabel kB = OutcomeLabel::both_plus;
constexpr std::array<std::array<OutcomeLabel, 3>, 5> kModeOutcomes{{
    {kF, kB, kS},
    {kB, kS, kF},
    {kS, kF, kB},
    {kF, kB, kS},
    {kS, kB, kF},
}};

}  // namespace

std::array<double, 4> hwp_matrix(double angle_deg) {
  const double t = 2.0 * deg_to_rad(angle_deg);
  const double c = std::cos(t);
  const double s = std::sin(t);
  return {c, s, s, -c};
}

std::array<double, 4> plate_block(double angle_deg) {
  const double t = 2.0 * deg_to_rad(angle_deg);
  const double c = std::cos(t);
  const double s = std::sin(t);
  return {c, -s, -s, -c};
}

AngleSet AngleSet::exact() {
  AngleSet a;
  a.wp_a = exact_wp_a_deg();
  a.wp_b = exact_wp_b_deg();
  const double w = exact_wp123_deg();
  a.wp = {w, w, w, exact_wp4_deg()};
  a.offsets = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  return a;
}

AngleSet AngleSet::nominal() {
  AngleSet a;
  a.wp_a = -24.0;
  a.wp_b = -58.0;
  a.wp = {109.1, 109.1, 109.1, -64.1};
  a.offsets = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  return a;
}

OpticalCircuit build_stage(int stage, const AngleSet& angles, double spatial_phase_error) {
  if (stage < 1 || stage > 7) {
    throw std::invalid_argument("stage must be in 1..7");
  }
  OpticalCircuit c;
  c.elements.emplace_back(HalfWavePlate{angles.wp_a + angles.offsets[0], {0, 1}});
  c.elements.emplace_back(HalfWavePlate{angles.wp_b + angles.offsets[1], {1, 2}});
  if (stage == 6) {
    c.elements.emplace_back(Block{{true, false, false}});
  } else if (stage == 7) {
    c.elements.emplace_back(Block{{false, true, true}});
  }
  if (spatial_phase_error != 0.0) {
    c.elements.emplace_back(RelativePhase{spatial_phase_error, 2});
  }
  const int active = (stage >= 5 ? 5 : stage) - 1;
  for (int j = 0; j < 4; ++j) {
    const double off = angles.offsets[static_cast<std::size_t>(2 + j)];
    if (j < active) {
      const double dial = angles.wp[static_cast<std::size_t>(j)] + off;
      c.elements.emplace_back(FixedBlock2x2{plate_block(dial), kTransformPairs[static_cast<std::size_t>(j)]});
    } else if (off != 0.0) {
      // idle plate calibrated to its off position, but misaligned by `off`
      c.elements.emplace_back(FixedBlock2x2{plate_block(off), kTransformPairs[static_cast<std::size_t>(j)]});
    }
  }
  return c;
}

PropagationResult propagate(const qutrit::QutritState& input, const OpticalCircuit& circuit) {
  qutrit::Amplitudes amps = input.amplitudes();
  for (const Element& e : circuit.elements) {
    if (const auto* hwp = std::get_if<HalfWavePlate>(&e)) {
      check_pair(hwp->pair);
      apply_2x2(amps, hwp->pair, hwp_matrix(hwp->angle_deg));
    } else if (const auto* blk = std::get_if<FixedBlock2x2>(&e)) {
      check_pair(blk->pair);
      check_orthogonal(blk->m);
      apply_2x2(amps, blk->pair, blk->m);
    } else if (const auto* stop = std::get_if<Block>(&e)) {
      for (std::size_t i = 0; i < 3; ++i) {
        if (stop->modes[i]) amps[i] = 0.0;
      }
    } else {
      const auto& ph = std::get<RelativePhase>(e);
      if (ph.mode < 0 || ph.mode > 2) {
        throw std::invalid_argument("relative phase mode index out of range");
      }
      amps[static_cast<std::size_t>(ph.mode)] *= std::exp(qutrit::Complex(0.0, ph.phase_rad));
    }
  }
  double survival = 0.0;
  for (const auto& a : amps) survival += std::norm(a);
  return {amps, survival};
}

std::array<double, 3> mode_probabilities(const PropagationResult& r) {
  return {std::norm(r.amplitudes[0]), std::norm(r.amplitudes[1]), std::norm(r.amplitudes[2])};
}

StageProbabilities stage_mode_probabilities(int stage, const AngleSet& angles,
                                            double spatial_phase_error) {
  const qutrit::QutritState source(1.0, 0.0, 0.0);
  const PropagationResult r = propagate(source, build_stage(stage, angles, spatial_phase_error));
  return {mode_probabilities(r), r.survival};
}

std::string observable_name(int index) {
  if (index == 6) return "A1'";
  if (index < 1 || index > 5) {
    throw std::invalid_argument("observable index must be in 1..6");
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "A%d", index);
  return buf;
}

DetectorMap DetectorMap::for_stage(int stage) {
  if (stage < 1 || stage > 5) {
    throw std::invalid_argument("detector map exists for measurement stages 1..5 only");
  }
  DetectorMap m;
  m.stage = stage;
  m.pair_indices = {stage, stage == 5 ? 6 : stage + 1};
  m.by_mode = kModeOutcomes[static_cast<std::size_t>(stage - 1)];
  for (std::size_t mode = 0; mode < 3; ++mode) {
    m.by_detector[static_cast<std::size_t>(kModeToDetector[mode])] = m.by_mode[mode];
  }
  const std::string ni = observable_name(m.pair_indices.first);
  const std::string nj = observable_name(m.pair_indices.second);
  for (std::size_t d = 0; d < 3; ++d) {
    char buf[48];
    switch (m.by_detector[d]) {
      case OutcomeLabel::first_minus:
        std::snprintf(buf, sizeof(buf), "P(%s=-1,%s=1)", ni.c_str(), nj.c_str());
        break;
      case OutcomeLabel::second_minus:
        std::snprintf(buf, sizeof(buf), "P(%s=1,%s=-1)", ni.c_str(), nj.c_str());
        break;
      case OutcomeLabel::both_plus:
        std::snprintf(buf, sizeof(buf), "P(%s=1,%s=1)", ni.c_str(), nj.c_str());
        break;
    }
    m.condition_names[d] = buf;
  }
  return m;
}

BlockingResult blocking_probabilities(BlockChoice which, const AngleSet& angles,
                                      double spatial_phase_error) {
  const int stage = which == BlockChoice::a1_mode ? 6 : 7;
  const StageProbabilities p = stage_mode_probabilities(stage, angles, spatial_phase_error);
  if (p.survival <= 1e-30) {
    throw NumericalError("blocking removed all amplitude, conditional probabilities undefined");
  }
  BlockingResult r;
  r.survival = p.survival;
  for (std::size_t i = 0; i < 3; ++i) r.conditional_by_mode[i] = p.by_mode[i] / p.survival;
  // stage-5 layout: mode 1 carries the A1' = -1 outcome
  r.p_aprime_minus = r.conditional_by_mode[0];
  r.p_aprime_plus = r.conditional_by_mode[1] + r.conditional_by_mode[2];
  return r;
}

EquivalenceReport stage_equivalence_check(int stage, double tolerance, const AngleSet& angles,
                                          double spatial_phase_error) {
  const DetectorMap map = DetectorMap::for_stage(stage);
  const pentagram::Pentagram p = pentagram::regular_pentagram();
  const qutrit::QutritState psi = pentagram::optimal_state();
  const auto& di = p.directions[static_cast<std::size_t>(map.pair_indices.first - 1)];
  const int jdx = map.pair_indices.second == 6 ? 1 : map.pair_indices.second;
  const auto& dj = p.directions[static_cast<std::size_t>(jdx - 1)];
  const double pi = qutrit::click_probability(psi, di);
  const double pj = qutrit::click_probability(psi, dj);

  EquivalenceReport rep;
  rep.stage = stage;
  rep.circuit_by_mode = stage_mode_probabilities(stage, angles, spatial_phase_error).by_mode;
  for (std::size_t mode = 0; mode < 3; ++mode) {
    switch (map.by_mode[mode]) {
      case OutcomeLabel::first_minus:
        rep.predicted_by_mode[mode] = pi;
        break;
      case OutcomeLabel::second_minus:
        rep.predicted_by_mode[mode] = pj;
        break;
      case OutcomeLabel::both_plus:
        rep.predicted_by_mode[mode] = 1.0 - pi - pj;
        break;
    }
  }
  double dev = 0.0;
  for (std::size_t mode = 0; mode < 3; ++mode) {
    dev = std::max(dev, std::abs(rep.circuit_by_mode[mode] - rep.predicted_by_mode[mode]));
  }
  rep.max_abs_deviation = dev;
  rep.pass = dev <= tolerance;
  return rep;
}

}  // namespace kcbs::optics
