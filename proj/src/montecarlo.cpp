#include "kcbs/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "kcbs/errors.hpp"
#include "kcbs/rng.hpp"

namespace kcbs::montecarlo {
namespace {

struct StageSampling {
  std::array<double, 3> p_mode;
  std::array<double, 3> eta_by_detector;
  double loss;
  double accidental;
};

StageSampling sampling_context(int stage, const ExperimentConfig& cfg) {
  const optics::StageProbabilities p =
      optics::stage_mode_probabilities(stage, cfg.angle_set(), cfg.spatial_phase_error);
  return {p.by_mode, cfg.detector_efficiency, cfg.pre_detector_loss, cfg.accidental_rate};
}

// One run: every landed photon consumes exactly four uniforms (mode, loss,
// efficiency, accidental), an absorbed one exactly one, so the counts are a
// pure function of (seed, photons) independent of scheduling.
RunCounts simulate_run(const StageSampling& ctx, std::uint64_t seed, int photons) {
  Rng rng(seed);
  RunCounts rc;
  for (int t = 0; t < photons; ++t) {
    const double u = rng.uniform();
    int mode = -1;
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
      acc += ctx.p_mode[static_cast<std::size_t>(i)];
      if (u < acc) {
        mode = i;
        break;
      }
    }
    if (mode < 0) {  // absorbed by a block
      ++rc.no_click;
      continue;
    }
    if (rng.uniform() < ctx.loss) {
      ++rc.no_click;
      continue;
    }
    const int det = optics::kModeToDetector[static_cast<std::size_t>(mode)];
    if (rng.uniform() >= ctx.eta_by_detector[static_cast<std::size_t>(det)]) {
      ++rc.no_click;
      continue;
    }
    if (rng.uniform() < ctx.accidental) {
      ++rc.double_click;  // spoiled coincidence, excluded from singles
      continue;
    }
    ++rc.clicks[static_cast<std::size_t>(det)];
  }
  return rc;
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

// standard error of the mean: sample SD / sqrt(n); zero for a single run
double sem_of(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Across-stage variance of the corrected totals for a candidate efficiency
// pair (third fixed by the mean-1 convention). Outside the admissible region
// the value grows with the overshoot so a line search is pushed back inside.
double fit_objective(const std::vector<std::array<double, 3>>& pooled, double e1, double e2) {
  const double e3 = 3.0 - e1 - e2;
  if (e1 < 1e-9 || e2 < 1e-9 || e3 < 1e-9) {
    return 1e12 * (1.0 + std::abs(e1) + std::abs(e2));
  }
  const std::array<double, 3> eta{e1, e2, e3};
  double mean = 0.0;
  std::vector<double> totals(pooled.size());
  for (std::size_t s = 0; s < pooled.size(); ++s) {
    double tot = 0.0;
    for (std::size_t d = 0; d < 3; ++d) tot += pooled[s][d] / eta[d];
    totals[s] = tot;
    mean += tot;
  }
  mean /= static_cast<double>(totals.size());
  double var = 0.0;
  for (double tot : totals) var += (tot - mean) * (tot - mean);
  return var / static_cast<double>(totals.size());
}

double golden_minimize(const std::vector<std::array<double, 3>>& pooled, bool first_coord,
                       double fixed, double center) {
  const double inv_phi = 0.6180339887498949;
  double lo = center - 2.0;
  double hi = center + 2.0;
  auto eval = [&](double x) {
    const double e = std::exp(x);
    return first_coord ? fit_objective(pooled, e, std::exp(fixed))
                       : fit_objective(pooled, std::exp(fixed), e);
  };
  double m1 = hi - inv_phi * (hi - lo);
  double m2 = lo + inv_phi * (hi - lo);
  double f1 = eval(m1);
  double f2 = eval(m2);
  while (hi - lo > 1e-13) {
    if (f1 < f2) {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - inv_phi * (hi - lo);
      f1 = eval(m1);
    } else {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + inv_phi * (hi - lo);
      f2 = eval(m2);
    }
  }
  return 0.5 * (lo + hi);
}

std::array<double, 3> fit_eta_from_pooled(const std::vector<std::array<double, 3>>& pooled) {
  // identifiability: every detector must fire in at least two stages
  for (std::size_t d = 0; d < 3; ++d) {
    int live = 0;
    for (const auto& row : pooled) {
      if (row[d] > 0.0) ++live;
    }
    if (live < 2) {
      throw NumericalError(
          "relative efficiencies are not identifiable: a detector fired in fewer than two stages");
    }
  }
  double x1 = 0.0;
  double x2 = 0.0;
  for (int sweep = 0; sweep < 500; ++sweep) {
    const double nx1 = golden_minimize(pooled, true, x2, x1);
    const double nx2 = golden_minimize(pooled, false, nx1, x2);
    const double move = std::max(std::abs(nx1 - x1), std::abs(nx2 - x2));
    x1 = nx1;
    x2 = nx2;
    if (move < 1e-10) break;
  }
  const double e1 = std::exp(x1);
  const double e2 = std::exp(x2);
  return {e1, e2, 3.0 - e1 - e2};
}

StageCounts make_stage_counts(int stage, const ExperimentConfig& cfg) {
  cfg.validate();
  StageCounts sc;
  sc.stage = stage;
  sc.photons_per_run = cfg.photons_per_run;
  sc.blocked = stage >= 6;
  sc.runs.resize(static_cast<std::size_t>(cfg.runs));
  return sc;
}

}  // namespace

optics::AngleSet ExperimentConfig::angle_set() const {
  optics::AngleSet a =
      angle_preset == "nominal" ? optics::AngleSet::nominal() : optics::AngleSet::exact();
  a.offsets = dial_offsets;
  return a;
}

void ExperimentConfig::validate() const {
  require(photons_per_run >= 1, "photons_per_run must be at least 1");
  require(runs >= 1, "runs must be at least 1");
  for (double e : detector_efficiency) {
    require(e > 0.0 && e <= 1.0, "detector_efficiency entries must lie in (0, 1]");
  }
  require(pre_detector_loss >= 0.0 && pre_detector_loss < 1.0,
          "pre_detector_loss must lie in [0, 1)");
  require(accidental_rate >= 0.0 && accidental_rate < 1.0, "accidental_rate must lie in [0, 1)");
  require(angle_preset == "exact" || angle_preset == "nominal",
          "angle_preset must be 'exact' or 'nominal'");
  for (double o : dial_offsets) {
    require(std::isfinite(o) && std::abs(o) < 180.0,
            "dial_offsets must be finite and smaller than 180 degrees");
  }
  require(std::isfinite(spatial_phase_error) && std::abs(spatial_phase_error) <= 6.2831853072,
          "spatial_phase_error must be finite and at most one turn");
}

StageCounts simulate_stage(int stage, const ExperimentConfig& cfg) {
  StageCounts sc = make_stage_counts(stage, cfg);
  const StageSampling ctx = sampling_context(stage, cfg);
  const int runs = cfg.runs;
#pragma omp parallel for schedule(static)
  for (int r = 0; r < runs; ++r) {
    sc.runs[static_cast<std::size_t>(r)] =
        simulate_run(ctx, sub_seed(cfg.rng_seed, stage, r), cfg.photons_per_run);
  }
  return sc;
}

StageCounts simulate_stage_reference(int stage, const ExperimentConfig& cfg) {
  StageCounts sc = make_stage_counts(stage, cfg);
  const StageSampling ctx = sampling_context(stage, cfg);
  for (int r = 0; r < cfg.runs; ++r) {
    sc.runs[static_cast<std::size_t>(r)] =
        simulate_run(ctx, sub_seed(cfg.rng_seed, stage, r), cfg.photons_per_run);
  }
  return sc;
}

EfficiencyFit fit_relative_efficiencies(const std::vector<StageCounts>& stages) {
  std::vector<const StageCounts*> usable;
  for (const auto& s : stages) {
    if (!s.blocked) usable.push_back(&s);
  }
  // too little data is an identification failure, not a call-contract one
  if (usable.size() < 2) {
    throw NumericalError("efficiency fit needs at least two flux-conserving stages");
  }
  const std::size_t nruns = usable.front()->runs.size();
  for (const auto* s : usable) {
    require(s->runs.size() == nruns, "efficiency fit needs the same run count in every stage");
  }

  std::vector<std::array<double, 3>> pooled(usable.size(), {0.0, 0.0, 0.0});
  for (std::size_t s = 0; s < usable.size(); ++s) {
    for (const RunCounts& rc : usable[s]->runs) {
      for (std::size_t d = 0; d < 3; ++d) {
        pooled[s][d] += static_cast<double>(rc.clicks[d]);
      }
    }
  }

  EfficiencyFit fit;
  fit.eta = fit_eta_from_pooled(pooled);
  fit.per_run.resize(nruns);
  for (std::size_t r = 0; r < nruns; ++r) {
    std::vector<std::array<double, 3>> one(usable.size());
    for (std::size_t s = 0; s < usable.size(); ++s) {
      for (std::size_t d = 0; d < 3; ++d) {
        one[s][d] = static_cast<double>(usable[s]->runs[r].clicks[d]);
      }
    }
    fit.per_run[r] = fit_eta_from_pooled(one);
  }
  for (std::size_t d = 0; d < 3; ++d) {
    std::vector<double> xs(nruns);
    for (std::size_t r = 0; r < nruns; ++r) xs[r] = fit.per_run[r][d];
    fit.std_error[d] = sem_of(xs);
  }
  return fit;
}

CorrectedStage apply_efficiency(const StageCounts& counts, const std::array<double, 3>& eta) {
  for (double e : eta) require(e > 0.0, "efficiencies must be positive");
  CorrectedStage cs;
  cs.stage = counts.stage;
  cs.per_run.resize(counts.runs.size());
  for (std::size_t r = 0; r < counts.runs.size(); ++r) {
    double total = 0.0;
    std::array<double, 3> w{};
    for (std::size_t d = 0; d < 3; ++d) {
      w[d] = static_cast<double>(counts.runs[r].clicks[d]) / eta[d];
      total += w[d];
    }
    if (total <= 0.0) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "stage %d run %zu has no surviving clicks to normalize",
                    counts.stage, r + 1);
      throw NumericalError(buf);
    }
    for (std::size_t d = 0; d < 3; ++d) cs.per_run[r][d] = w[d] / total;
  }
  for (std::size_t d = 0; d < 3; ++d) {
    std::vector<double> xs(cs.per_run.size());
    for (std::size_t r = 0; r < xs.size(); ++r) xs[r] = cs.per_run[r][d];
    cs.p_detector[d] = {mean_of(xs), sem_of(xs)};
  }
  return cs;
}

std::array<CorrelationEstimate, 5> estimate_correlations(
    const std::vector<CorrectedStage>& stages) {
  std::array<CorrelationEstimate, 5> out;
  for (int s = 1; s <= 5; ++s) {
    const CorrectedStage* cs = nullptr;
    for (const auto& c : stages) {
      if (c.stage == s) {
        cs = &c;
        break;
      }
    }
    require(cs != nullptr, "correlation estimation needs corrected stages 1..5");
    const optics::DetectorMap map = optics::DetectorMap::for_stage(s);
    int d_first = -1;
    int d_second = -1;
    int d_both = -1;
    for (int d = 0; d < 3; ++d) {
      switch (map.by_detector[static_cast<std::size_t>(d)]) {
        case optics::OutcomeLabel::first_minus:
          d_first = d;
          break;
        case optics::OutcomeLabel::second_minus:
          d_second = d;
          break;
        case optics::OutcomeLabel::both_plus:
          d_both = d;
          break;
      }
    }
    CorrelationEstimate est;
    est.stage = s;
    est.pair_indices = map.pair_indices;
    est.per_run.resize(cs->per_run.size());
    for (std::size_t r = 0; r < cs->per_run.size(); ++r) {
      const auto& p = cs->per_run[r];
      est.per_run[r] = p[static_cast<std::size_t>(d_both)] - p[static_cast<std::size_t>(d_first)] -
                       p[static_cast<std::size_t>(d_second)];
    }
    est.term = {mean_of(est.per_run), sem_of(est.per_run)};
    out[static_cast<std::size_t>(s - 1)] = est;
  }
  return out;
}

EpsilonEstimate estimate_epsilon(const CorrectedStage& blocked_plus,
                                 const CorrectedStage& blocked_minus,
                                 const CorrectedStage& stage1) {
  require(blocked_plus.stage == 6, "first argument must be the stage-6 (blocked A1 mode) data");
  require(blocked_minus.stage == 7, "second argument must be the stage-7 (complement) data");
  require(stage1.stage == 1, "third argument must be the stage-1 data");
  const std::size_t nruns = stage1.per_run.size();
  require(blocked_plus.per_run.size() == nruns && blocked_minus.per_run.size() == nruns,
          "epsilon estimation needs the same run count in all three stages");

  // stage 5 layout: the A1' = -1 click lands on D2 (detector index 1);
  // stage 1 layout: the A1 = -1 click also lands on D2
  std::vector<double> c6(nruns);
  std::vector<double> c7(nruns);
  std::vector<double> m(nruns);
  for (std::size_t r = 0; r < nruns; ++r) {
    c6[r] = blocked_plus.per_run[r][1];
    c7[r] = blocked_minus.per_run[r][0] + blocked_minus.per_run[r][2];
    m[r] = 1.0 - stage1.per_run[r][1];
  }

  EpsilonEstimate e;
  e.p_minus_given_plus = {mean_of(c6), sem_of(c6)};
  e.p_plus_given_minus = {mean_of(c7), sem_of(c7)};
  e.p_a1_plus = {mean_of(m), sem_of(m)};

  const double mc6 = e.p_minus_given_plus.value;
  const double mc7 = e.p_plus_given_minus.value;
  const double mm = e.p_a1_plus.value;
  e.epsilon.value = 2.0 * (mc6 * mm + mc7 * (1.0 - mm));
  const double v = std::pow(2.0 * mm * e.p_minus_given_plus.std_error, 2) +
                   std::pow(2.0 * (1.0 - mm) * e.p_plus_given_minus.std_error, 2) +
                   std::pow(2.0 * (mc6 - mc7) * e.p_a1_plus.std_error, 2);
  e.epsilon.std_error = std::sqrt(v);
  return e;
}

InequalityResult evaluate_inequality(const std::array<CorrelationEstimate, 5>& terms,
                                     const EpsilonEstimate& eps) {
  InequalityResult r;
  double var = 0.0;
  for (const auto& t : terms) {
    r.lhs += t.term.value;
    var += t.term.std_error * t.term.std_error;
  }
  r.lhs_std_error = std::sqrt(var);
  r.epsilon = eps.epsilon.value;
  r.epsilon_std_error = eps.epsilon.std_error;
  r.bound = -3.0 - r.epsilon;
  r.violated = r.lhs < r.bound;
  const double denom = std::sqrt(var + r.epsilon_std_error * r.epsilon_std_error);
  if (denom > 0.0) {
    r.significance = (r.bound - r.lhs) / denom;
  } else {
    r.significance = r.violated ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return r;
}

PipelineResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  PipelineResult res;
  res.counts.reserve(7);
  for (int s = 1; s <= 7; ++s) res.counts.push_back(simulate_stage(s, cfg));
  res.efficiency = fit_relative_efficiencies(res.counts);
  res.corrected.reserve(7);
  for (const auto& sc : res.counts) res.corrected.push_back(apply_efficiency(sc, res.efficiency.eta));
  res.correlations = estimate_correlations(res.corrected);
  res.epsilon = estimate_epsilon(res.corrected[5], res.corrected[6], res.corrected[0]);
  res.inequality = evaluate_inequality(res.correlations, res.epsilon);
  return res;
}

double deterministic_lhs(const ExperimentConfig& cfg) {
  cfg.validate();
  double lhs = 0.0;
  for (int s = 1; s <= 5; ++s) {
    const auto p = optics::stage_mode_probabilities(s, cfg.angle_set(), cfg.spatial_phase_error);
    const optics::DetectorMap map = optics::DetectorMap::for_stage(s);
    double term = 0.0;
    for (std::size_t mode = 0; mode < 3; ++mode) {
      term += map.by_mode[mode] == optics::OutcomeLabel::both_plus ? p.by_mode[mode]
                                                                   : -p.by_mode[mode];
    }
    lhs += term;
  }
  return lhs;
}

double deterministic_epsilon(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto angles = cfg.angle_set();
  const auto b6 =
      optics::blocking_probabilities(optics::BlockChoice::a1_mode, angles, cfg.spatial_phase_error);
  const auto b7 = optics::blocking_probabilities(optics::BlockChoice::other_modes, angles,
                                                 cfg.spatial_phase_error);
  const auto s1 = optics::stage_mode_probabilities(1, angles, cfg.spatial_phase_error);
  const double m = 1.0 - s1.by_mode[0];  // stage 1: mode 1 carries A1 = -1
  return 2.0 * (b6.p_aprime_minus * m + b7.p_aprime_plus * (1.0 - m));
}

}  // namespace kcbs::montecarlo
