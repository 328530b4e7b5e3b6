#include "kcbs/report.hpp"

#include <cmath>
#include <cstdio>

#include "kcbs/version.hpp"

namespace kcbs::report {
namespace {

std::string fd(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, x);
  return buf;
}

std::string pair_name(const std::pair<int, int>& p) {
  return optics::observable_name(p.first) + optics::observable_name(p.second);
}

nlohmann::json estimate_json(const montecarlo::Estimate& e) {
  return {{"value", e.value}, {"std_error", e.std_error}};
}

nlohmann::json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

int witness_support(const std::vector<double>& w) {
  int n = 0;
  for (double x : w) {
    if (x > 1e-12) ++n;
  }
  return n;
}

nlohmann::json feasibility_json(const oracle::FeasibilityResult& r) {
  nlohmann::json j;
  j["feasible"] = r.feasible;
  if (r.feasible) {
    j["witness_support"] = witness_support(r.witness);
    j["witness"] = r.witness;
    j["facet"] = nullptr;
  } else {
    j["witness_support"] = 0;
    j["witness"] = nlohmann::json::array();
    j["facet"] = {{"description", r.facet_description},
                  {"coefficients", r.facet_coefficients},
                  {"bound", r.facet_bound},
                  {"lhs", r.facet_lhs}};
  }
  return j;
}

void append_feasibility_text(std::string& s, const char* label,
                             const oracle::FeasibilityResult& r, const std::string& extra) {
  s += label;
  if (r.feasible) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "FEASIBLE  (witness support %d of %zu assignments)%s\n",
                  witness_support(r.witness), r.witness.size(), extra.c_str());
    s += buf;
  } else {
    s += "INFEASIBLE";
    s += extra;
    s += "\n  separating facet   " + r.facet_description;
    s += "\n  facet lhs          " + fd("%.12g", r.facet_lhs) + "\n";
  }
}

}  // namespace

std::string manifest_header(const Manifest& m) {
  std::string s;
  s += "# tool = ";
  s += kToolName;
  s += ' ';
  s += kVersion;
  s += "\n# subcommand = " + m.subcommand + "\n";
  s += "# config = " + m.config_path + "\n";
  if (m.has_seed) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "# seed = %llu\n", static_cast<unsigned long long>(m.seed));
    s += buf;
  }
  if (!m.outputs.empty()) {
    s += "# outputs =";
    for (const auto& o : m.outputs) s += ' ' + o;
    s += '\n';
  }
  return s;
}

nlohmann::json manifest_json(const Manifest& m) {
  nlohmann::json j;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  j["subcommand"] = m.subcommand;
  j["config"] = m.config_path;
  if (m.has_seed) j["seed"] = m.seed;
  j["outputs"] = m.outputs;
  return j;
}

std::string correlations_csv(const montecarlo::PipelineResult& r, const Manifest& m) {
  std::string s = manifest_header(m);
  s += "stage,pair,d1_condition,d1_value,d1_std_error,d2_condition,d2_value,d2_std_error,"
       "d3_condition,d3_value,d3_std_error,term_value,term_std_error\n";
  for (const auto& est : r.correlations) {
    const optics::DetectorMap map = optics::DetectorMap::for_stage(est.stage);
    const montecarlo::CorrectedStage& cs = r.corrected[static_cast<std::size_t>(est.stage - 1)];
    char head[16];
    std::snprintf(head, sizeof(head), "%d,", est.stage);
    s += head;
    s += pair_name(est.pair_indices);
    for (std::size_t d = 0; d < 3; ++d) {
      s += ",\"" + map.condition_names[d] + "\"," + fd("%.12g", cs.p_detector[d].value) + ',' +
           fd("%.6g", cs.p_detector[d].std_error);
    }
    s += ',' + fd("%.12g", est.term.value) + ',' + fd("%.6g", est.term.std_error) + '\n';
  }
  return s;
}

nlohmann::json results_json(const montecarlo::PipelineResult& r,
                            const montecarlo::ExperimentConfig& cfg, const Manifest& m) {
  nlohmann::json j;
  j["manifest"] = manifest_json(m);
  j["config"] = {{"photons_per_run", cfg.photons_per_run},
                 {"runs", cfg.runs},
                 {"rng_seed", cfg.rng_seed},
                 {"detector_efficiency", cfg.detector_efficiency},
                 {"pre_detector_loss", cfg.pre_detector_loss},
                 {"accidental_rate", cfg.accidental_rate},
                 {"angle_preset", cfg.angle_preset},
                 {"dial_offsets", cfg.dial_offsets},
                 {"spatial_phase_error", cfg.spatial_phase_error}};
  j["stages"] = nlohmann::json::array();
  for (const auto& sc : r.counts) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& rc : sc.runs) {
      runs.push_back({{"clicks", rc.clicks},
                      {"no_click", rc.no_click},
                      {"double_click", rc.double_click}});
    }
    j["stages"].push_back({{"stage", sc.stage},
                           {"photons_per_run", sc.photons_per_run},
                           {"blocked", sc.blocked},
                           {"runs", runs}});
  }
  j["efficiency"] = {{"eta", r.efficiency.eta}, {"std_error", r.efficiency.std_error}};
  j["corrected"] = nlohmann::json::array();
  for (const auto& cs : r.corrected) {
    j["corrected"].push_back({{"stage", cs.stage},
                              {"p_detector",
                               {estimate_json(cs.p_detector[0]), estimate_json(cs.p_detector[1]),
                                estimate_json(cs.p_detector[2])}}});
  }
  j["terms"] = nlohmann::json::array();
  for (const auto& est : r.correlations) {
    j["terms"].push_back({{"stage", est.stage},
                          {"pair", pair_name(est.pair_indices)},
                          {"value", est.term.value},
                          {"std_error", est.term.std_error}});
  }
  j["epsilon"] = {{"value", r.epsilon.epsilon.value},
                  {"std_error", r.epsilon.epsilon.std_error},
                  {"p_minus_given_plus", estimate_json(r.epsilon.p_minus_given_plus)},
                  {"p_plus_given_minus", estimate_json(r.epsilon.p_plus_given_minus)},
                  {"p_a1_plus", estimate_json(r.epsilon.p_a1_plus)}};
  j["inequality"] = {{"lhs", r.inequality.lhs},
                     {"lhs_std_error", r.inequality.lhs_std_error},
                     {"epsilon", r.inequality.epsilon},
                     {"epsilon_std_error", r.inequality.epsilon_std_error},
                     {"bound", r.inequality.bound},
                     {"violated", r.inequality.violated},
                     {"significance", finite_or_null(r.inequality.significance)}};
  return j;
}

std::string pipeline_summary(const montecarlo::PipelineResult& r) {
  std::string s = "stage  pair    term            std error\n";
  for (const auto& est : r.correlations) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%5d  %-6s  %-14.9f  %.6f\n", est.stage,
                  pair_name(est.pair_indices).c_str(), est.term.value, est.term.std_error);
    s += buf;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "sum of terms    %-14.9f  %.6f\n", r.inequality.lhs,
                r.inequality.lhs_std_error);
  s += buf;
  std::snprintf(buf, sizeof(buf), "epsilon         %-14.9f  %.6f\n", r.inequality.epsilon,
                r.inequality.epsilon_std_error);
  s += buf;
  std::snprintf(buf, sizeof(buf), "bound           %.9f\n", r.inequality.bound);
  s += buf;
  std::snprintf(buf, sizeof(buf), "violated        %s\n", r.inequality.violated ? "yes" : "no");
  s += buf;
  if (std::isfinite(r.inequality.significance)) {
    std::snprintf(buf, sizeof(buf), "significance    %.2f\n", r.inequality.significance);
  } else {
    std::snprintf(buf, sizeof(buf), "significance    (exact)\n");
  }
  s += buf;
  std::snprintf(buf, sizeof(buf),
                "efficiency fit  %.6f %.6f %.6f  (std err %.6f %.6f %.6f)\n", r.efficiency.eta[0],
                r.efficiency.eta[1], r.efficiency.eta[2], r.efficiency.std_error[0],
                r.efficiency.std_error[1], r.efficiency.std_error[2]);
  s += buf;
  return s;
}

std::string ideal_text() {
  const pentagram::Pentagram p = pentagram::regular_pentagram();
  const pentagram::ViolationResult v = pentagram::max_quantum_violation(p);
  const auto amps = v.maximizer.amplitudes();
  std::string s;
  s += "quantum optimum        " + fd("%.16g", v.value) + "\n";
  s += "noncontextual bound    -3\n";
  s += "violation margin       " + fd("%.16g", -3.0 - v.value) + "\n";
  s += "largest eigenvalue     " + fd("%.16g", v.lambda_max) + "\n";
  s += "optimal state          " + fd("%.16g", amps[0].real()) + " " +
       fd("%.16g", amps[1].real()) + " " + fd("%.16g", amps[2].real()) + "\n";
  s += "click probability      " +
       fd("%.16g", qutrit::click_probability(v.maximizer, p.directions[0])) + "\n";
  return s;
}

nlohmann::json ideal_json() {
  const pentagram::Pentagram p = pentagram::regular_pentagram();
  const pentagram::ViolationResult v = pentagram::max_quantum_violation(p);
  const auto amps = v.maximizer.amplitudes();
  nlohmann::json j;
  j["quantum_optimum"] = v.value;
  j["noncontextual_bound"] = -3.0;
  j["violation_margin"] = -3.0 - v.value;
  j["lambda_max"] = v.lambda_max;
  j["optimal_state"] = {amps[0].real(), amps[1].real(), amps[2].real()};
  j["click_probability"] = qutrit::click_probability(v.maximizer, p.directions[0]);
  return j;
}

std::string geometry_text() {
  const pentagram::Pentagram p = pentagram::regular_pentagram();
  const qutrit::QutritState psi = pentagram::optimal_state();
  std::string s = "directions (rows l1..l5)\n";
  for (std::size_t i = 0; i < 5; ++i) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "  l%zu  % .16f % .16f % .16f\n", i + 1, p.directions[i][0],
                  p.directions[i][1], p.directions[i][2]);
    s += buf;
  }
  s += "overlaps l_i . l_j\n";
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = i + 1; j < 5; ++j) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "  l%zu.l%zu  % .16f\n", i + 1, j + 1,
                    qutrit::dot(p.directions[i], p.directions[j]));
      s += buf;
    }
  }
  const pentagram::ViolationResult v = pentagram::max_quantum_violation(p);
  s += "lambda_max             " + fd("%.16g", v.lambda_max) + "\n";
  s += "quantum optimum        " + fd("%.16g", v.value) + "\n";
  s += "click probability      " +
       fd("%.16g", qutrit::click_probability(psi, p.directions[0])) + "\n";
  return s;
}

std::string geometry_directions_csv(const pentagram::Pentagram& p, const Manifest& m) {
  std::string s = manifest_header(m);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "# closure_overlap = %.17g\n", p.closure_overlap);
  s += buf;
  s += "name,x,y,z\n";
  for (std::size_t i = 0; i < 5; ++i) {
    char row[160];
    std::snprintf(row, sizeof(row), "l%zu,%.17g,%.17g,%.17g\n", i + 1, p.directions[i][0],
                  p.directions[i][1], p.directions[i][2]);
    s += row;
  }
  char row[160];
  std::snprintf(row, sizeof(row), "axis,%.17g,%.17g,%.17g\n", p.symmetry_axis[0],
                p.symmetry_axis[1], p.symmetry_axis[2]);
  s += row;
  return s;
}

std::string geometry_overlaps_csv(const pentagram::Pentagram& p, const Manifest& m) {
  std::string s = manifest_header(m);
  s += "a,b,overlap\n";
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = i + 1; j < 5; ++j) {
      char row[96];
      std::snprintf(row, sizeof(row), "l%zu,l%zu,%.17g\n", i + 1, j + 1,
                    qutrit::dot(p.directions[i], p.directions[j]));
      s += row;
    }
  }
  return s;
}

std::string oracle_text(const OracleReportData& d) {
  std::string s = "query correlations   ";
  for (std::size_t i = 0; i < 5; ++i) {
    if (i) s += ' ';
    s += fd("%.12g", d.correlations[i]);
  }
  s += "\ntolerance            " + fd("%g", d.tolerance) + "\n";
  append_feasibility_text(s, "pentagon jpd         ", d.pentagon, "");
  if (d.has_epsilon) {
    const std::string extra =
        "  (epsilon " + fd("%.12g", d.epsilon) + ", drift edge " + fd("%.12g", 1.0 - d.epsilon) + ")";
    append_feasibility_text(s, "extended jpd         ", d.extended, extra);
  }
  return s;
}

nlohmann::json oracle_json(const OracleReportData& d, const Manifest& m) {
  nlohmann::json j;
  j["manifest"] = manifest_json(m);
  j["query"] = {{"correlations", d.correlations},
                {"tolerance", d.tolerance},
                {"epsilon", d.has_epsilon ? nlohmann::json(d.epsilon) : nlohmann::json(nullptr)}};
  j["pentagon"] = feasibility_json(d.pentagon);
  j["extended"] = d.has_epsilon ? feasibility_json(d.extended) : nlohmann::json(nullptr);
  return j;
}

}  // namespace kcbs::report
