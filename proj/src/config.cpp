#include "kcbs/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace kcbs::config {
namespace {

[[noreturn]] void fail(const std::string& name, int line, const std::string& msg) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), ":%d: ", line);
  throw std::invalid_argument(name + buf + msg);
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string strip_comment(const std::string& s) {
  const std::size_t pos = s.find_first_of("#;");
  return pos == std::string::npos ? s : s.substr(0, pos);
}

double parse_double(const std::string& name, int line, const std::string& key,
                    const std::string& tok) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    fail(name, line, "value of '" + key + "' is not a number: '" + tok + "'");
  }
  return v;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream iss(s);
  std::vector<std::string> toks;
  std::string t;
  while (iss >> t) toks.push_back(t);
  return toks;
}

std::int64_t parse_int(const std::string& name, int line, const std::string& key,
                       const std::string& tok) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0') {
    fail(name, line, "value of '" + key + "' is not an integer: '" + tok + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& name, int line, const std::string& key,
                         const std::string& tok) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0' || tok.front() == '-') {
    fail(name, line, "value of '" + key + "' is not an unsigned integer: '" + tok + "'");
  }
  return v;
}

}  // namespace

montecarlo::ExperimentConfig parse_experiment_config(std::istream& in, const std::string& name) {
  montecarlo::ExperimentConfig cfg;
  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(name, line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "experiment" && section != "optics") {
        fail(name, line, "unknown section '" + section + "'");
      }
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(name, line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(name, line, "empty key");
    if (value.empty()) fail(name, line, "empty value for '" + key + "'");
    if (section.empty()) fail(name, line, "key '" + key + "' appears before any section");

    if (section == "experiment") {
      if (key == "photons_per_run") {
        cfg.photons_per_run = static_cast<int>(parse_int(name, line, key, value));
      } else if (key == "runs") {
        cfg.runs = static_cast<int>(parse_int(name, line, key, value));
      } else if (key == "rng_seed") {
        cfg.rng_seed = parse_uint(name, line, key, value);
      } else if (key == "detector_efficiency") {
        const auto toks = split_ws(value);
        if (toks.size() != 3) fail(name, line, "detector_efficiency needs exactly three values");
        for (std::size_t i = 0; i < 3; ++i) {
          cfg.detector_efficiency[i] = parse_double(name, line, key, toks[i]);
        }
      } else if (key == "pre_detector_loss") {
        cfg.pre_detector_loss = parse_double(name, line, key, value);
      } else if (key == "accidental_rate") {
        cfg.accidental_rate = parse_double(name, line, key, value);
      } else {
        fail(name, line, "unknown key '" + key + "' in [experiment]");
      }
    } else {
      if (key == "angle_preset") {
        if (value != "exact" && value != "nominal") {
          fail(name, line, "angle_preset must be 'exact' or 'nominal'");
        }
        cfg.angle_preset = value;
      } else if (key == "dial_offsets") {
        const auto toks = split_ws(value);
        if (toks.size() != 6) fail(name, line, "dial_offsets needs exactly six values");
        for (std::size_t i = 0; i < 6; ++i) {
          cfg.dial_offsets[i] = parse_double(name, line, key, toks[i]);
        }
      } else if (key == "spatial_phase_error") {
        cfg.spatial_phase_error = parse_double(name, line, key, value);
      } else {
        fail(name, line, "unknown key '" + key + "' in [optics]");
      }
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(name + ": " + e.what());
  }
  return cfg;
}

montecarlo::ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open configuration file '" + path + "'");
  }
  return parse_experiment_config(in, path);
}

}  // namespace kcbs::config
