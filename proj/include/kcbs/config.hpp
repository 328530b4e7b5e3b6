#pragma once

/// @file config.hpp
/// @brief Experiment configuration files.
///
/// Plain-text format with [section] headers and key = value lines; '#' and
/// ';' start comments. Sections and keys:
///
///   [experiment] photons_per_run, runs, rng_seed, detector_efficiency
///                (three values), pre_detector_loss, accidental_rate
///   [optics]     angle_preset (exact | nominal), dial_offsets (six values,
///                degrees), spatial_phase_error (radians)
///
/// Every key is optional and defaults to the ideal experiment. Unknown
/// sections or keys and malformed values are reported with file name and
/// line number; nothing is guessed.

#include <iosfwd>
#include <string>

#include "kcbs/montecarlo.hpp"

namespace kcbs::config {

/// @throws std::invalid_argument with "name:line: message" on bad input
montecarlo::ExperimentConfig parse_experiment_config(std::istream& in, const std::string& name);

/// @throws std::invalid_argument if the file cannot be opened or parsed
montecarlo::ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace kcbs::config
