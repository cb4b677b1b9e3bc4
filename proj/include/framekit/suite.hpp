#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "framekit/types.hpp"

namespace framekit {

// One named experiment, deterministic given the seed. Depths and tolerances
// are pinned per kind so that a run is comparable across machines; the
// config only exposes the knobs that are safe to sweep.
struct ExperimentConfig {
  std::string kind;
  std::string output_dir;  // empty: compute only, write no files
  std::uint64_t seed = 42;
  Index trials = 0;  // 0 picks the per-kind default (Monte Carlo counts)
};

struct ExperimentResult {
  std::string kind;
  bool pass = false;
  std::vector<std::string> lines;  // one check or observation per line
  std::map<std::string, double> metrics;
  std::vector<std::string> artifacts;  // files written when output_dir is set
};

// Registered kinds, in canonical run order.
const std::vector<std::string>& experimentKinds();

// Runs one experiment; unknown kinds and unwritable output directories
// throw InputError. Check failures are reported in the result, not thrown.
ExperimentResult runExperiment(const ExperimentConfig& config);

}  // namespace framekit
