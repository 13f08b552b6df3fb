#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "realitygame/reality_map.hpp"

namespace rg {

enum class ExperimentKind {
  bias_dynamics,
  wealth_dynamics,
  subjective_distribution,
  rational_curve,
  inefficiency,
  table1,
};

std::string to_string(ExperimentKind kind);

// Resolved experiment description. Defaults match the smallest interesting
// setup: a 29-strategy uniform grid with equal wealth, 2000 tosses, one run.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::bias_dynamics;
  RealityMap map = RealityMap::self_defeating();
  bool has_map = false;
  std::string map_text;  // the map as it was spelled, echoed into the manifest
  double alpha = 0.0;    // arctan steepness; 0 when not applicable
  std::size_t n_players = 29;
  std::size_t horizon = 2000;
  std::size_t ensemble = 1;
  std::uint64_t seed = 0;
  std::size_t snapshot_stride = 100;
  bool epsilon_player = true;  // record the infinitesimal bettor's log return
  std::size_t fit_lo = 100;
  std::size_t fit_hi = 0;  // 0 means horizon / 10
};

// Flat `key = value` text with '#' comments. Keys: kind, map, alpha,
// n_players, horizon, ensemble, seed, snapshot_stride, fit_lo, fit_hi,
// epsilon_player. Unknown keys are rejected. ParseError carries line/column;
// ValidationError names the offending key.
ExperimentSpec parse_spec(const std::string& text, const std::string& origin = "<spec>");
ExperimentSpec load_spec(const std::string& path);

struct RunStatus {
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  bool aborted = false;
  std::string reason;
};

struct ExperimentOutputs {
  std::vector<std::string> files;  // file names inside out_dir; manifest.json last
  std::vector<RunStatus> runs;
};

// Runs the experiment and writes CSVs, SVGs and finally manifest.json into
// out_dir (created if missing); the manifest is the marker that the other
// files are complete. Data files are byte-identical across reruns and worker
// counts; wall-clock times live only in the manifest.
ExperimentOutputs run_experiment(const ExperimentSpec& spec, const std::string& out_dir,
                                 unsigned workers = 0);

}  // namespace rg
