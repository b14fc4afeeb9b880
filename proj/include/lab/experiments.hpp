#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lab {

// Command-line overrides; unset fields fall back to the config file, then to
// built-in defaults (seed 1, out/<experiment>, 1 thread).
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
};

struct ExpResult {
  bool pass = false;
  std::string name;
  std::string summary;  // one line per embedded check plus key numbers
  std::string out_dir;
};

// (name, one-line description) for every registered experiment.
std::vector<std::pair<std::string, std::string>> experiment_list();

// Runs the experiment named by the config's "experiment" field. Every check
// threshold has a built-in default (the acceptance value) that the config
// may override. Deterministic given (config, seed): CSV and SVG output are
// byte-identical across runs and thread counts. Throws ConfigError for
// malformed configs or unknown experiments.
ExpResult run_experiment_file(const std::string& config_path, const RunOptions& opt);
ExpResult run_experiment_text(const std::string& config_json, const RunOptions& opt);

}  // namespace lab
