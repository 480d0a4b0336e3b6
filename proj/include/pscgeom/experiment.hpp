#pragma once

// Config-driven experiment runner.  One JSON config names one experiment;
// the runner validates it, dispatches to the library and renders a report.
//
//   {
//     "experiment": "torpedo",
//     "params": {"n": 4, "delta": 0.5, "lambda": 1},
//     "output": {"path": "torpedo.json", "format": "json"},
//     "grid": {"points": 4096},
//     "tolerance": {"flat": 1e-8, "non_negative": 1e-8},
//     "expect": {"verdict": "Positive", "values": {"/curvature/s_min": 24}}
//   }
//
// Without "expect" a run passes when the experiment's own verdict holds.
// With it, the run passes when every expectation holds; pointers are JSON
// pointers into the "result" object.
//
//   verdict, s_min, s_max    shorthand for /curvature/...
//   values {ptr: v}          equal (numbers within tol, relative to max(1,|v|))
//   max {ptr: v}, min {ptr: v}  one-sided bounds
//   tol                      default 1e-9

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pscgeom/curvature.hpp"
#include "pscgeom/report_io.hpp"

namespace pscgeom {

inline constexpr const char* kVersion = "0.1.0";

const std::vector<std::string>& experiment_names();

struct ExperimentConfig {
  std::string experiment;
  Json params = Json::object();
  std::optional<std::string> output_path;
  std::string format = "json";
  Grid1D grid1;
  Grid2D grid2;
  Tolerances tolerances;
  Json expect;  // null when absent
  std::filesystem::path base_dir;  // relative paths resolve against this
};

// Throws ConfigError naming the offending field.
ExperimentConfig parse_config(const Json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

struct ExperimentResult {
  bool passed = false;
  Json report;
  std::string csv;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Report text in the configured format; JSON ends with a newline.
std::string render(const ExperimentResult& result, const std::string& format);

// A profile in the serialized schema ({pieces: [...]}) or a builder spec
// {builder: transition|torpedo|rescale, ...}; optional "power" raises it.
Profile profile_from_spec(const Json& j, const std::string& field = "profile");

enum ExitCode : int { kExitPass = 0, kExitUsage = 1, kExitVerdict = 2 };

// Runs a config file, or every *.json in a directory (sorted by name).
// Reports go to `out_dir/<stem>.<format>` when out_dir is set, else to the
// config's output.path (relative to the config file), else to `out`.
// Diagnostics go to `err`.  Returns the worst exit code.
// Runs an in-memory config; `label` prefixes diagnostics.
int run_json(const Json& config, const std::filesystem::path& base_dir, const std::string& label,
             std::ostream& out, std::ostream& err);

int run_path(const std::filesystem::path& path,
             const std::optional<std::filesystem::path>& out_dir, std::ostream& out,
             std::ostream& err);

}  // namespace pscgeom
