#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "invasion/coupling_driver.hpp"

namespace invasion {

/// One "key = value" per line, '#' starts a comment. Unknown or repeated keys,
/// bad values and violated invariants throw ConfigError with the line number.
SimConfig parse_config(std::string_view text);
/// Reads and parses a config file. A missing file throws IoError.
SimConfig load_config(const std::filesystem::path& path);
/// Inverse of parse_config; every key except an unset R_m is written.
std::string print_config(const SimConfig& config);

inline constexpr const char* kDiagnosticsHeader =
    "t,area,cancer_mass,ecm_mass,max_speed,newton_iters,cut_cells,suppressed_cells";

/// "x,y,c,v,phi" header, then one row per vertex in row-major order.
void write_fields(std::ostream& os, const MacroState& state, const LevelSetField& levelset);
void write_diagnostics_row(std::ostream& os, const Diagnostics& d);

std::filesystem::path fields_path(const std::filesystem::path& dir, int step);
std::filesystem::path interface_path(const std::filesystem::path& dir, int step);
std::filesystem::path diagnostics_path(const std::filesystem::path& dir);

/// Writes fields_{step}.csv and interface_{step}.txt into out_dir.
void write_snapshot(const MacroState& state, const LevelSetField& levelset,
                    const CutClassification& cuts, int step, const std::filesystem::path& out_dir);
/// Truncates diagnostics.csv to its header.
void start_diagnostics(const std::filesystem::path& out_dir);
void append_diagnostics(const std::filesystem::path& out_dir, const Diagnostics& d);

/// Reads a fields file back into a checkpoint at `step` (t = step * dT).
Checkpoint read_checkpoint(const std::filesystem::path& fields_file, const SimConfig& config,
                           int step);

struct OutputOptions {
  std::filesystem::path out_dir;
  /// Also dump samples, cell velocities and final micro profiles per step.
  bool debug = false;
};

/// Runs the configured simulation and writes the output tree.
RunSummary run_to_directory(const SimConfig& config, const OutputOptions& options);

/// Command-line entry; `args` excludes the program name. Exit codes: 0 done,
/// 2 usage or configuration error, 1 runtime abort. Errors go to `err` as one
/// line "error: <category>: <message>".
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace invasion
