#pragma once

#include "djnmr/spectroscopy.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace djnmr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

enum class OutputFormat { Text, Csv, Json };

struct RunConfig {
  int hex_index = 0;
  StateKind state = StateKind::Thermal;
  Realization realization = Realization::CompiledSchedules;
  std::optional<std::filesystem::path> system_path;
  Acquisition acquisition;
  std::optional<double> linewidth_hz;
  std::filesystem::path out_dir = ".";
  OutputFormat format = OutputFormat::Csv;
};

// Keys: function, state, realization, system, dwell_us, points,
// linewidth_hz, out, format. Unknown keys are rejected.
RunConfig run_config_from_json(const std::string& text);

// System from an explicit path, else $DJ_NMR_SYSTEM, else the alanine preset.
SpinSystem resolve_system(const std::optional<std::filesystem::path>& path);

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify_table(std::ostream& out);
int cmd_synthesize(BinaryFunction f, OutputFormat format, std::ostream& out);
int cmd_schedule(const std::string& op, PiFraction angle, const SpinSystem& sys, const PulseOptions& opts,
                 OutputFormat format, std::ostream& out, std::ostream& err);
int cmd_classify_all(const SpinSystem& sys, const ExperimentConfig& cfg, std::ostream& out);

// Full command line, argv[0] included.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace djnmr::cli
