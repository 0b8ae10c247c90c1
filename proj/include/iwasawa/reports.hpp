#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace iwasawa {

inline constexpr const char* kReportSchema = "iwasawa-report/1";
inline constexpr const char* kToolkitVersion = "1.0.0";
/// Environment variable naming the default configuration directory.
inline constexpr const char* kConfigDirEnv = "IWASAWA_CONFIG_DIR";

using Json = nlohmann::ordered_json;

inline const std::vector<std::string>& report_commands() {
  static const std::vector<std::string> names{"cchi",     "simplicity", "intertwine", "obstruction", "nilpotency",
                                              "nakayama", "bruhat",     "induce",     "duality",     "selftest"};
  return names;
}

/// Effective configuration of one run.  Character and matrix files are read
/// into the config so that reports depend only on their contents.
struct RunConfig {
  std::string command;
  int p = 3;
  int prec = 16;
  int trunc = 64;
  int level = 1;
  int k = 1;
  int ell = 1;
  std::vector<long> samples;
  int degree = 10;
  std::string mode = "char_p";
  std::string subgroup;
  std::vector<std::string> char_paths;
  std::vector<std::string> char_texts;
  std::string matrix_path;
  std::string matrix_text;
  std::string out;
  std::string config_dir;
  std::string defaults_file;
};

/// $IWASAWA_CONFIG_DIR, else $HOME/.config/iwasawa, else empty.
std::string default_config_dir();

/// Applies keys from <config_dir>/defaults.json to fields not in `explicit_keys`.
/// Unknown keys are an error.
void apply_defaults_file(RunConfig& cfg, const std::vector<std::string>& explicit_keys);

/// Reads --char and --matrix files, resolving relative paths that do not
/// exist against the config directory.  Throws std::runtime_error.
void load_inputs(RunConfig& cfg);

Json config_json(const RunConfig& cfg);

/// Inverse of config_json.  Throws std::runtime_error on missing or
/// mistyped fields.
RunConfig config_from_json(const Json& j);

/// Runs the command and returns the full report document.  Throws on
/// malformed input or guard violations.
Json run_command(const RunConfig& cfg);

/// Whether a completed report records a failure that should set a nonzero
/// status (only selftest criteria failures).
bool report_failed(const Json& report);

/// Canonical text of a report: two-space indented JSON and a final newline.
std::string render_report(const Json& report);

}  // namespace iwasawa
