#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "iwasawa/reports.hpp"

namespace {

using iwasawa::Json;
using iwasawa::RunConfig;

const char* kDescriptions[] = {
    "c invariant of a torus character and its classification",
    "closure probe for the ideal generated by omega powers",
    "solve for an intertwiner between two characters",
    "obstruction coefficients for the l-th difference",
    "nilpotency index of the augmentation ideal",
    "coinvariant rank of a regular module",
    "Bruhat cell census of GL2(Z/p^n)",
    "induced module, dual pairing and cell split",
    "exactness suite for a map of free modules",
    "run the acceptance checks",
};

void prepare(const CLI::App& app, RunConfig& cfg, const std::string& config_dir, const std::string& samples_text) {
  cfg.config_dir = config_dir.empty() ? iwasawa::default_config_dir() : config_dir;
  if (!samples_text.empty()) {
    cfg.samples.clear();
    for (const auto& tok : CLI::detail::split(samples_text, ',')) cfg.samples.push_back(std::stol(tok));
  }
  std::vector<std::string> explicit_keys;
  for (const char* key : {"p", "prec", "trunc", "level", "k", "ell", "samples", "degree", "mode", "subgroup"})
    if (app.count(std::string("--") + key) > 0) explicit_keys.emplace_back(key);
  iwasawa::apply_defaults_file(cfg, explicit_keys);
  iwasawa::load_inputs(cfg);
}

RunConfig replayed(const std::string& path, const std::string& command, const std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  RunConfig cfg = iwasawa::config_from_json(Json::parse(in).at("config"));
  if (cfg.command != command) throw std::runtime_error(path + " was produced by " + cfg.command);
  cfg.out = out;
  return cfg;
}

int emit(const RunConfig& cfg) {
  const Json report = iwasawa::run_command(cfg);
  const std::string text = iwasawa::render_report(report);
  const std::string summary = cfg.command + ": " + report.at("summary").get<std::string>() + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
    std::cerr << summary;
  } else {
    std::ofstream out(cfg.out, std::ios::binary);
    if (!(out << text)) throw std::runtime_error("cannot write " + cfg.out);
    std::cout << summary;
  }
  return iwasawa::report_failed(report) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iwasawa module experiments for torus characters of GL2(Z_p)", "iwasawa"};
  app.require_subcommand(1);
  app.set_version_flag("--version", iwasawa::kToolkitVersion);

  RunConfig cfg;
  std::string samples_text;
  std::string config_dir;
  std::string replay;

  app.add_option("--p", cfg.p, "prime")->check(CLI::PositiveNumber);
  app.add_option("--prec", cfg.prec, "p-adic precision in digits")->check(CLI::PositiveNumber);
  app.add_option("--trunc", cfg.trunc, "power series truncation degree")->check(CLI::PositiveNumber);
  app.add_option("--level", cfg.level, "level n of GL2(Z/p^n)")->check(CLI::PositiveNumber);
  app.add_option("--char", cfg.char_paths, "character file (repeat for two characters)");
  app.add_option("--k", cfg.k, "probe parameter k");
  app.add_option("--ell", cfg.ell, "probe or obstruction parameter l");
  app.add_option("--samples", samples_text, "comma-separated integers sampled by the probe");
  app.add_option("--degree", cfg.degree, "obstruction degree")->check(CLI::NonNegativeNumber);
  app.add_option("--mode", cfg.mode, "nilpotency mode: char_p or pi_containment");
  app.add_option("--subgroup", cfg.subgroup, "subgroup for nilpotency or nakayama");
  app.add_option("--matrix", cfg.matrix_path, "integer matrix file for duality");
  app.add_option("--out", cfg.out, "write the JSON report here instead of stdout");
  app.add_option("--replay", replay, "rerun the config embedded in an earlier report");
  app.add_option("--config-dir", config_dir,
                 std::string("configuration directory (default $") + iwasawa::kConfigDirEnv +
                     " or ~/.config/iwasawa)");

  const auto& names = iwasawa::report_commands();
  for (std::size_t i = 0; i < names.size(); ++i) app.add_subcommand(names[i], kDescriptions[i])->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (!replay.empty()) return emit(replayed(replay, cfg.command, cfg.out));
    prepare(app, cfg, config_dir, samples_text);
    return emit(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
