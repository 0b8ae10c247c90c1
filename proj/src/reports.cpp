#include "iwasawa/reports.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "iwasawa/acceptance.hpp"
#include "iwasawa/duality_finite.hpp"
#include "iwasawa/finite_level.hpp"
#include "iwasawa/iwasawa_modules.hpp"
#include "iwasawa/padic_functions.hpp"

namespace iwasawa {

namespace fs = std::filesystem;

namespace {

constexpr long kClassifyBound = 100;
constexpr long kMaxRegularModule = 500;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path resolve(const std::string& path, const std::string& config_dir) {
  const fs::path given(path);
  if (fs::exists(given)) return given;
  if (given.is_relative() && !config_dir.empty() && fs::exists(fs::path(config_dir) / given))
    return fs::path(config_dir) / given;
  throw std::runtime_error("file not found: " + path);
}

PrecisionContext context_of(const RunConfig& cfg) { return PrecisionContext::make(cfg.p, cfg.prec, cfg.trunc); }

TorusCharacter character_at(const RunConfig& cfg, std::size_t i, const PrecisionContext& ctx) {
  if (i >= cfg.char_texts.size()) return TorusCharacter::trivial(ctx);
  return TorusCharacter::parse(cfg.char_texts[i], ctx);
}

Json padic_json(const PadicNumber& x) { return x.to_string(); }

Json series_json(const std::vector<PadicNumber>& c) {
  Json out = Json::array();
  for (const auto& x : c) out.push_back(padic_json(x));
  return out;
}

Json classification_json(const CClassification& c) {
  return Json{{"bound", c.bound},
              {"precision", c.precision},
              {"nonnegative", c.verdict()},
              {"nonpositive", c.negative_verdict()},
              {"ambiguous", c.ambiguous}};
}

Json cinvariant_json(const CInvariant& c) {
  return Json{{"c", padic_json(c.c)}, {"derivation_precision", c.derivation_precision}, {"verified_to", c.verified_to}};
}

Json divisor_json(const DistinguishedData& d) {
  Json out{{"weierstrass_degree", d.weierstrass_degree ? Json(*d.weierstrass_degree) : Json(nullptr)},
           {"distinguished_part", series_json(d.distinguished_part)},
           {"valid_mod_degree", d.valid_mod_degree}};
  if (!d.diagnostic.empty()) out["diagnostic"] = d.diagnostic;
  return out;
}

Json obstruction_json(const ObstructionReport& o) {
  Json fd = Json::array();
  for (const auto& x : o.finite_differences) fd.push_back(x.get_str());
  return Json{{"coefficients", series_json(o.coefficients)},
              {"finite_differences", fd},
              {"min_valuation", o.min_valuation == kInfiniteValuation ? Json("infinite") : Json(o.min_valuation)},
              {"vanishes", o.vanishes},
              {"first_nonzero", o.first_nonzero ? Json(*o.first_nonzero) : Json(nullptr)}};
}

Json element_json(const GL2ModElement& g) { return Json::array({g.a(), g.b(), g.c(), g.d()}); }

std::vector<PadicNumber> sample_units(const RunConfig& cfg, const PrecisionContext& ctx) {
  std::vector<PadicNumber> out;
  for (long a : cfg.samples) out.push_back(padic_int(ctx, a));
  return out;
}

Json run_cchi(const RunConfig& cfg, std::string& summary) {
  const auto ctx = context_of(cfg);
  const TorusCharacter chi = character_at(cfg, 0, ctx);
  const CInvariant c = c_of_chi(chi);
  const CClassification cl = classify_c(c, kClassifyBound);
  const ConductorReport cond = char_conductor(chi);
  summary = "c = " + c.c.to_string() + "; " + cl.verdict() + "; " + cl.negative_verdict() + "; conductor " +
            cond.to_string();
  return Json{{"character", chi.serialize()},
              {"primitive_root", primitive_root(ctx.p)},
              {"c_invariant", cinvariant_json(c)},
              {"classification", classification_json(cl)},
              {"twisted_c", padic_json(c_of_chi(w_twist(chi)).c)},
              {"conductor", cond.to_string()}};
}

Json run_simplicity(const RunConfig& cfg, std::string& summary) {
  const auto ctx = context_of(cfg);
  const TorusCharacter chi = character_at(cfg, 0, ctx);
  ProbeConfig pc;
  pc.k = cfg.k;
  pc.ell = cfg.ell;
  pc.torus_samples = sample_units(cfg, ctx);
  pc.classify_bound = kClassifyBound;
  const ProbeReport r = simplicity_probe(chi, pc);
  Json gens = Json::array();
  for (const auto& g : r.generations)
    gens.push_back(Json{{"generator_count", g.generator_count},
                        {"chain_degrees", g.chain_degrees},
                        {"verdict", to_string(g.verdict)},
                        {"carried_degree", g.carried_degree}});
  Json samples = Json::array();
  for (const auto& s : r.samples) samples.push_back(padic_json(s));
  summary = "probe verdict " + to_string(r.verdict) + "; " + r.classification.verdict();
  return Json{{"character", chi.serialize()},
              {"verdict", to_string(r.verdict)},
              {"divisor", r.divisor ? divisor_json(*r.divisor) : Json(nullptr)},
              {"generations", gens},
              {"samples", samples},
              {"c_invariant", cinvariant_json(r.c)},
              {"classification", classification_json(r.classification)},
              {"obstruction", obstruction_json(r.obstruction)},
              {"valid_mod_degree", r.valid_mod_degree},
              {"diagnostic", r.diagnostic}};
}

Json run_intertwine(const RunConfig& cfg, std::string& summary) {
  const auto ctx = context_of(cfg);
  const TorusCharacter source = character_at(cfg, 0, ctx);
  const TorusCharacter target = cfg.char_texts.size() > 1 ? character_at(cfg, 1, ctx) : source;
  const std::vector<long> samples = cfg.samples.empty() ? std::vector<long>{2, 3, 7} : cfg.samples;
  const IntertwinerReport r = intertwiner_solve(source, target, samples, 4, 50);
  Json residuals = Json::array();
  for (const auto& res : r.residuals)
    residuals.push_back(Json{{"a", res.a},
                             {"min_valuation", res.min_valuation == kInfiniteValuation ? Json("infinite")
                                                                                         : Json(res.min_valuation)},
                             {"exact_zero", res.exact_zero}});
  Json bounded = nullptr;
  if (r.boundedness)
    bounded = Json{{"bounded", r.boundedness->bounded}, {"evidence", r.boundedness->evidence}};
  summary = r.conclusion;
  return Json{{"source", source.serialize()},
              {"target", target.serialize()},
              {"central_match", r.central_match},
              {"c_source", cinvariant_json(r.c_source)},
              {"c_target", cinvariant_json(r.c_target)},
              {"stated_difference", padic_json(r.stated_difference)},
              {"exponent_difference", padic_json(r.exponent_difference)},
              {"classification", classification_json(r.classification)},
              {"log_power", r.log_power ? Json(*r.log_power) : Json(nullptr)},
              {"residuals", residuals},
              {"residuals_vanish", r.residuals_vanish},
              {"boundedness", bounded},
              {"nonzero_intertwiner", r.nonzero_intertwiner},
              {"conclusion", r.conclusion},
              {"cross_cell", r.cross_cell},
              {"valid_mod_degree", r.valid_mod_degree}};
}

Json run_obstruction(const RunConfig& cfg, std::string& summary) {
  const auto ctx = context_of(cfg);
  const TorusCharacter chi = character_at(cfg, 0, ctx);
  const CInvariant c = c_of_chi(chi);
  const ObstructionReport o = obstruction_coefficients(c.c, cfg.ell, cfg.degree);
  const CClassification cl = classify_c(c, kClassifyBound);
  summary = std::string(o.vanishes ? "obstruction vanishes" : "obstruction nonzero") + " for l = " +
            std::to_string(cfg.ell) + "; " + cl.verdict();
  return Json{{"character", chi.serialize()},
              {"c_invariant", cinvariant_json(c)},
              {"classification", classification_json(cl)},
              {"ell", cfg.ell},
              {"degree", cfg.degree},
              {"obstruction", obstruction_json(o)}};
}

std::string default_subgroup(const RunConfig& cfg, const char* level_one) {
  if (!cfg.subgroup.empty()) return cfg.subgroup;
  return cfg.level >= 2 ? "principal" : level_one;
}

Json run_nilpotency(const RunConfig& cfg, std::string& summary) {
  const Level lv = Level::make(cfg.p, cfg.level);
  const std::string sub = default_subgroup(cfg, "cyclic");
  NilpotencyMode mode;
  if (cfg.mode == "char_p") mode = NilpotencyMode::char_p;
  else if (cfg.mode == "pi_containment") mode = NilpotencyMode::pi_containment;
  else throw std::invalid_argument("unknown mode " + cfg.mode + " (char_p or pi_containment)");

  std::optional<FiniteGroup> ambient;
  IdealData h;
  if (sub == "cyclic") {
    const auto s = GL2ModElement::make(lv, 1, 1, 0, 1);
    ambient = generated_subgroup(lv, {s});
    h.subgroup_generators = {s};
  } else if (sub == "principal") {
    ambient = enumerate_group(lv);
    h.subgroup_generators = principal_congruence_generators(lv);
  } else if (sub == "whole") {
    ambient = enumerate_group(lv);
    h.subgroup_generators = gl2_generators(lv);
  } else {
    throw std::invalid_argument("unknown subgroup " + sub + " (cyclic, principal or whole)");
  }
  const NilpotencyReport r = ideal_power_nilpotency(*ambient, h, mode);
  Json gens = Json::array();
  for (const auto& g : h.subgroup_generators) gens.push_back(element_json(g));
  summary = "nilpotency index " + (r.index ? std::to_string(*r.index) : std::string("not reached")) + " (" +
            to_string(mode) + ", subgroup " + sub + ")";
  return Json{{"subgroup", sub},
              {"mode", to_string(mode)},
              {"ambient_order", r.ambient_order},
              {"subgroup_order", r.subgroup_order},
              {"subgroup_generators", gens},
              {"p_subgroup", r.p_subgroup},
              {"index", r.index ? Json(*r.index) : Json(nullptr)},
              {"power_sizes", r.power_sizes},
              {"warning", r.warning}};
}

Json run_nakayama(const RunConfig& cfg, std::string& summary) {
  const Level lv = Level::make(cfg.p, cfg.level);
  if (gl2_order(lv) > kMaxRegularModule)
    throw std::length_error("regular module of order " + std::to_string(gl2_order(lv)) + " exceeds the guard of " +
                            std::to_string(kMaxRegularModule));
  const FiniteGroup g = enumerate_group(lv);
  const std::string sub = default_subgroup(cfg, "whole");
  std::vector<GL2ModElement> gens;
  if (sub == "principal") gens = principal_congruence_generators(lv);
  else if (sub == "whole") gens = gl2_generators(lv);
  else if (sub == "unipotent") gens = {GL2ModElement::make(lv, 1, 1, 0, 1)};
  else if (sub == "trivial") gens = {};
  else throw std::invalid_argument("unknown subgroup " + sub + " (principal, whole, unipotent or trivial)");
  const FiniteGroup h = generated_subgroup(lv, gens);
  const NakayamaReport r = nakayama_dimension(regular_module(g, gens), IdealData{gens});
  Json divisors = Json::array();
  for (const auto& d : r.integer_divisors) divisors.push_back(d.get_str());
  summary = "rank of coinvariants " + std::to_string(r.coinvariant_rank) + " = [G:H] = " +
            std::to_string(g.order() / h.order()) + "; dual corank " + std::to_string(r.dual_corank);
  return Json{{"subgroup", sub},
              {"group_order", g.order()},
              {"subgroup_order", h.order()},
              {"index", g.order() / h.order()},
              {"module_rank", r.module_rank},
              {"coinvariant_rank", r.coinvariant_rank},
              {"torsion_valuations", r.torsion_valuations},
              {"integer_divisors", divisors},
              {"dual_corank", r.dual_corank},
              {"ranks_agree", r.ranks_agree}};
}

Json run_bruhat(const RunConfig& cfg, std::string& summary) {
  const BruhatCensus c = bruhat_census(enumerate_group(Level::make(cfg.p, cfg.level)));
  summary = "cells " + std::to_string(c.cell_b) + " + " + std::to_string(c.cell_bwp) + " = " + std::to_string(c.order) +
            "; factorization failures " + std::to_string(c.factor_failures);
  return Json{{"order", c.order},
              {"formula_order", gl2_order(Level::make(cfg.p, cfg.level))},
              {"cell_B", c.cell_b},
              {"cell_BwP", c.cell_bwp},
              {"factor_failures", c.factor_failures}};
}

Json run_induce(const RunConfig& cfg, std::string& summary) {
  const auto ctx = context_of(cfg);
  const TorusCharacter chi = character_at(cfg, 0, ctx);
  const InducedModule ind = build_induced(chi, cfg.level);
  const PairingReport pr = dual_pairing_check(ind);
  const SplitReport sp = bruhat_module_split(chi, cfg.level);
  Json reps = Json::array();
  for (const auto& g : ind.representatives()) reps.push_back(element_json(g));
  summary = "dim " + std::to_string(ind.dimension()) + "; pairing " + (pr.nonsingular ? "nonsingular" : "singular") +
            "; split " + std::to_string(sp.n_block.size()) + " + " + std::to_string(sp.n_minus_block.size());
  return Json{{"character", chi.serialize()},
              {"dimension", ind.dimension()},
              {"coset_representatives", reps},
              {"pairing",
               Json{{"induced_dimension", pr.induced_dimension},
                    {"dual_dimension", pr.dual_dimension},
                    {"determinant", padic_json(pr.determinant)},
                    {"nonsingular", pr.nonsingular},
                    {"invariant", pr.invariant},
                    {"elements_tested", pr.elements_tested},
                    {"identity_acts_trivially", pr.identity_acts_trivially},
                    {"homomorphism_checked", pr.homomorphism_checked}}},
              {"split",
               Json{{"dimension", sp.dimension},
                    {"n_block", sp.n_block},
                    {"n_minus_block", sp.n_minus_block},
                    {"w_maps_into_minus", sp.w_maps_into_minus},
                    {"identity_preserves_blocks", sp.identity_preserves_blocks},
                    {"witness", sp.witness ? element_json(*sp.witness) : Json(nullptr)},
                    {"witness_vector", sp.witness_vector}}}};
}

IntMatrix parse_matrix(const std::string& text) {
  IntMatrix rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<mpz_class> row;
    std::string tok;
    while (ls >> tok) {
      mpz_class v;
      if (v.set_str(tok, 10) != 0) throw std::invalid_argument("matrix entry is not an integer: " + tok);
      row.push_back(v);
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) throw std::invalid_argument("matrix rows are ragged");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("matrix file has no rows");
  return rows;
}

Json matrix_json(const IntMatrix& a) {
  Json out = Json::array();
  for (const auto& row : a) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(x.get_str());
    out.push_back(r);
  }
  return out;
}

Json run_duality(const RunConfig& cfg, std::string& summary) {
  const IntMatrix a = cfg.matrix_text.empty() ? IntMatrix{{1, 0}, {0, cfg.p}} : parse_matrix(cfg.matrix_text);
  const FreeModuleMap f = FreeModuleMap::from_matrix(column_count(a), a);
  const ExactnessReport e = exactness_suite(f, cfg.p);
  const DualData d = dual_data(f, cfg.p);
  const DoubleDualReport dd = double_dual_check(f.domain_rank);
  const auto vals = [](const std::vector<std::optional<int>>& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(x ? Json(*x) : Json(nullptr));
    return out;
  };
  std::string divisors;
  for (int v : e.elementary_divisors) divisors += (divisors.empty() ? "" : ",") + std::string(v == 0 ? "1" : v == 1 ? "p" : "p^" + std::to_string(v));
  summary = e.summary() + "; elementary divisors (" + divisors + ")";
  return Json{{"matrix", matrix_json(a)},
              {"dual_matrix", matrix_json(d.dual.matrix)},
              {"elementary_divisor_valuations", e.elementary_divisors},
              {"column_valuations", vals(d.column_valuations)},
              {"dual_column_valuations", vals(d.dual_column_valuations)},
              {"rank", e.rank},
              {"kernel_rank", e.kernel_rank},
              {"dual_quotient_rank", e.dual_quotient_rank},
              {"kernel_identity", e.kernel_identity},
              {"cokernel_cot_rank", e.cokernel_cot_rank},
              {"dual_kernel_rank", e.dual_kernel_rank},
              {"cokernel_identity", e.cokernel_identity},
              {"surjective", e.surjective},
              {"dual_isometry", e.dual_isometry},
              {"isometry_biconditional", e.isometry_biconditional},
              {"double_dual_identity", dd.consistent_is_identity}};
}

Json run_selftest(const RunConfig& cfg, std::string& summary) {
  AcceptanceConfig ac;
  ac.p = cfg.p;
  ac.N = cfg.prec;
  ac.M = cfg.trunc;
  ac.level = cfg.level;
  Json list = Json::array();
  int passed = 0, total = 0;
  for (int id = 1; id < kCriterionCount; ++id) {
    const CriterionResult r = run_criterion(id, ac);
    ++total;
    passed += r.passed;
    list.push_back(Json{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  }
  summary = std::to_string(passed) + "/" + std::to_string(total) + " acceptance checks passed";
  return Json{{"seed", ac.seed}, {"criteria", list}, {"passed", passed}, {"total", total}, {"all_passed", passed == total}};
}

}  // namespace

std::string default_config_dir() {
  if (const char* env = std::getenv(kConfigDirEnv); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home) return (fs::path(home) / ".config" / "iwasawa").string();
  return "";
}

void apply_defaults_file(RunConfig& cfg, const std::vector<std::string>& explicit_keys) {
  if (cfg.config_dir.empty()) return;
  const fs::path file = fs::path(cfg.config_dir) / "defaults.json";
  if (!fs::exists(file)) return;
  Json j;
  try {
    j = Json::parse(read_file(file));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed " + file.string() + ": " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error(file.string() + " must hold a JSON object");
  const auto is_explicit = [&](const std::string& k) {
    return std::find(explicit_keys.begin(), explicit_keys.end(), k) != explicit_keys.end();
  };
  for (const auto& [key, value] : j.items()) {
    try {
      if (is_explicit(key)) continue;
      if (key == "p") cfg.p = value.get<int>();
      else if (key == "prec") cfg.prec = value.get<int>();
      else if (key == "trunc") cfg.trunc = value.get<int>();
      else if (key == "level") cfg.level = value.get<int>();
      else if (key == "k") cfg.k = value.get<int>();
      else if (key == "ell") cfg.ell = value.get<int>();
      else if (key == "degree") cfg.degree = value.get<int>();
      else if (key == "samples") cfg.samples = value.get<std::vector<long>>();
      else if (key == "mode") cfg.mode = value.get<std::string>();
      else if (key == "subgroup") cfg.subgroup = value.get<std::string>();
      else throw std::runtime_error("unknown key '" + key + "' in " + file.string());
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("bad value for '" + key + "' in " + file.string() + ": " + e.what());
    }
  }
  cfg.defaults_file = file.string();
}

void load_inputs(RunConfig& cfg) {
  cfg.char_texts.clear();
  for (auto& path : cfg.char_paths) cfg.char_texts.push_back(read_file(resolve(path, cfg.config_dir)));
  if (!cfg.matrix_path.empty()) cfg.matrix_text = read_file(resolve(cfg.matrix_path, cfg.config_dir));
}

Json config_json(const RunConfig& cfg) {
  Json chars = Json::array();
  for (std::size_t i = 0; i < cfg.char_paths.size(); ++i)
    chars.push_back(Json{{"path", cfg.char_paths[i]}, {"text", i < cfg.char_texts.size() ? cfg.char_texts[i] : ""}});
  return Json{{"command", cfg.command},
              {"p", cfg.p},
              {"prec", cfg.prec},
              {"trunc", cfg.trunc},
              {"level", cfg.level},
              {"k", cfg.k},
              {"ell", cfg.ell},
              {"samples", cfg.samples},
              {"degree", cfg.degree},
              {"mode", cfg.mode},
              {"subgroup", cfg.subgroup},
              {"characters", chars},
              {"matrix", Json{{"path", cfg.matrix_path}, {"text", cfg.matrix_text}}},
              {"out", cfg.out},
              {"config_dir", cfg.config_dir},
              {"defaults_file", cfg.defaults_file}};
}

RunConfig config_from_json(const Json& j) {
  RunConfig cfg;
  try {
    cfg.command = j.at("command").get<std::string>();
    cfg.p = j.at("p").get<int>();
    cfg.prec = j.at("prec").get<int>();
    cfg.trunc = j.at("trunc").get<int>();
    cfg.level = j.at("level").get<int>();
    cfg.k = j.at("k").get<int>();
    cfg.ell = j.at("ell").get<int>();
    cfg.samples = j.at("samples").get<std::vector<long>>();
    cfg.degree = j.at("degree").get<int>();
    cfg.mode = j.at("mode").get<std::string>();
    cfg.subgroup = j.at("subgroup").get<std::string>();
    for (const auto& c : j.at("characters")) {
      cfg.char_paths.push_back(c.at("path").get<std::string>());
      cfg.char_texts.push_back(c.at("text").get<std::string>());
    }
    cfg.matrix_path = j.at("matrix").at("path").get<std::string>();
    cfg.matrix_text = j.at("matrix").at("text").get<std::string>();
    cfg.out = j.at("out").get<std::string>();
    cfg.config_dir = j.at("config_dir").get<std::string>();
    cfg.defaults_file = j.at("defaults_file").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

Json run_command(const RunConfig& cfg) {
  std::string summary;
  Json result;
  const std::string& c = cfg.command;
  if (c == "cchi") result = run_cchi(cfg, summary);
  else if (c == "simplicity") result = run_simplicity(cfg, summary);
  else if (c == "intertwine") result = run_intertwine(cfg, summary);
  else if (c == "obstruction") result = run_obstruction(cfg, summary);
  else if (c == "nilpotency") result = run_nilpotency(cfg, summary);
  else if (c == "nakayama") result = run_nakayama(cfg, summary);
  else if (c == "bruhat") result = run_bruhat(cfg, summary);
  else if (c == "induce") result = run_induce(cfg, summary);
  else if (c == "duality") result = run_duality(cfg, summary);
  else if (c == "selftest") result = run_selftest(cfg, summary);
  else throw std::invalid_argument("unknown command " + c);
  return Json{{"schema", kReportSchema},
              {"toolkit_version", kToolkitVersion},
              {"command", c},
              {"config", config_json(cfg)},
              {"result", result},
              {"summary", summary}};
}

bool report_failed(const Json& report) {
  return report.at("command") == "selftest" && !report.at("result").at("all_passed").get<bool>();
}

std::string render_report(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace iwasawa
