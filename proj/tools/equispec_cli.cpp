// equispec command-line driver. Talks to the library only through equispec.h.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "equispec.h"

namespace {

struct ProblemFlags {
  std::string builtin, mesh, config;
  int level = 0;
  std::vector<std::string> params, tags;
  std::string q, robin, conformal;
  bool jacobi = false, robin_top = false;
  std::string group, twist, strategy;
  int count = 6;
  double zero_tol = 0.05;
  long long seed = -1;
  std::string output;
};

void add_problem_flags(CLI::App* cmd, ProblemFlags& f) {
  auto* b = cmd->add_option("--builtin", f.builtin, "Model domain (sphere_octant, sphere_lune, lune_cut, "
                                                    "sphere_hemisphere, full_sphere, catenoid_K0, union_pm_K0, "
                                                    "unit_disk)");
  auto* m = cmd->add_option("--mesh", f.mesh, "Mesh file")->check(CLI::ExistingFile);
  b->excludes(m);
  cmd->add_option("--config", f.config, "Problem config file; its keys override flags")->check(CLI::ExistingFile);
  cmd->add_option("--level", f.level, "Refinement level")->check(CLI::NonNegativeNumber);
  cmd->add_option("--param", f.params, "Domain parameter name=value (repeatable)");
  auto* q = cmd->add_option("--q", f.q, "Potential: number or expression in x, y, z");
  auto* j = cmd->add_flag("--jacobi", f.jacobi, "Use the Jacobi potential |A|^2 of the chart");
  q->excludes(j);
  cmd->add_option("--robin", f.robin, "Robin coefficient: number or expression");
  cmd->add_flag("--robin-top", f.robin_top, "Tag the sphere-contact boundary Robin with r = 1");
  cmd->add_option("--conformal", f.conformal, "Conformal factor rho (metric becomes rho^2 g)");
  cmd->add_option("--tag", f.tags, "TAG:predicate with TAG in D, N, R (repeatable, applied in order)");
  cmd->add_option("--group", f.group, "Symmetry group, e.g. pyramidal:3");
  cmd->add_option("--twist", f.twist, "trivial, determinant, normal_sign or [+1,-1,...]");
  cmd->add_option("--strategy", f.strategy, "projected_subspace or fundamental_domain");
  cmd->add_option("--count", f.count, "Eigenvalues to compute (more if needed to pass zero_tol)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--zero-tol", f.zero_tol, "Eigenvalues within this of zero count as zero")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "Starting-subspace seed (default: problem hash)")->check(CLI::PositiveNumber);
  cmd->add_option("--output,-o", f.output, "Output file (default: stdout)");
}

int report(es_status st) {
  if (st != ES_OK) std::cerr << "equispec: " << es_last_error() << "\n";
  return st == ES_INSUFFICIENT_SPECTRUM ? ES_NOT_CONVERGED : static_cast<int>(st);
}

// Builds the configuration: flags first, then the config file on top.
es_status make_config(const ProblemFlags& f, es_config** out) {
  es_config* c = nullptr;
  es_config_create(&c);
  std::vector<std::pair<std::string, std::string>> kv;
  if (!f.builtin.empty()) kv.emplace_back("builtin", f.builtin);
  if (!f.mesh.empty()) kv.emplace_back("mesh", f.mesh);
  kv.emplace_back("level", std::to_string(f.level));
  for (const auto& p : f.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) {
      es_config_free(c);
      std::cerr << "equispec: --param expects name=value, got '" << p << "'\n";
      return ES_INVALID_INPUT;
    }
    kv.emplace_back("param." + p.substr(0, eq), p.substr(eq + 1));
  }
  if (!f.q.empty()) kv.emplace_back("potential", f.q);
  if (f.jacobi) kv.emplace_back("potential", "jacobi");
  if (!f.robin.empty()) kv.emplace_back("robin", f.robin);
  if (f.robin_top) kv.emplace_back("robin_top", "true");
  if (!f.conformal.empty()) kv.emplace_back("conformal", f.conformal);
  static const std::map<std::string, std::string> tag_keys = {
      {"D", "dirichlet"}, {"N", "neumann"}, {"R", "robin_edges"}};
  for (const auto& t : f.tags) {
    const auto colon = t.find(':');
    const auto key = colon == std::string::npos ? tag_keys.end() : tag_keys.find(t.substr(0, colon));
    if (key == tag_keys.end()) {
      es_config_free(c);
      std::cerr << "equispec: --tag expects D:, N: or R: followed by a predicate, got '" << t << "'\n";
      return ES_INVALID_INPUT;
    }
    kv.emplace_back(key->second, t.substr(colon + 1));
  }
  if (!f.group.empty()) kv.emplace_back("group", f.group);
  if (!f.twist.empty()) kv.emplace_back("twist", f.twist);
  if (!f.strategy.empty()) kv.emplace_back("strategy", f.strategy);
  char buf[64];
  kv.emplace_back("count", std::to_string(f.count));
  std::snprintf(buf, sizeof buf, "%.17g", f.zero_tol);
  kv.emplace_back("zero_tol", buf);
  if (f.seed > 0) kv.emplace_back("seed", std::to_string(f.seed));
  for (const auto& [k, v] : kv) {
    if (es_config_set(c, k.c_str(), v.c_str()) != ES_OK) {
      std::cerr << "equispec: " << es_last_error() << "\n";
      es_config_free(c);
      return ES_INVALID_INPUT;
    }
  }
  if (!f.config.empty() && es_config_merge_file(c, f.config.c_str()) != ES_OK) {
    std::cerr << "equispec: " << es_last_error() << "\n";
    es_config_free(c);
    return ES_INVALID_INPUT;
  }
  *out = c;
  return ES_OK;
}

bool write_out(const std::string& path, const char* text) {
  if (path.empty() || path == "-") {
    std::fputs(text, stdout);
    return true;
  }
  std::ofstream out(path);
  if (!(out << text)) {
    std::cerr << "equispec: cannot write " << path << "\n";
    return false;
  }
  return true;
}

int run_spectrum(const ProblemFlags& f, const std::string& format, const std::string& plot, int plot_index) {
  es_config* cfg = nullptr;
  if (es_status st = make_config(f, &cfg); st != ES_OK) return st;
  es_spectrum* s = nullptr;
  const es_status st = es_run_spectrum(cfg, &s);
  es_config_free(cfg);
  if (st != ES_OK) return report(st);
  char* text = nullptr;
  es_status out_st = format == "csv" ? es_spectrum_to_csv(s, &text) : es_spectrum_to_json(s, &text);
  int code = report(out_st);
  if (out_st == ES_OK && !write_out(f.output, text)) code = ES_INVALID_INPUT;
  es_string_free(text);
  if (code == 0 && !plot.empty()) {
    char* csv = nullptr;
    const es_status pst = es_spectrum_eigenfunction_csv(s, plot_index - 1, &csv);
    code = report(pst);
    if (pst == ES_OK && !write_out(plot, csv)) code = ES_INVALID_INPUT;
    es_string_free(csv);
  }
  es_spectrum_free(s);
  return code;
}

int run_montiel_ros(const ProblemFlags& f, const std::string& partition, double t) {
  es_config* cfg = nullptr;
  if (es_status st = make_config(f, &cfg); st != ES_OK) return st;
  char* json = nullptr;
  const es_status st = es_run_montiel_ros(cfg, partition.c_str(), t, &json);
  es_config_free(cfg);
  int code = report(st);
  if (json && !write_out(f.output, json)) code = ES_INVALID_INPUT;
  es_string_free(json);
  return code;
}

int run_convergence(const ProblemFlags& f, int levels) {
  es_config* cfg = nullptr;
  if (es_status st = make_config(f, &cfg); st != ES_OK) return st;
  char* json = nullptr;
  const es_status st = es_run_convergence(cfg, levels, &json);
  es_config_free(cfg);
  int code = report(st);
  if (json && !write_out(f.output, json)) code = ES_INVALID_INPUT;
  es_string_free(json);
  return code;
}

int run_reproduce(const std::string& suite, const std::string& out_dir, bool json_only) {
  static const char* all[] = {"sphere-table", "k0", "disk", "nodal", "ledger"};
  std::vector<std::string> suites;
  if (suite == "all") suites.assign(std::begin(all), std::end(all));
  else suites.push_back(suite);
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  int code = 0;
  for (const auto& s : suites) {
    char* json = nullptr;
    char* table = nullptr;
    const es_status st = es_reproduce(s.c_str(), &json, &table);
    if (st != ES_OK && st != ES_MISMATCH) {
      code = report(st);
      break;
    }
    std::fputs(json_only ? json : table, stdout);
    if (st == ES_MISMATCH) {
      std::cerr << "equispec: " << es_last_error() << "\n";
      code = ES_MISMATCH;
    }
    if (!out_dir.empty() && !write_out((std::filesystem::path(out_dir) / (s + ".json")).string(), json))
      code = ES_INVALID_INPUT;
    es_string_free(json);
    es_string_free(table);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Index and nullity of Schroedinger forms on triangulated surfaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", es_version());

  ProblemFlags spec_flags;
  std::string format = "json", plot;
  int plot_index = 1;
  auto* spectrum = app.add_subcommand("spectrum", "Lowest eigenvalues, index and nullity");
  add_problem_flags(spectrum, spec_flags);
  spectrum->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  spectrum->add_option("--plot", plot, "Write eigenfunction samples with nodal labels (CSV) here");
  spectrum->add_option("--plot-index", plot_index, "1-based eigenfunction for --plot")->check(CLI::PositiveNumber);

  ProblemFlags mr_flags;
  std::string partition;
  double t = 0.0;
  auto* mr = app.add_subcommand("montiel-ros", "Check the counting inequalities for a partition");
  add_problem_flags(mr, mr_flags);
  mr->add_option("--partition", partition, "Partition file")->required();
  mr->add_option("--t", t, "Threshold");

  ProblemFlags conv_flags;
  int levels = 3;
  auto* conv = app.add_subcommand("convergence", "Refinement study with Richardson extrapolation");
  add_problem_flags(conv, conv_flags);
  conv->add_option("--levels", levels, "Number of levels")->check(CLI::PositiveNumber);

  std::string suite, out_dir;
  bool json_only = false;
  auto* repro = app.add_subcommand("reproduce", "Compare against the reference tables");
  repro->add_option("suite", suite, "sphere-table, k0, disk, nodal, ledger or all")
      ->required()
      ->check(CLI::IsMember({"sphere-table", "k0", "disk", "nodal", "ledger", "all"}));
  repro->add_option("--output-dir", out_dir, "Write one JSON document per suite here");
  repro->add_flag("--json", json_only, "Print JSON instead of the table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ES_INVALID_INPUT;
  }

  if (spectrum->parsed()) return run_spectrum(spec_flags, format, plot, plot_index);
  if (mr->parsed()) return run_montiel_ros(mr_flags, partition, t);
  if (conv->parsed()) return run_convergence(conv_flags, levels);
  return run_reproduce(suite, out_dir, json_only);
}
