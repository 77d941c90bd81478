#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ppverify/check/checker.hpp"
#include "ppverify/check/pipeline.hpp"
#include "ppverify/check/report.hpp"
#include "ppverify/frontend/expand.hpp"
#include "ppverify/frontend/parser.hpp"
#include "ppverify/model/compile.hpp"

namespace {

using namespace ppv;
namespace stdfs = std::filesystem;

// Exit codes: the only stable contract of the tool.
constexpr int kExitHolds = 0;
constexpr int kExitViolated = 1;
constexpr int kExitInput = 2;
constexpr int kExitAnalysis = 3;
constexpr int kExitNeedsDeterminism = 4;

struct RunConfig {
  std::string platform = "ubuntu-trusty";
  std::string package_db;
  std::string solver_path = "z3";
  int timeout = 300;
  std::size_t branch_budget = 10000;
  bool no_por = false;
  bool no_prune = false;
  bool no_elim = false;
  bool semantic_commute = false;
  std::string format = "text";
  std::string emit_smt;
  std::string graph_dot;
};

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--platform", cfg.platform, "Platform name selecting the package database")->capture_default_str();
  cmd->add_option("--package-db", cfg.package_db,
                  "Package database: a JSON file or a directory of <platform>.json files "
                  "(default: packages/ next to the manifest)");
  cmd->add_option("--solver-path", cfg.solver_path, "SMT-LIB 2 solver binary")->capture_default_str();
  cmd->add_option("--timeout", cfg.timeout, "Per-query solver timeout and exploration time budget, in seconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--branch-budget", cfg.branch_budget, "Maximum number of explored ordering steps")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--no-por", cfg.no_por, "Disable commutativity-based partial-order reduction");
  cmd->add_flag("--no-prune", cfg.no_prune, "Disable pruning of private writes");
  cmd->add_flag("--no-elim", cfg.no_elim, "Disable resource elimination");
  cmd->add_flag("--semantic-commute", cfg.semantic_commute,
                "Ask the solver whether two resources commute when the syntactic check fails");
  cmd->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  cmd->add_option("--emit-smt", cfg.emit_smt, "Write every solver query to DIR as a numbered .smt2 file");
  cmd->add_option("--graph-dot", cfg.graph_dot, "Write the expanded resource graph to FILE (Graphviz)");
}

check::CheckOptions check_options(const RunConfig& cfg) {
  check::CheckOptions o;
  o.por = !cfg.no_por;
  o.prune = !cfg.no_prune;
  o.elim = !cfg.no_elim;
  o.semantic_commute = cfg.semantic_commute;
  o.branch_budget = cfg.branch_budget;
  o.time_budget = std::chrono::seconds(cfg.timeout);
  return o;
}

smt::SolverConfig solver_config(const RunConfig& cfg) {
  smt::SolverConfig s;
  s.path = cfg.solver_path;
  s.timeout = std::chrono::seconds(cfg.timeout);
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError("cannot write " + path);
}

std::string error_kind(const std::exception& e) {
  if (const auto* x = dynamic_cast<const frontend::ExpandError*>(&e)) {
    return x->kind() == frontend::ExpandError::Kind::DependencyCycle ? "dependency-cycle" : "manifest";
  }
  if (dynamic_cast<const frontend::ParseError*>(&e)) return "parse";
  if (dynamic_cast<const InputError*>(&e)) return "input";
  if (dynamic_cast<const ModelError*>(&e)) return "model";
  if (dynamic_cast<const SolverFailure*>(&e)) return "solver";
  if (dynamic_cast<const BudgetExceeded*>(&e)) return "budget";
  if (dynamic_cast<const check::DeterminismRequired*>(&e)) return "non-deterministic";
  return "internal";
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e) || dynamic_cast<const ModelError*>(&e)) return kExitInput;
  return kExitAnalysis;
}

int report_failure(const std::string& command, const RunConfig& cfg, const std::exception& e) {
  if (cfg.format == "json") {
    std::cout << check::render_error_json(command, error_kind(e), e.what());
  } else {
    std::cerr << "ppverify " << command << ": " << error_kind(e) << " error: " << e.what() << "\n";
  }
  return exit_code_for(e);
}

struct Loaded {
  check::LoadedManifest manifest;
  model::PackageDb db;
};

Loaded load(const std::string& manifest_path, const RunConfig& cfg) {
  Loaded out;
  std::string text = read_file(manifest_path);
  frontend::ResourceGraph resources = frontend::expand(frontend::parse(text));
  if (!cfg.graph_dot.empty()) write_file(cfg.graph_dot, frontend::to_dot(resources));
  model::CompileEnv env{cfg.platform, nullptr};
  if (check::uses_packages(resources)) {
    stdfs::path source = cfg.package_db.empty() ? stdfs::path(manifest_path).parent_path() / "packages"
                                                : stdfs::path(cfg.package_db);
    out.db = model::PackageDb::load(source, cfg.platform);
    env.db = &out.db;
  }
  out.manifest.compiled = model::compile_graph(resources, env);
  out.manifest.resources = std::move(resources);
  return out;
}

std::optional<stdfs::path> emit_dir(const RunConfig& cfg) {
  if (cfg.emit_smt.empty()) return std::nullopt;
  return stdfs::path(cfg.emit_smt);
}

void print(const check::Report& r, const RunConfig& cfg) {
  std::cout << (cfg.format == "json" ? check::render_json(r) : check::render_text(r));
}

enum class Command { Check, Idempotence, Invariant };

int run_verification(Command command, const std::string& manifest, const RunConfig& cfg, const std::string& inv_path,
                     const std::string& inv_content) {
  const char* name = command == Command::Check ? "check" : command == Command::Idempotence ? "idempotence" : "invariant";
  auto start = std::chrono::steady_clock::now();
  try {
    Loaded loaded = load(manifest, cfg);
    smt::SmtContext ctx(solver_config(cfg), emit_dir(cfg));
    check::Checker checker(loaded.manifest.compiled, ctx, check_options(cfg));
    check::Report report;
    report.command = name;
    report.manifest = manifest;
    report.labels = loaded.manifest.compiled.labels;
    check::Verdict det = checker.check_determinism();
    report.verdicts.push_back(det);
    report.stats = checker.stats();
    int code = det.holds() ? kExitHolds : kExitViolated;
    if (command != Command::Check) {
      if (!det.holds()) {
        code = kExitNeedsDeterminism;
      } else {
        check::Verdict v = command == Command::Idempotence
                               ? checker.check_idempotence()
                               : checker.check_invariant_file(fs::Path::parse(inv_path), model::literal_content(inv_content));
        report.verdicts.push_back(v);
        code = v.holds() ? kExitHolds : kExitViolated;
      }
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    print(report, cfg);
    if (code == kExitNeedsDeterminism && cfg.format == "text") {
      std::cerr << "ppverify " << name << ": refusing the " << name
                << " check on a non-deterministic manifest (fix the ordering first)\n";
    }
    return code;
  } catch (const std::exception& e) {
    return report_failure(name, cfg, e);
  }
}

int run_import(const std::string& platform, const std::string& db_path, const std::string& name,
               const std::string& listing_path, const std::vector<std::string>& depends, const std::string& format) {
  RunConfig cfg;
  cfg.format = format;
  try {
    stdfs::path file = db_path;
    if (stdfs::is_directory(file)) file /= platform + ".json";
    model::PackageDb db(platform);
    if (stdfs::exists(file)) {
      db = model::PackageDb::from_json(read_file(file.string()));
      if (db.platform() != platform) {
        throw InputError(file.string() + " is the database of platform '" + db.platform() + "', not '" + platform + "'");
      }
    }
    std::string listing;
    if (listing_path.empty() || listing_path == "-") {
      listing.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    } else {
      listing = read_file(listing_path);
    }
    std::vector<std::string> deps;
    for (const std::string& d : depends) {
      std::stringstream parts(d);
      std::string item;
      while (std::getline(parts, item, ',')) {
        if (!item.empty()) deps.push_back(item);
      }
    }
    db.ingest_listing(name, listing, deps);
    db.save(file);
    const model::PackageInfo* info = db.find(name);
    if (format == "json") {
      nlohmann::ordered_json j;
      j["schema_version"] = check::kReportSchemaVersion;
      j["command"] = "import-packages";
      j["package"] = name;
      j["files"] = info->files.size();
      j["deps"] = info->deps;
      j["database"] = file.string();
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "imported " << name << ": " << info->files.size() << " paths, " << info->deps.size()
                << " dependencies -> " << file.string() << "\n";
    }
    return kExitHolds;
  } catch (const std::exception& e) {
    return report_failure("import-packages", cfg, e);
  }
}

int run_bench(std::size_t n_from, std::size_t n_to, const std::string& mode_name, int runs, const RunConfig& cfg) {
  try {
    check::SyntheticMode mode =
        mode_name == "conflict" ? check::SyntheticMode::Conflict : check::SyntheticMode::Deterministic;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    if (cfg.format == "text") std::cout << "n  verdict            median_s  runs_s\n";
    for (std::size_t n = n_from; n <= n_to; ++n) {
      model::PackageDb db = check::synthetic_package_db(n, cfg.platform);
      model::CompileEnv env{cfg.platform, &db};
      check::LoadedManifest m = check::load_manifest(check::synthetic_manifest(n, mode), env);
      std::vector<double> times;
      std::string verdict;
      for (int r = 0; r < runs; ++r) {
        smt::SmtContext ctx(solver_config(cfg), emit_dir(cfg));
        check::Checker checker(m.compiled, ctx, check_options(cfg));
        auto start = std::chrono::steady_clock::now();
        check::Verdict v = checker.check_determinism();
        times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        verdict = check::verdict_name(v.kind);
      }
      std::vector<double> sorted = times;
      std::sort(sorted.begin(), sorted.end());
      double median = sorted[sorted.size() / 2];
      if (cfg.format == "json") {
        rows.push_back({{"n", n}, {"verdict", verdict}, {"median_seconds", median}, {"seconds", times}});
      } else {
        std::cout << n << "  " << std::left << std::setw(17) << verdict << "  " << std::fixed << std::setprecision(4)
                  << median << " ";
        for (double t : times) std::cout << " " << t;
        std::cout << "\n";
      }
    }
    if (cfg.format == "json") {
      nlohmann::ordered_json j;
      j["schema_version"] = check::kReportSchemaVersion;
      j["command"] = "bench-synthetic";
      j["mode"] = mode_name;
      j["results"] = rows;
      std::cout << j.dump(2) << "\n";
    }
    return kExitHolds;
  } catch (const std::exception& e) {
    return report_failure("bench-synthetic", cfg, e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ppverify: determinism and idempotence checker for configuration manifests"};
  app.require_subcommand(1);

  RunConfig check_cfg, idem_cfg, inv_cfg, bench_cfg;
  std::string check_manifest, idem_manifest, inv_manifest, inv_path, inv_content;

  CLI::App* check_cmd = app.add_subcommand("check", "Decide whether every ordering of the manifest has the same effect");
  check_cmd->add_option("manifest", check_manifest, "Manifest (.pp)")->required();
  add_common_options(check_cmd, check_cfg);

  CLI::App* idem_cmd = app.add_subcommand("idempotence", "Check determinism, then whether running twice equals once");
  idem_cmd->add_option("manifest", idem_manifest, "Manifest (.pp)")->required();
  add_common_options(idem_cmd, idem_cfg);

  CLI::App* inv_cmd = app.add_subcommand("invariant", "Check determinism, then that PATH always ends as a file holding TEXT");
  inv_cmd->add_option("manifest", inv_manifest, "Manifest (.pp)")->required();
  inv_cmd->add_option("--path", inv_path, "Absolute path")->required();
  inv_cmd->add_option("--content", inv_content, "Expected literal file content")->required();
  add_common_options(inv_cmd, inv_cfg);

  std::string imp_platform = "ubuntu-trusty", imp_db, imp_name, imp_listing, imp_format = "text";
  std::vector<std::string> imp_depends;
  CLI::App* imp_cmd = app.add_subcommand("import-packages", "Add a package's file listing to the offline package database");
  imp_cmd->add_option("name", imp_name, "Package name")->required();
  imp_cmd->add_option("listing", imp_listing, "File listing, one path per line (default or '-': stdin)");
  imp_cmd->add_option("--platform", imp_platform, "Platform name")->capture_default_str();
  imp_cmd->add_option("--package-db", imp_db, "Database JSON file, or directory of <platform>.json")->required();
  imp_cmd->add_option("--depends", imp_depends, "Direct dependencies (repeatable or comma-separated)");
  imp_cmd->add_option("--format", imp_format, "Output format")->check(CLI::IsMember({"text", "json"}));

  std::size_t bench_n = 5, bench_from = 1;
  std::string bench_mode = "conflict";
  int bench_runs = 3;
  CLI::App* bench_cmd = app.add_subcommand("bench-synthetic", "Time the synthetic conflicting-packages family");
  bench_cmd->add_option("--n", bench_n, "Largest number of packages")->capture_default_str()->check(CLI::PositiveNumber);
  bench_cmd->add_option("--from", bench_from, "Smallest number of packages")->capture_default_str()->check(CLI::PositiveNumber);
  bench_cmd->add_option("--mode", bench_mode, "conflict or deterministic")
      ->check(CLI::IsMember({"conflict", "deterministic"}))
      ->capture_default_str();
  bench_cmd->add_option("--runs", bench_runs, "Runs per n (median reported)")->capture_default_str()->check(CLI::PositiveNumber);
  add_common_options(bench_cmd, bench_cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  if (*check_cmd) return run_verification(Command::Check, check_manifest, check_cfg, "", "");
  if (*idem_cmd) return run_verification(Command::Idempotence, idem_manifest, idem_cfg, "", "");
  if (*inv_cmd) return run_verification(Command::Invariant, inv_manifest, inv_cfg, inv_path, inv_content);
  if (*imp_cmd) return run_import(imp_platform, imp_db, imp_name, imp_listing, imp_depends, imp_format);
  if (*bench_cmd) return run_bench(std::min(bench_from, bench_n), bench_n, bench_mode, bench_runs, bench_cfg);
  return kExitInput;
}
