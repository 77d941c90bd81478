// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. Thresholds are fixed below.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "ppverify/analysis/commute.hpp"
#include "ppverify/analysis/defwrite.hpp"
#include "ppverify/analysis/prune.hpp"
#include "ppverify/check/checker.hpp"
#include "ppverify/check/pipeline.hpp"
#include "ppverify/frontend/expand.hpp"
#include "ppverify/fs/oracle.hpp"
#include "ppverify/fs/sexpr.hpp"
#include "ppverify/model/compile.hpp"
#include "ppverify/smt/dom.hpp"
#include "ppverify/smt/equiv.hpp"
#include "support/generators.hpp"

namespace {

using namespace ppv;
using Clock = std::chrono::steady_clock;
namespace stdfs = std::filesystem;

// ---- thresholds --------------------------------------------------------
constexpr double kExampleSuiteSeconds = 30.0;       // criterion 1
constexpr int kEquivPairs = 10000;                // criterion 2
constexpr std::size_t kEquivMaxDom = 5;
constexpr int kGraphs = 1000;                     // criterion 3
constexpr std::size_t kGraphMaxVertices = 4;
constexpr std::size_t kGraphMaxDom = 6;
constexpr int kCommutePairs = 10000;              // criterion 4
constexpr std::size_t kCommuteMaxDom = 6;
constexpr int kPruneTriples = 5000;               // criterion 5
constexpr int kScalingRuns = 3;                   // criterion 6
constexpr double kScalingFactor = 10.0;
constexpr double kPruneRatio = 0.10;              // criterion 7
constexpr double kApacheSeconds = 10.0;
constexpr std::size_t kApacheMinFiles = 200;
// -------------------------------------------------------------------------

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

stdfs::path source_dir() { return stdfs::path(PPV_SOURCE_DIR); }

std::string read_file(const stdfs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::cout << "criterion " << criterion << ": " << (pass ? "PASS" : "FAIL") << " - " << detail << std::endl;
  if (!pass) ++failures;
}

// Every counterexample produced anywhere in the run, replayed in criterion 8.
struct Witness {
  analysis::CompiledGraph graph;
  check::Verdict verdict;
};
std::vector<Witness> witnesses;

void record(const analysis::CompiledGraph& g, const check::Verdict& v) {
  if (!v.holds()) witnesses.push_back({g, v});
}

const model::PackageDb& fixture_db() {
  static model::PackageDb db =
      model::PackageDb::load(source_dir() / "manifests" / "packages", "ubuntu-trusty");
  return db;
}

check::LoadedManifest load(const std::string& name) {
  model::CompileEnv env{"ubuntu-trusty", &fixture_db()};
  return check::load_manifest(read_file(source_dir() / "manifests" / name), env);
}

// ---- criterion 1 (and the suite reused by 9) ---------------------------

struct SuiteOutcome {
  bool pass = true;
  std::string detail;
};

SuiteOutcome example_suite(smt::SmtContext& ctx, bool keep_witnesses) {
  SuiteOutcome out;
  auto expect = [&](bool ok, const std::string& what) {
    out.detail += (out.detail.empty() ? "" : "; ") + what + (ok ? " ok" : " WRONG");
    out.pass = out.pass && ok;
  };
  auto det = [&](const std::string& file, check::Checker*& holder) {
    static std::vector<std::unique_ptr<check::Checker>> keep;
    keep.push_back(std::make_unique<check::Checker>(load(file).compiled, ctx));
    holder = keep.back().get();
    check::Verdict v = holder->check_determinism();
    if (keep_witnesses) record(holder->graph(), v);
    return v;
  };
  check::Checker* c = nullptr;
  try {
    check::Verdict v = det("apache-config.pp", c);
    expect(v.kind == check::Verdict::Kind::NonDeterministic, "apache-config->NonDet");
    v = det("apache-config-ordered.pp", c);
    expect(v.kind == check::Verdict::Kind::Deterministic, "apache-config-ordered->Det");
    bool cycle = false;
    try {
      load("cpp-ocaml-modules.pp");
    } catch (const frontend::ExpandError& e) {
      cycle = e.kind() == frontend::ExpandError::Kind::DependencyCycle;
    }
    expect(cycle, "cpp-ocaml-modules->DependencyCycle");
    v = det("go-without-perl.pp", c);
    expect(v.kind == check::Verdict::Kind::NonDeterministic && v.result_a->is_ok() && v.result_b->is_ok(),
           "go-without-perl->NonDet(two success states)");
    v = det("go-without-perl-ordered.pp", c);
    bool fixed_det = v.kind == check::Verdict::Kind::Deterministic;
    check::Verdict idem = fixed_det ? c->check_idempotence() : v;
    if (keep_witnesses && fixed_det) record(c->graph(), idem);
    expect(fixed_det && idem.kind == check::Verdict::Kind::NonIdempotent, "go-without-perl-ordered->Det,NonIdem");
    v = det("copy-then-remove.pp", c);
    idem = v.holds() ? c->check_idempotence() : v;
    if (keep_witnesses && v.holds()) record(c->graph(), idem);
    expect(v.holds() && idem.kind == check::Verdict::Kind::NonIdempotent, "copy-then-remove->NonIdem");
    v = det("myuser-define.pp", c);
    idem = v.holds() ? c->check_idempotence() : v;
    expect(v.holds() && idem.kind == check::Verdict::Kind::Idempotent, "myuser-define->Det,Idem");
  } catch (const std::exception& e) {
    expect(false, std::string("exception: ") + e.what());
  }
  return out;
}

void criterion1() {
  smt::SmtContext ctx(smt::SolverConfig{});
  auto start = Clock::now();
  SuiteOutcome s = example_suite(ctx, true);
  double t = since(start);
  std::ostringstream d;
  d << s.detail << "; total " << t << " s (limit " << kExampleSuiteSeconds << " s)";
  report(1, s.pass && t < kExampleSuiteSeconds, d.str());
}

// ---- criterion 2 -------------------------------------------------------

void criterion2() {
  smt::SmtContext ctx(smt::SolverConfig{});
  testgen::ExprGen gen(2024);
  int agree = 0, equivalent = 0;
  std::string first_mismatch;
  for (int i = 0; i < kEquivPairs; ++i) {
    auto [e1, e2] = gen.pair(kEquivMaxDom);
    std::array<fs::Expr, 2> both{e1, e2};
    fs::ContentSet named = fs::mentioned_contents(e1);
    fs::collect_contents(e2, named);
    bool oracle = fs::oracle_equiv(e1, e2, smt::dom_bound(both), named);
    bool smt = !smt::check_equiv(e1, e2, ctx).has_value();
    if (oracle == smt) {
      ++agree;
    } else if (first_mismatch.empty()) {
      first_mismatch = fs::to_sexpr(e1) + " vs " + fs::to_sexpr(e2);
    }
    equivalent += oracle ? 1 : 0;
  }
  std::ostringstream d;
  d << agree << "/" << kEquivPairs << " pairs agree with the brute-force oracle (" << equivalent
    << " equivalent, |dom| <= " << kEquivMaxDom << ", 2 named contents)";
  if (!first_mismatch.empty()) d << "; first mismatch: " << first_mismatch;
  report(2, agree == kEquivPairs, d.str());
}

// ---- criterion 3 -------------------------------------------------------

void criterion3() {
  smt::SmtContext ctx(smt::SolverConfig{});
  testgen::GraphGen gen(31337);
  std::vector<std::pair<std::string, check::CheckOptions>> configs(4);
  configs[0].first = "default";
  configs[1].first = "--no-por";
  configs[1].second.por = false;
  configs[2].first = "--no-prune";
  configs[2].second.prune = false;
  configs[3].first = "--no-elim";
  configs[3].second.elim = false;
  int agree = 0, nondet = 0;
  std::string first_mismatch;
  for (int i = 0; i < kGraphs; ++i) {
    analysis::CompiledGraph g = gen.graph(kGraphMaxVertices, kGraphMaxDom);
    bool expected = !check::brute_force_determinism(g).has_value();
    nondet += expected ? 0 : 1;
    bool all = true;
    for (const auto& [name, opts] : configs) {
      check::Checker c(g, ctx, opts);
      check::Verdict v = c.check_determinism();
      record(g, v);
      if (v.holds() != expected) {
        all = false;
        if (first_mismatch.empty()) first_mismatch = "graph " + std::to_string(i) + " under " + name;
      }
    }
    agree += all ? 1 : 0;
  }
  std::ostringstream d;
  d << agree << "/" << kGraphs << " graphs agree with brute force under default, --no-por, --no-prune and --no-elim ("
    << nondet << " non-deterministic)";
  if (!first_mismatch.empty()) d << "; first mismatch: " << first_mismatch;
  report(3, agree == kGraphs, d.str());
}

// ---- criterion 4 -------------------------------------------------------

void criterion4() {
  testgen::ExprGen gen(4242);
  int claimed = 0, violations = 0, pairs = 0;
  while (pairs < kCommutePairs) {
    fs::Expr a = gen.expr(3);
    fs::Expr b = gen.coin(30) ? gen.variant(a) : gen.expr(3);
    std::vector<fs::Expr> both{a, b};
    fs::PathSet dom = smt::dom_bound(both);
    if (dom.size() > kCommuteMaxDom) continue;
    ++pairs;
    if (!analysis::commutes(a, b)) continue;
    ++claimed;
    fs::ContentSet named = fs::mentioned_contents(a);
    fs::collect_contents(b, named);
    if (!fs::oracle_equiv(fs::Expr::seq(a, b), fs::Expr::seq(b, a), dom, named)) ++violations;
  }
  // Two packages that share only the /usr and /usr/bin ancestors.
  model::PackageDb db("toy");
  db.ingest_listing("alpha", "/usr/bin/alpha\n/usr/share/alpha/readme\n");
  db.ingest_listing("beta", "/usr/bin/beta\n/usr/lib/beta/libbeta.so\n");
  model::CompileEnv env{"toy", &db};
  check::LoadedManifest m =
      check::load_manifest("package{'alpha': ensure => present }\npackage{'beta': ensure => present }\n", env);
  bool toy = analysis::commutes(m.compiled.exprs[0], m.compiled.exprs[1]);
  std::ostringstream d;
  d << pairs << " random pairs, " << claimed << " claimed commuting, " << violations
    << " refuted by the oracle; toy packages sharing /usr,/usr/bin commute: " << (toy ? "yes" : "no");
  report(4, violations == 0 && toy && claimed > 0, d.str());
}

// ---- criterion 5 -------------------------------------------------------

// A program that leaves p holding v whenever it succeeds.
fs::Expr definitive_writer(testgen::ExprGen& gen, const fs::Path& p, int value, const fs::ContentId& c) {
  using fs::Expr;
  using fs::Pred;
  switch (value) {
    case 0:  // file c
      if (gen.coin()) return model::ensure_file(p, c);
      return Expr::if_(Pred::dne(p), Expr::create_file(p, c),
                       Expr::if_(Pred::is_file(p), Expr::seq(Expr::rm(p), Expr::create_file(p, c)), Expr::error()));
    case 1:  // directory
      if (gen.coin()) return fs::idemdir(p);
      return Expr::if_(Pred::is_dir(p), Expr::skip(), Expr::mkdir(p));
    default:  // absent
      if (gen.coin()) return Expr::if_(Pred::dne(p), Expr::skip(), Expr::rm(p));
      return Expr::if_(Pred::is_file(p), Expr::rm(p), Expr::if_(Pred::dne(p), Expr::skip(), Expr::rm(p)));
  }
}

void criterion5() {
  testgen::ExprGen gen(555);
  int triples = 0, agree = 0, equivalent = 0, refused = 0;
  std::string first_mismatch;
  while (triples < kPruneTriples) {
    auto [x1, x2] = gen.pair(4);
    fs::Path p = gen.path();
    int value = gen.below(3);
    const fs::ContentId& c = gen.content();
    fs::Expr e1 = fs::Expr::seq(x1, definitive_writer(gen, p, value, c));
    fs::Expr e2 = fs::Expr::seq(x2, definitive_writer(gen, p, value, c));
    analysis::DefValue v1 = analysis::defwrite_at(analysis::defwrite_abstract(e1), p);
    analysis::DefValue v2 = analysis::defwrite_at(analysis::defwrite_abstract(e2), p);
    if (!v1.definite() || v1 != v2) continue;
    fs::Expr p1, p2;
    try {
      p1 = analysis::prune(p, e1);
      p2 = analysis::prune(p, e2);
    } catch (const analysis::PruneInapplicable&) {
      ++refused;
      continue;
    }
    std::vector<fs::Expr> all{e1, e2, p1, p2};
    fs::PathSet dom = smt::dom_bound(all);
    if (dom.size() > 6) continue;
    ++triples;
    fs::ContentSet named;
    for (const fs::Expr& e : all) fs::collect_contents(e, named);
    bool before = fs::oracle_equiv(e1, e2, dom, named);
    bool after = fs::oracle_equiv(p1, p2, dom, named);
    equivalent += before ? 1 : 0;
    if (before == after) {
      ++agree;
    } else if (first_mismatch.empty()) {
      first_mismatch = fs::to_sexpr(e1) + " vs " + fs::to_sexpr(e2) + " at " + p.str();
    }
  }
  std::ostringstream d;
  d << agree << "/" << triples << " triples keep their equivalence verdict after pruning (" << equivalent
    << " equivalent; " << refused << " candidates where prune refused were not counted)";
  if (!first_mismatch.empty()) d << "; first mismatch: " << first_mismatch;
  report(5, agree == triples && equivalent > 0 && equivalent < triples, d.str());
}

// ---- criterion 6 -------------------------------------------------------

void criterion6() {
  std::map<std::size_t, double> median;
  std::string detail;
  bool verdicts_ok = true;
  try {
    for (std::size_t n = 2; n <= 5; ++n) {
      model::PackageDb db = check::synthetic_package_db(n, "synthetic");
      model::CompileEnv env{"synthetic", &db};
      check::LoadedManifest m =
          check::load_manifest(check::synthetic_manifest(n, check::SyntheticMode::Deterministic), env);
      std::vector<double> times;
      for (int r = 0; r < kScalingRuns; ++r) {
        smt::SmtContext ctx(smt::SolverConfig{});
        check::Checker c(m.compiled, ctx);
        auto start = Clock::now();
        check::Verdict v = c.check_determinism();
        times.push_back(since(start));
        verdicts_ok = verdicts_ok && v.kind == check::Verdict::Kind::Deterministic;
      }
      std::sort(times.begin(), times.end());
      median[n] = times[times.size() / 2];
      std::ostringstream s;
      s << "t(" << n << ")=" << median[n] << "s ";
      detail += s.str();
    }
  } catch (const std::exception& e) {
    report(6, false, std::string("exception: ") + e.what());
    return;
  }
  bool increasing = median[3] < median[4] && median[4] < median[5];
  bool factor = median[5] > kScalingFactor * median[2];
  detail += "(medians of " + std::to_string(kScalingRuns) + " runs, deterministic mode; strictly increasing 3..5: " +
            (increasing ? "yes" : "no") + ", t(5) > 10 t(2): " + (factor ? "yes" : "no") +
            (verdicts_ok ? "" : "; WRONG verdict") + ")";
  report(6, increasing && factor && verdicts_ok, detail);
}

// ---- criterion 7 -------------------------------------------------------

void criterion7() {
  try {
    const model::PackageInfo* apache = fixture_db().find("apache2");
    std::size_t files = apache == nullptr ? 0 : apache->files.size();
    check::LoadedManifest m = load("apache-config-ordered.pp");
    smt::SmtContext ctx(smt::SolverConfig{});
    check::Checker c(m.compiled, ctx);
    auto start = Clock::now();
    check::Verdict v = c.check_determinism();
    double t = since(start);
    const check::CheckStats& s = c.stats();
    double ratio = static_cast<double>(s.written_paths) / static_cast<double>(s.written_paths_unpruned);
    std::ostringstream d;
    d << "apache2 with " << files << " files + config overwrite: paths after pruning " << s.written_paths
      << " of " << s.written_paths_unpruned << " (" << ratio * 100 << "%, limit " << kPruneRatio * 100
      << "%), check " << t << " s (limit " << kApacheSeconds << " s), verdict " << check::verdict_name(v.kind);
    report(7, files >= kApacheMinFiles && ratio <= kPruneRatio && t < kApacheSeconds && v.holds(), d.str());
  } catch (const std::exception& e) {
    report(7, false, std::string("exception: ") + e.what());
  }
}

// ---- criterion 8 -------------------------------------------------------

void criterion8() {
  // Also produce a batch of synthetic conflict witnesses.
  for (std::size_t n = 2; n <= 4; ++n) {
    model::PackageDb db = check::synthetic_package_db(n, "synthetic");
    model::CompileEnv env{"synthetic", &db};
    check::LoadedManifest m = check::load_manifest(check::synthetic_manifest(n, check::SyntheticMode::Conflict), env);
    smt::SmtContext ctx(smt::SolverConfig{});
    check::Checker c(m.compiled, ctx);
    record(m.compiled, c.check_determinism());
  }
  std::size_t replayed = 0;
  for (const Witness& w : witnesses) {
    const check::Verdict& v = w.verdict;
    auto run = [&](const std::vector<std::size_t>& order) {
      fs::EvalResult r = fs::EvalResult::ok(*v.input);
      for (std::size_t i : order) r = fs::eval(w.graph.exprs[i], r);
      return r;
    };
    bool ok = false;
    switch (v.kind) {
      case check::Verdict::Kind::NonDeterministic: {
        fs::EvalResult a = run(v.order_a);
        fs::EvalResult b = run(v.order_b);
        ok = a == *v.result_a && b == *v.result_b && a != b;
        break;
      }
      case check::Verdict::Kind::NonIdempotent: {
        fs::EvalResult once = run(v.order_a);
        fs::EvalResult twice = once;
        for (std::size_t i : v.order_a) twice = fs::eval(w.graph.exprs[i], twice);
        ok = once == *v.result_a && twice == *v.result_b && once != twice;
        break;
      }
      default:
        break;
    }
    replayed += ok ? 1 : 0;
  }
  std::ostringstream d;
  d << replayed << "/" << witnesses.size() << " counterexamples replay with the concrete evaluator";
  report(8, !witnesses.empty() && replayed == witnesses.size(), d.str());
}

// ---- criterion 9 -------------------------------------------------------

std::map<std::string, std::string> read_dir(const stdfs::path& dir) {
  std::map<std::string, std::string> out;
  if (!stdfs::exists(dir)) return out;
  for (const auto& entry : stdfs::directory_iterator(dir)) out[entry.path().filename().string()] = read_file(entry.path());
  return out;
}

void criterion9() {
  stdfs::path base = stdfs::temp_directory_path() / ("ppv-acceptance-smt-" + std::to_string(::getpid()));
  stdfs::remove_all(base);
  for (const char* run : {"a", "b"}) {
    smt::SmtContext ctx(smt::SolverConfig{}, base / run);
    example_suite(ctx, false);
  }
  auto a = read_dir(base / "a");
  auto b = read_dir(base / "b");
  stdfs::remove_all(base);
  std::ostringstream d;
  d << a.size() << " .smt2 files from the example-manifest suite; identical across two runs: " << (a == b ? "yes" : "no");
  report(9, !a.empty() && a == b, d.str());
}

}  // namespace

int main(int argc, char** argv) {
  // Optional: run a subset, e.g. "acceptance 1 7 9".
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  auto want = [&](int k) { return selected.empty() || std::find(selected.begin(), selected.end(), k) != selected.end(); };
  std::array<std::function<void()>, 9> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                criterion6, criterion7, criterion8, criterion9};
  for (int k = 1; k <= 9; ++k) {
    if (!want(k)) continue;
    try {
      criteria[static_cast<std::size_t>(k - 1)]();
    } catch (const std::exception& e) {
      report(k, false, std::string("exception: ") + e.what());
    }
  }
  return failures == 0 ? 0 : 1;
}
