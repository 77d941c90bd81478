#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ppverify/smt/sexp.hpp"

namespace ppv::smt {

struct SolverConfig {
  // Binary name (searched on PATH) or path of an SMT-LIB 2 solver.
  std::string path = "z3";
  // Extra arguments; when empty, defaults are chosen from the binary name
  // (z3: "-in -smt2"; cvc5: "--lang=smt2 --incremental --produce-models").
  std::vector<std::string> args;
  std::chrono::seconds timeout{300};
};

// Arguments used to start `config`'s solver in interactive SMT-LIB 2 mode.
std::vector<std::string> solver_arguments(const SolverConfig& config);

enum class SatResult { Sat, Unsat, Unknown };

struct CheckOutcome {
  SatResult result = SatResult::Unknown;
  // Requested terms -> printed values (only when Sat).
  std::map<std::string, SExp> values;
};

// A long-lived solver child process spoken to over pipes. Every query starts
// with (reset), so queries are independent. If the solver dies, answers
// garbage, or exceeds the timeout, the process is killed, SolverFailure is
// thrown, and the next query starts a fresh process. Not thread-safe: use one
// session per thread.
class SolverSession {
 public:
  explicit SolverSession(SolverConfig config);
  ~SolverSession();
  SolverSession(const SolverSession&) = delete;
  SolverSession& operator=(const SolverSession&) = delete;

  // Sends `script` (declarations and assertions, without check-sat), checks
  // satisfiability and, if satisfiable, fetches the values of `terms`.
  CheckOutcome check(const std::string& script, const std::vector<std::string>& terms);

  const SolverConfig& config() const { return config_; }

 private:
  void start();
  void stop();
  void send(const std::string& text, std::chrono::steady_clock::time_point deadline);
  SExp receive(std::chrono::steady_clock::time_point deadline);
  [[noreturn]] void fail(const std::string& what);

  SolverConfig config_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

struct SmtStats {
  std::size_t queries = 0;
  double seconds = 0.0;
};

// Everything a verification run needs to talk to the solver: the session,
// optional dumping of every query as a standalone numbered .smt2 file, and
// counters.
class SmtContext {
 public:
  explicit SmtContext(SolverConfig config, std::optional<std::filesystem::path> emit_dir = std::nullopt);

  // `label` names the dumped file ("<NNNN>-<label>.smt2").
  CheckOutcome check(const std::string& label, const std::string& script, const std::vector<std::string>& terms);

  const SmtStats& stats() const { return stats_; }
  const SolverConfig& config() const { return session_.config(); }

 private:
  SolverSession session_;
  std::optional<std::filesystem::path> emit_dir_;
  std::size_t counter_ = 0;
  SmtStats stats_;
};

}  // namespace ppv::smt
