#pragma once

#include <chrono>
#include <map>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ppverify/analysis/commute.hpp"
#include "ppverify/analysis/eliminate.hpp"
#include "ppverify/analysis/graph.hpp"
#include "ppverify/error.hpp"
#include "ppverify/fs/eval.hpp"
#include "ppverify/smt/solver.hpp"

namespace ppv::check {

struct CheckOptions {
  bool por = true;    // commutativity-based partial-order reduction
  bool prune = true;  // pruning of private / definitive writes
  bool elim = true;   // resource elimination
  // Solver-checked commutativity when the syntactic check is inconclusive.
  bool semantic_commute = false;
  std::size_t branch_budget = 10000;
  std::optional<std::chrono::seconds> time_budget = std::chrono::seconds(600);
};

// Numbers describing one determinism check.
struct CheckStats {
  std::size_t resources = 0;
  std::size_t eliminated = 0;
  std::size_t explored_resources = 0;
  std::size_t pruned_paths = 0;
  // Paths written by the programs in the final formula, with and without
  // pruning: the number of paths whose state changes between steps.
  std::size_t written_paths_unpruned = 0;
  std::size_t written_paths = 0;
  std::size_t domain_size = 0;
  std::size_t branches = 0;         // explored orderings (after reduction)
  std::size_t final_states = 0;     // distinct symbolic final states
  std::size_t solver_queries = 0;
  double solver_seconds = 0.0;
  double seconds = 0.0;
};

struct Verdict {
  enum class Kind {
    Deterministic,
    NonDeterministic,
    Idempotent,
    NonIdempotent,
    InvariantHolds,
    InvariantViolated,
  };
  Kind kind = Kind::Deterministic;
  // Counterexample (all but the *Holds / Deterministic / Idempotent kinds).
  std::optional<fs::FileSystem> input;
  // NonDeterministic: two complete resource orderings (vertex indices).
  std::vector<std::size_t> order_a, order_b;
  // NonDeterministic: results of the two orderings; NonIdempotent: results
  // of one and of two runs; InvariantViolated: result_a only.
  std::optional<fs::EvalResult> result_a, result_b;

  bool holds() const {
    return kind == Kind::Deterministic || kind == Kind::Idempotent || kind == Kind::InvariantHolds;
  }
};

const char* verdict_name(Verdict::Kind k);

// Thrown by idempotence / invariant checks when determinism has not been
// established (they are unsound on non-deterministic manifests).
class DeterminismRequired : public Error {
 public:
  using Error::Error;
};

// Runs the checks on one compiled resource graph. Every counterexample is
// replayed with the concrete evaluator on the unreduced programs before it is
// returned; a counterexample that does not replay raises InternalError.
class Checker {
 public:
  Checker(analysis::CompiledGraph graph, smt::SmtContext& ctx, CheckOptions options = {});

  const analysis::CompiledGraph& graph() const { return graph_; }

  Verdict check_determinism();
  // Precondition: check_determinism() returned Deterministic.
  Verdict check_idempotence();
  // "p is a file with content c after every successful run".
  Verdict check_invariant_file(const fs::Path& p, const fs::ContentId& c);

  // The programs in one topological order (ties by vertex index).
  fs::Expr linearize() const;

  const CheckStats& stats() const { return stats_; }
  // Eliminated vertices and pruned paths of the last determinism check.
  const analysis::Elimination& elimination() const { return elimination_; }
  const std::vector<fs::PathSet>& pruned() const { return pruned_; }
  const std::vector<analysis::CommSummary>& summaries() const { return summaries_; }

  // Result of running the vertices in `order` with the unreduced programs.
  fs::EvalResult run_order(const std::vector<std::size_t>& order, const fs::FileSystem& input) const;

 private:
  void require_determinism() const;
  bool commute(std::size_t a, std::size_t b);

  analysis::CompiledGraph graph_;
  smt::SmtContext& ctx_;
  CheckOptions options_;
  analysis::Reachability reach_;
  std::vector<analysis::CommSummary> summaries_;
  analysis::Elimination elimination_;
  std::vector<fs::PathSet> pruned_;
  std::map<std::pair<std::size_t, std::size_t>, bool> commute_cache_;
  std::optional<bool> deterministic_;
  CheckStats stats_;
};

// Brute-force determinism over all topological orders and all inputs on the
// bounded domain of the programs (the graph-level oracle for tests). Returns
// a diverging input and two orders, or nullopt when deterministic.
struct BruteForceDivergence {
  fs::FileSystem input;
  std::vector<std::size_t> order_a, order_b;
};
std::optional<BruteForceDivergence> brute_force_determinism(const analysis::CompiledGraph& g);

// All topological orders of g (for small graphs).
std::vector<std::vector<std::size_t>> all_topological_orders(const analysis::CompiledGraph& g);

}  // namespace ppv::check
