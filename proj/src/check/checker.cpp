#include "ppverify/check/checker.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>

#include "ppverify/analysis/prune.hpp"
#include "ppverify/analysis/values.hpp"
#include "ppverify/fs/oracle.hpp"
#include "ppverify/smt/dom.hpp"
#include "ppverify/smt/encoder.hpp"
#include "ppverify/smt/equiv.hpp"

namespace ppv::check {

const char* verdict_name(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Deterministic:
      return "deterministic";
    case Verdict::Kind::NonDeterministic:
      return "non-deterministic";
    case Verdict::Kind::Idempotent:
      return "idempotent";
    case Verdict::Kind::NonIdempotent:
      return "non-idempotent";
    case Verdict::Kind::InvariantHolds:
      return "invariant-holds";
    case Verdict::Kind::InvariantViolated:
      return "invariant-violated";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string state_key(const smt::LogicalState& s) {
  std::string key = s.ok;
  for (const std::string& t : s.fs) {
    key += '|';
    key += t;
  }
  return key;
}

// One explored ordering: the final symbolic state and the vertices in the
// order they ran.
struct Branch {
  smt::LogicalState state;
  std::vector<std::size_t> order;
};

// Enumerates the interleavings of the alive vertices, symbolically.
class Explorer {
 public:
  Explorer(const analysis::CompiledGraph& g, const std::vector<fs::Expr>& exprs, const analysis::Reachability& reach,
           smt::Encoder& enc, const CheckOptions& options, std::function<bool(std::size_t, std::size_t)> commute,
           CheckStats& stats)
      : g_(g),
        exprs_(exprs),
        reach_(reach),
        enc_(enc),
        options_(options),
        commute_(std::move(commute)),
        stats_(stats),
        start_(Clock::now()) {}

  // Distinct finals (by state) reachable from `state` running `residual`.
  std::vector<Branch> run(const std::vector<bool>& residual, const smt::LogicalState& state) {
    std::string key;
    key.reserve(residual.size() + 64);
    for (bool b : residual) key += b ? '1' : '0';
    key += '#';
    key += state_key(state);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    std::vector<std::size_t> live;
    for (std::size_t v = 0; v < residual.size(); ++v) {
      if (residual[v]) live.push_back(v);
    }
    std::vector<Branch> out;
    if (live.empty()) {
      out.push_back(Branch{state, {}});
      memo_.emplace(std::move(key), out);
      return out;
    }
    std::vector<std::size_t> sources;
    for (std::size_t v : live) {
      bool source = std::none_of(live.begin(), live.end(), [&](std::size_t u) { return u != v && reach_[u][v]; });
      if (source) sources.push_back(v);
    }
    if (options_.por) {
      for (std::size_t s : sources) {
        bool independent = std::all_of(live.begin(), live.end(), [&](std::size_t u) { return u == s || commute_(s, u); });
        if (independent) {
          sources = {s};
          break;
        }
      }
    }
    std::set<std::string> seen;
    for (std::size_t s : sources) {
      tick();
      smt::LogicalState next = enc_.step(exprs_[s], state);
      std::vector<bool> rest = residual;
      rest[s] = false;
      for (Branch& b : run(rest, next)) {
        if (!seen.insert(state_key(b.state)).second) continue;
        b.order.insert(b.order.begin(), s);
        out.push_back(std::move(b));
      }
    }
    memo_.emplace(std::move(key), out);
    return out;
  }

 private:
  void tick() {
    ++stats_.branches;
    if (stats_.branches > options_.branch_budget) {
      throw BudgetExceeded("exploration exceeded the budget of " + std::to_string(options_.branch_budget) +
                           " steps");
    }
    if (options_.time_budget && Clock::now() - start_ > *options_.time_budget) {
      throw BudgetExceeded("exploration exceeded the time budget of " +
                           std::to_string(options_.time_budget->count()) + " s");
    }
  }

  const analysis::CompiledGraph& g_;
  const std::vector<fs::Expr>& exprs_;
  const analysis::Reachability& reach_;
  smt::Encoder& enc_;
  const CheckOptions& options_;
  std::function<bool(std::size_t, std::size_t)> commute_;
  CheckStats& stats_;
  Clock::time_point start_;
  std::map<std::string, std::vector<Branch>> memo_;
};

bool model_true(const smt::CheckOutcome& out, const std::string& name) {
  auto it = out.values.find(name);
  return it != out.values.end() && it->second.is("true");
}

}  // namespace

Checker::Checker(analysis::CompiledGraph graph, smt::SmtContext& ctx, CheckOptions options)
    : graph_(std::move(graph)), ctx_(ctx), options_(options) {
  for (const auto& [a, b] : graph_.edges) {
    if (a >= graph_.size() || b >= graph_.size()) throw InternalError("edge refers to a missing vertex");
  }
}

bool Checker::commute(std::size_t a, std::size_t b) {
  auto key = std::minmax(a, b);
  if (auto it = commute_cache_.find(key); it != commute_cache_.end()) return it->second;
  bool result = analysis::commutes(summaries_[a], summaries_[b]);
  if (!result && options_.semantic_commute) {
    const fs::Expr& x = graph_.exprs[a];
    const fs::Expr& y = graph_.exprs[b];
    result = smt::equivalent(fs::Expr::seq(x, y), fs::Expr::seq(y, x), ctx_, "commute");
  }
  commute_cache_.emplace(key, result);
  return result;
}

fs::EvalResult Checker::run_order(const std::vector<std::size_t>& order, const fs::FileSystem& input) const {
  fs::EvalResult r = fs::EvalResult::ok(input);
  for (std::size_t v : order) r = fs::eval(graph_.exprs[v], r);
  return r;
}

Verdict Checker::check_determinism() {
  Clock::time_point start = Clock::now();
  smt::SmtStats smt_before = ctx_.stats();
  stats_ = CheckStats{};
  commute_cache_.clear();
  deterministic_.reset();
  const std::size_t n = graph_.size();
  stats_.resources = n;

  std::vector<std::size_t> cycle;
  if (analysis::has_cycle(graph_, &cycle)) throw InternalError("determinism check on a cyclic graph");
  reach_ = analysis::reachability(graph_);
  summaries_.clear();
  for (const fs::Expr& e : graph_.exprs) summaries_.push_back(analysis::comm_abstract(e));

  if (options_.elim) {
    elimination_ = analysis::eliminate_resources(graph_, summaries_, reach_);
  } else {
    elimination_ = analysis::Elimination{{}, std::vector<bool>(n, true)};
  }
  stats_.eliminated = elimination_.order.size();
  stats_.explored_resources = elimination_.alive_count();

  // Pruned programs.
  std::vector<fs::Expr> exprs = graph_.exprs;
  pruned_.assign(n, {});
  fs::PathSet written_before;
  for (const fs::Expr& e : graph_.exprs) analysis::collect_written_paths(e, written_before);
  if (options_.prune) {
    std::vector<fs::PathSet> candidates = analysis::select_prunable_paths(graph_.exprs);
    for (std::size_t v = 0; v < n; ++v) {
      if (candidates[v].empty()) continue;
      exprs[v] = analysis::prune_greedy(candidates[v], graph_.exprs[v], &pruned_[v]);
      stats_.pruned_paths += pruned_[v].size();
    }
  }
  fs::PathSet written_after;
  for (const fs::Expr& e : exprs) analysis::collect_written_paths(e, written_after);
  stats_.written_paths_unpruned = written_before.size();
  stats_.written_paths = written_after.size();

  fs::ContentSet named;
  for (const fs::Expr& e : exprs) fs::collect_contents(e, named);
  smt::Encoder enc(smt::dom_bound(exprs), named, fs::anonymous_contents_needed(exprs));
  stats_.domain_size = enc.paths().size();

  Explorer explorer(graph_, exprs, reach_, enc, options_, [this](std::size_t a, std::size_t b) { return commute(a, b); },
                    stats_);
  std::vector<Branch> branches = explorer.run(elimination_.alive, enc.input());

  // The eliminated tail, run after every explored branch.
  std::vector<std::size_t> tail(elimination_.order.rbegin(), elimination_.order.rend());
  std::vector<Branch> finals;
  std::set<std::string> seen;
  for (Branch& b : branches) {
    smt::LogicalState s = b.state;
    for (std::size_t v : tail) s = enc.step(exprs[v], s);
    if (!seen.insert(state_key(s)).second) continue;
    b.order.insert(b.order.end(), tail.begin(), tail.end());
    finals.push_back(Branch{std::move(s), std::move(b.order)});
  }
  stats_.final_states = finals.size();

  auto finish = [&](Verdict v) {
    stats_.solver_queries = ctx_.stats().queries - smt_before.queries;
    stats_.solver_seconds = ctx_.stats().seconds - smt_before.seconds;
    stats_.seconds = seconds_since(start);
    deterministic_ = v.kind == Verdict::Kind::Deterministic;
    return v;
  };

  if (finals.size() <= 1) return finish(Verdict{});

  // Some branch ends in a different state than branch 0.
  smt::Encoder success_query = enc;
  std::vector<std::string> terms = enc.input_names();
  std::vector<std::string> names;
  std::vector<std::string> disjuncts;
  for (std::size_t i = 1; i < finals.size(); ++i) {
    std::string d = enc.name_bool(enc.differ(finals[i].state, finals[0].state));
    names.push_back(d);
    disjuncts.push_back(d);
    terms.push_back(d);
  }
  enc.assert_(enc.mk_or(disjuncts));
  smt::CheckOutcome out = ctx_.check("determinism", enc.script(), terms);
  if (out.result == smt::SatResult::Unknown) throw SolverFailure("solver answered 'unknown' for determinism");
  if (out.result == smt::SatResult::Unsat) return finish(Verdict{});

  std::size_t diverging = 0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (model_true(out, names[i])) {
      diverging = i + 1;
      break;
    }
  }
  if (diverging == 0) throw InternalError("determinism model names no diverging branch");
  Verdict v;
  v.kind = Verdict::Kind::NonDeterministic;
  v.input = enc.decode_input(out);
  v.order_a = finals[0].order;
  v.order_b = finals[diverging].order;
  v.result_a = run_order(v.order_a, *v.input);
  v.result_b = run_order(v.order_b, *v.input);

  if (v.result_a->is_err() || v.result_b->is_err()) {
    // Prefer a witness where both orderings succeed with different results.
    std::vector<std::string> pair_terms = success_query.input_names();
    std::vector<std::tuple<std::size_t, std::size_t, std::string>> pairs;
    std::vector<std::string> any;
    for (std::size_t i = 0; i < finals.size(); ++i) {
      for (std::size_t j = i + 1; j < finals.size(); ++j) {
        const smt::LogicalState& a = finals[i].state;
        const smt::LogicalState& b = finals[j].state;
        std::string d = success_query.name_bool(success_query.mk_and({a.ok, b.ok, success_query.differ(a, b)}));
        pairs.emplace_back(i, j, d);
        any.push_back(d);
        pair_terms.push_back(d);
      }
    }
    success_query.assert_(success_query.mk_or(any));
    smt::CheckOutcome out2 = ctx_.check("determinism-success", success_query.script(), pair_terms);
    if (out2.result == smt::SatResult::Unknown) throw SolverFailure("solver answered 'unknown' for determinism");
    if (out2.result == smt::SatResult::Sat) {
      for (const auto& [i, j, d] : pairs) {
        if (!model_true(out2, d)) continue;
        v.input = success_query.decode_input(out2);
        v.order_a = finals[i].order;
        v.order_b = finals[j].order;
        v.result_a = run_order(v.order_a, *v.input);
        v.result_b = run_order(v.order_b, *v.input);
        break;
      }
    }
  }
  if (*v.result_a == *v.result_b) {
    throw InternalError("non-determinism witness does not replay: input " + v.input->str());
  }
  return finish(std::move(v));
}

void Checker::require_determinism() const {
  if (!deterministic_.has_value() || !*deterministic_) {
    throw DeterminismRequired("this check requires a manifest already shown to be deterministic");
  }
}

fs::Expr Checker::linearize() const {
  std::vector<fs::Expr> parts;
  for (std::size_t v : analysis::topological_order(graph_)) parts.push_back(graph_.exprs[v]);
  return fs::sequence(parts);
}

Verdict Checker::check_idempotence() {
  require_determinism();
  fs::Expr once = linearize();
  std::optional<smt::Inequivalence> diff = smt::check_equiv(once, fs::Expr::seq(once, once), ctx_, "idempotence");
  Verdict v;
  if (!diff) {
    v.kind = Verdict::Kind::Idempotent;
    return v;
  }
  v.kind = Verdict::Kind::NonIdempotent;
  v.input = diff->input;
  std::vector<std::size_t> order = analysis::topological_order(graph_);
  v.order_a = order;
  v.result_a = diff->first;
  v.result_b = diff->second;
  return v;
}

Verdict Checker::check_invariant_file(const fs::Path& p, const fs::ContentId& c) {
  require_determinism();
  fs::Expr e = linearize();
  std::array<fs::Expr, 1> exprs{e};
  fs::ContentSet named = fs::mentioned_contents(e);
  named.insert(c);
  smt::Encoder enc(smt::dom_bound(exprs, fs::PathSet{p}), named, fs::anonymous_contents_needed({e}));
  smt::LogicalState final_state = enc.step(e, enc.input());
  std::string at_p = final_state.fs[enc.index_of(p)];
  enc.assert_(enc.mk_and({final_state.ok, enc.mk_not(enc.mk_state_eq(at_p, enc.file_literal(c)))}));
  smt::CheckOutcome out = ctx_.check("invariant", enc.script(), enc.input_names());
  if (out.result == smt::SatResult::Unknown) throw SolverFailure("solver answered 'unknown' for an invariant");
  Verdict v;
  if (out.result == smt::SatResult::Unsat) {
    v.kind = Verdict::Kind::InvariantHolds;
    return v;
  }
  v.kind = Verdict::Kind::InvariantViolated;
  v.input = enc.decode_input(out);
  v.order_a = analysis::topological_order(graph_);
  v.result_a = fs::eval(e, *v.input);
  const fs::FileContent* got = v.result_a->is_ok() ? v.result_a->fs().find(p) : nullptr;
  bool violated = v.result_a->is_ok() && (got == nullptr || *got != fs::FileContent::file(c));
  if (!violated) throw InternalError("invariant witness does not replay: input " + v.input->str());
  return v;
}

std::vector<std::vector<std::size_t>> all_topological_orders(const analysis::CompiledGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> succ(n);
  for (const auto& [a, b] : g.edges) {
    succ[a].push_back(b);
    ++indegree[b];
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> prefix;
  std::vector<bool> used(n, false);
  std::function<void()> go = [&] {
    if (prefix.size() == n) {
      out.push_back(prefix);
      return;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v] || indegree[v] != 0) continue;
      used[v] = true;
      prefix.push_back(v);
      for (std::size_t w : succ[v]) --indegree[w];
      go();
      for (std::size_t w : succ[v]) ++indegree[w];
      prefix.pop_back();
      used[v] = false;
    }
  };
  go();
  return out;
}

std::optional<BruteForceDivergence> brute_force_determinism(const analysis::CompiledGraph& g) {
  std::vector<std::vector<std::size_t>> orders = all_topological_orders(g);
  if (orders.size() <= 1) return std::nullopt;
  fs::ContentSet named;
  for (const fs::Expr& e : g.exprs) fs::collect_contents(e, named);
  fs::PathSet dom = smt::dom_bound(g.exprs);
  std::optional<BruteForceDivergence> found;
  auto run = [&](const std::vector<std::size_t>& order, const fs::FileSystem& input) {
    fs::EvalResult r = fs::EvalResult::ok(input);
    for (std::size_t v : order) r = fs::eval(g.exprs[v], r);
    return r;
  };
  fs::for_each_filesystem(
      dom, named,
      [&](const fs::FileSystem& input) {
        fs::EvalResult first = run(orders[0], input);
        for (std::size_t i = 1; i < orders.size(); ++i) {
          if (run(orders[i], input) != first) {
            found = BruteForceDivergence{input, orders[0], orders[i]};
            return false;
          }
        }
        return true;
      },
      fs::anonymous_contents_needed(g.exprs));
  return found;
}

}  // namespace ppv::check
