#include "ppverify/analysis/eliminate.hpp"

#include <functional>
#include <map>

#include "ppverify/analysis/defwrite.hpp"
#include "ppverify/analysis/values.hpp"
#include "ppverify/fs/eval.hpp"

namespace ppv::analysis {

using fs::Expr;
using fs::Path;
using fs::PathSet;
using fs::Pred;

std::size_t Elimination::alive_count() const {
  std::size_t n = 0;
  for (bool a : alive) n += a ? 1 : 0;
  return n;
}

Elimination eliminate_resources(const CompiledGraph& g, const std::vector<CommSummary>& summaries,
                                const Reachability& reach) {
  Elimination out;
  out.alive.assign(g.size(), true);
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (!out.alive[v]) continue;
      bool removable = true;
      for (std::size_t u = 0; u < g.size() && removable; ++u) {
        if (u == v || !out.alive[u]) continue;
        if (reach[v][u]) removable = false;  // not a sink
        else if (!reach[u][v] && !commutes(summaries[v], summaries[u])) removable = false;
      }
      if (removable) {
        out.alive[v] = false;
        out.order.push_back(v);
        progress = true;
        break;
      }
    }
  }
  return out;
}

namespace {

void collect_children_observed(const Pred& a, PathSet& out) {
  switch (a.kind()) {
    case Pred::Kind::IsEmptyDir:
      out.insert(a.path());
      return;
    case Pred::Kind::And:
    case Pred::Kind::Or:
      collect_children_observed(a.lhs(), out);
      collect_children_observed(a.rhs(), out);
      return;
    case Pred::Kind::Not:
      collect_children_observed(a.lhs(), out);
      return;
    default:
      return;
  }
}

// Paths whose children e observes (Rm and emptiness tests).
void collect_children_observed(const Expr& e, PathSet& out) {
  fs::for_each_in_seq(e, [&](const Expr& part) {
    if (part.kind() == Expr::Kind::Rm) {
      out.insert(part.path());
    } else if (part.kind() == Expr::Kind::If) {
      collect_children_observed(part.guard(), out);
      collect_children_observed(part.then_branch(), out);
      collect_children_observed(part.else_branch(), out);
    }
  });
}

struct Footprint {
  PathSet mentioned;
  PathSet children_observed;
};

// Whether the footprint touches p in a way that interferes with pruning it.
bool touches(const Footprint& f, const Path& p) {
  // p and its descendants form a contiguous range starting at p.
  auto it = f.mentioned.lower_bound(p);
  if (it != f.mentioned.end() && (*it == p || p.is_ancestor_of(*it))) return true;
  return !p.is_root() && f.children_observed.contains(p.parent());
}

// Paths whose final value may depend on a shared path: written under a
// guard that reads a shared path (when both branches can succeed), or copied
// from one.
void collect_tainted(const Expr& e, const std::function<bool(const Path&)>& shared, PathSet& tainted,
                     bool under_taint) {
  fs::for_each_in_seq(e, [&](const Expr& part) {
    switch (part.kind()) {
      case Expr::Kind::Mkdir:
      case Expr::Kind::CreateFile:
      case Expr::Kind::Rm:
        if (under_taint) tainted.insert(part.path());
        return;
      case Expr::Kind::Cp:
        if (under_taint || shared(part.src()) || tainted.contains(part.src())) tainted.insert(part.path());
        return;
      case Expr::Kind::If: {
        bool guard_shared = false;
        for (const Path& q : fs::mentioned_paths(part.guard())) {
          if (shared(q) || tainted.contains(q)) guard_shared = true;
        }
        bool both = !always_errors(part.then_branch()) && !always_errors(part.else_branch());
        bool t = under_taint || (guard_shared && both);
        collect_tainted(part.then_branch(), shared, tainted, t);
        collect_tainted(part.else_branch(), shared, tainted, t);
        return;
      }
      default:
        return;
    }
  });
}

}  // namespace

std::vector<PathSet> select_prunable_paths(const std::vector<Expr>& exprs) {
  std::vector<Footprint> feet(exprs.size());
  for (std::size_t v = 0; v < exprs.size(); ++v) {
    fs::collect_paths(exprs[v], feet[v].mentioned);
    collect_children_observed(exprs[v], feet[v].children_observed);
  }
  auto touched_by_other = [&](std::size_t v, const Path& p) {
    for (std::size_t u = 0; u < exprs.size(); ++u) {
      if (u != v && touches(feet[u], p)) return true;
    }
    return false;
  };

  std::vector<PathSet> out(exprs.size());
  for (std::size_t v = 0; v < exprs.size(); ++v) {
    PathSet candidates;
    for (const Path& p : written_paths(exprs[v])) {
      if (!p.is_root() && !touched_by_other(v, p)) candidates.insert(p);
    }
    if (candidates.empty()) continue;

    std::map<Path, bool> shared_memo;
    auto shared = [&](const Path& q) {
      auto it = shared_memo.find(q);
      if (it != shared_memo.end()) return it->second;
      return shared_memo[q] = touched_by_other(v, q);
    };
    // Taint propagates through copies and guards; iterate to a fixpoint.
    PathSet tainted;
    while (true) {
      std::size_t before = tainted.size();
      collect_tainted(exprs[v], shared, tainted, false);
      if (tainted.size() == before) break;
    }
    DefWriteSummary defs = defwrite_abstract(exprs[v]);
    for (const Path& p : candidates) {
      if (defwrite_at(defs, p).definite() || !tainted.contains(p)) out[v].insert(p);
    }
  }
  return out;
}

}  // namespace ppv::analysis
