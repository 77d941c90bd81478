#pragma once

#include <cstddef>
#include <vector>

#include "ppverify/analysis/commute.hpp"
#include "ppverify/analysis/graph.hpp"

namespace ppv::analysis {

struct Elimination {
  // Eliminated vertices in the order they were removed.
  std::vector<std::size_t> order;
  // alive[v]: v still has to be explored.
  std::vector<bool> alive;

  std::size_t alive_count() const;
};

// Repeatedly removes a sink of the alive subgraph (smallest index first) that
// commutes with every alive vertex that is not its ancestor. Each removed
// vertex can be moved to the end of any order of what remains, so the
// checker runs the survivors in every order and then the eliminated ones in
// reverse removal order.
Elimination eliminate_resources(const CompiledGraph& g, const std::vector<CommSummary>& summaries,
                                const Reachability& reach);

// For each vertex, the paths its writes may be pruned from: written only by
// it, not touched by any other vertex (no other vertex mentions the path or
// a descendant, or removes / tests the emptiness of its parent), and either
// definitively written or untainted (its final value does not depend on a
// path another vertex touches).
std::vector<fs::PathSet> select_prunable_paths(const std::vector<fs::Expr>& exprs);

}  // namespace ppv::analysis
