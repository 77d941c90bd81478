#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ppverify/fs/expr.hpp"

namespace ppv::analysis {

// A resource graph after compilation: one expression per vertex and ordering
// edges (first must run before second).
struct CompiledGraph {
  std::vector<std::string> labels;
  std::vector<fs::Expr> exprs;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::size_t size() const { return exprs.size(); }
};

// reach[u][v]: there is a non-empty edge path from u to v.
using Reachability = std::vector<std::vector<bool>>;
Reachability reachability(const CompiledGraph& g);

// Some vertex lies on a cycle. `cycle` (if given) receives one cycle's
// vertices in order.
bool has_cycle(const CompiledGraph& g, std::vector<std::size_t>* cycle = nullptr);

// A topological order breaking ties by smallest index. Precondition: acyclic.
std::vector<std::size_t> topological_order(const CompiledGraph& g);

}  // namespace ppv::analysis
