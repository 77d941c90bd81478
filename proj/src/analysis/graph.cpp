#include "ppverify/analysis/graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>

#include "ppverify/error.hpp"

namespace ppv::analysis {

namespace {

std::vector<std::vector<std::size_t>> successors(const CompiledGraph& g) {
  std::vector<std::vector<std::size_t>> succ(g.size());
  for (auto [a, b] : g.edges) {
    if (a >= g.size() || b >= g.size()) throw InternalError("edge refers to a missing vertex");
    succ[a].push_back(b);
  }
  return succ;
}

}  // namespace

Reachability reachability(const CompiledGraph& g) {
  auto succ = successors(g);
  Reachability reach(g.size(), std::vector<bool>(g.size(), false));
  for (std::size_t s = 0; s < g.size(); ++s) {
    std::vector<std::size_t> stack(succ[s].begin(), succ[s].end());
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      if (reach[s][v]) continue;
      reach[s][v] = true;
      for (std::size_t w : succ[v]) stack.push_back(w);
    }
  }
  return reach;
}

bool has_cycle(const CompiledGraph& g, std::vector<std::size_t>* cycle) {
  auto succ = successors(g);
  enum Color { White, Grey, Black };
  std::vector<Color> color(g.size(), White);
  std::vector<std::size_t> stack;
  std::function<bool(std::size_t)> dfs = [&](std::size_t v) {
    color[v] = Grey;
    stack.push_back(v);
    for (std::size_t w : succ[v]) {
      if (color[w] == Grey) {
        if (cycle != nullptr) {
          auto it = std::find(stack.begin(), stack.end(), w);
          cycle->assign(it, stack.end());
        }
        return true;
      }
      if (color[w] == White && dfs(w)) return true;
    }
    stack.pop_back();
    color[v] = Black;
    return false;
  };
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (color[v] == White && dfs(v)) return true;
  }
  return false;
}

std::vector<std::size_t> topological_order(const CompiledGraph& g) {
  auto succ = successors(g);
  std::vector<std::size_t> indeg(g.size(), 0);
  for (auto [a, b] : g.edges) ++indeg[b];
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (indeg[v] == 0) ready.push(v);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    std::size_t v = ready.top();
    ready.pop();
    order.push_back(v);
    for (std::size_t w : succ[v]) {
      if (--indeg[w] == 0) ready.push(w);
    }
  }
  if (order.size() != g.size()) throw InternalError("topological_order on a cyclic graph");
  return order;
}

}  // namespace ppv::analysis
