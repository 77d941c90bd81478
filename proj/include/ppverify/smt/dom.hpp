#pragma once

#include <span>

#include "ppverify/fs/expr.hpp"

namespace ppv::smt {

// The finite set of paths a symbolic query must model. Every mentioned path,
// the parent of every created/copied-to path, and, for every removal or
// emptiness test of p, one fresh child of p that no program can name (so an
// input may make p non-empty). The result is parent-closed. Fresh children
// share one segment name per query, chosen not to collide with any mentioned
// segment.
fs::PathSet dom_bound(const fs::Expr& e);
fs::PathSet dom_bound(std::span<const fs::Expr> exprs);

// Same, additionally forcing `extra` (and its ancestors) into the domain.
fs::PathSet dom_bound(std::span<const fs::Expr> exprs, const fs::PathSet& extra);

// The fresh segment name used by dom_bound for the given expressions.
std::string fresh_child_name(std::span<const fs::Expr> exprs, const fs::PathSet& extra = {});

}  // namespace ppv::smt
