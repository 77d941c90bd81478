#pragma once

#include <map>
#include <string>

#include "ppverify/fs/expr.hpp"

namespace ppv::analysis {

// Per-path access summary: ⊥ (untouched) ⊏ R, D ⊏ W. D marks paths that are
// only ever created with the idempotent idemdir pattern under a parent that
// is itself D (or the root).
enum class Access { Bot, R, D, W };

const char* access_name(Access a);
Access join(Access a, Access b);

struct CommSummary {
  std::map<fs::Path, Access> access;  // ⊥ entries omitted; the root is never tracked
  // Paths whose set of children is observed (Rm and emptiness tests).
  fs::PathSet children_read;

  Access at(const fs::Path& p) const;
  std::string str() const;
};

CommSummary comm_abstract(const fs::Expr& e);

// Sufficient condition for Seq(e1, e2) ≐ Seq(e2, e1): no path is written by
// one side and read or written by the other, a D path of one side is not
// accessed as R/W by the other, and no path written or created by one side
// has its parent's children observed by the other.
bool commutes(const CommSummary& a, const CommSummary& b);
bool commutes(const fs::Expr& e1, const fs::Expr& e2);

}  // namespace ppv::analysis
