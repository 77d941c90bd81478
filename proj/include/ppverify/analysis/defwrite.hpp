#pragma once

#include <map>
#include <optional>
#include <string>

#include "ppverify/analysis/values.hpp"
#include "ppverify/fs/expr.hpp"

namespace ppv::analysis {

// Abstract final value of a path over all successful runs:
// ⊥ (never written) ⊏ DNE, Dir, File(c) ⊏ ⊤ (not one fixed value).
struct DefValue {
  enum class Kind { Bot, Dne, Dir, File, Top };
  Kind kind = Kind::Bot;
  fs::ContentId content;  // File only

  static DefValue bot() { return {}; }
  static DefValue top() { return {Kind::Top, {}}; }
  bool definite() const { return kind != Kind::Bot && kind != Kind::Top; }
  std::string str() const;
  bool operator==(const DefValue&) const = default;
};

// Touched paths -> abstract final value. Untouched paths (⊥) are omitted.
using DefWriteSummary = std::map<fs::Path, DefValue>;

// Path-sensitive definitive-write analysis. Each path carries the set of
// values it may hold; guards refine those sets, Error branches contribute
// nothing (they produce no final state), and branch results are unioned. A
// written path whose final set is a singleton is a definitive write.
DefWriteSummary defwrite_abstract(const fs::Expr& e);

DefValue defwrite_at(const DefWriteSummary& s, const fs::Path& p);

// Whether e can complete normally on some input, as far as the analysis can
// tell (false means e errors on every input).
bool may_succeed(const fs::Expr& e);

}  // namespace ppv::analysis
