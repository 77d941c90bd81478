#pragma once

#include "ppverify/error.hpp"
#include "ppverify/fs/expr.hpp"

namespace ppv::analysis {

// prune could not remove the writes to `path` without changing behavior
// (some later read of it, or of its parent's children, is not decided).
class PruneInapplicable : public Error {
 public:
  PruneInapplicable(fs::Path path, const std::string& why)
      : Error("cannot prune " + path.str() + ": " + why), path_(std::move(path)) {}
  const fs::Path& path() const { return path_; }

 private:
  fs::Path path_;
};

// Removes every write to the paths in `paths` by partial evaluation. Each
// write becomes a check of its own side-condition (if cond then skip else
// error) while a store records the value the path would have held; later
// reads of a written path are folded from that store. The result errs on
// exactly the same inputs as e and leaves every other path in the same final
// state; pruned paths keep their input state. Throws PruneInapplicable when
// a read cannot be decided (the store is path-sensitive but refuses rather
// than guesses). The root is never pruned.
fs::Expr prune(const fs::PathSet& paths, const fs::Expr& e);
fs::Expr prune(const fs::Path& path, const fs::Expr& e);

// Prunes as many of `paths` as possible: on refusal, drops the offending path
// and retries. `pruned` (if given) receives the paths actually pruned.
fs::Expr prune_greedy(fs::PathSet paths, const fs::Expr& e, fs::PathSet* pruned = nullptr);

}  // namespace ppv::analysis
