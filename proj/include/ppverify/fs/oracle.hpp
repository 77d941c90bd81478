#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "ppverify/fs/eval.hpp"

namespace ppv::fs {

// Brute-force reference semantics used as test oracles.

// Calls f on every tree-closed filesystem whose domain is a subset of `paths`
// and whose files hold a member of `contents` or one of `anonymous`
// unnamed contents. Unnamed contents are enumerated up to renaming (the first
// file holding one gets the first token, and so on), which is complete for
// programs that never inspect contents. Stops early when f returns false;
// returns false in that case. Throws InputError if `paths` is not
// parent-closed.
bool for_each_filesystem(const PathSet& paths, const ContentSet& contents,
                         const std::function<bool(const FileSystem&)>& f, std::size_t anonymous = 0);

// Materialized form of for_each_filesystem without unnamed contents.
std::vector<FileSystem> enumerate_filesystems(const PathSet& paths, const ContentSet& contents);

// How many unnamed contents a comparison of the given expressions needs: one
// for untouched input files plus one per distinct copy source, so that every
// pattern of equal/unequal input contents that can reach an output occurs.
std::size_t anonymous_contents_needed(const std::vector<Expr>& exprs);

// An input on which e1 and e2 disagree, if any, over `paths` and `contents`
// plus the needed unnamed contents.
std::optional<FileSystem> oracle_counterexample(const Expr& e1, const Expr& e2, const PathSet& paths,
                                                const ContentSet& contents);

// e1 ≐ e2 on the given bounded domain.
bool oracle_equiv(const Expr& e1, const Expr& e2, const PathSet& paths, const ContentSet& contents);

}  // namespace ppv::fs
