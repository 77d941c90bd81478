#pragma once

#include <optional>
#include <set>
#include <string>

#include "ppverify/fs/expr.hpp"
#include "ppverify/fs/filesystem.hpp"

namespace ppv::analysis {

// A set of possible states of one path: any subset of {DNE, Dir} plus either
// "a file with any content" or a finite set of file contents.
class ValueSet {
 public:
  static ValueSet top();
  static ValueSet none();
  static ValueSet dne();
  static ValueSet dir();
  static ValueSet file(const fs::ContentId& c);
  static ValueSet of(const fs::FileContent& v);

  bool empty() const { return !has_dne_ && !has_dir_ && !any_file_ && files_.empty(); }
  bool may_dne() const { return has_dne_; }
  bool may_dir() const { return has_dir_; }
  bool may_file() const { return any_file_ || !files_.empty(); }
  bool only_dne() const { return has_dne_ && !has_dir_ && !may_file(); }
  bool only_dir() const { return has_dir_ && !has_dne_ && !may_file(); }
  bool only_file() const { return may_file() && !has_dne_ && !has_dir_; }

  // The single possible value, if there is exactly one. nullopt for DNE is
  // distinguished by single_is_dne().
  bool is_single() const;
  bool single_is_dne() const { return is_single() && has_dne_; }
  // Precondition: is_single() && !single_is_dne().
  fs::FileContent single_value() const;

  // Restrictions, used to refine by a guard outcome.
  ValueSet files_only() const;
  ValueSet without_files() const;
  ValueSet without_dne() const;
  ValueSet without_dir() const;

  ValueSet join(const ValueSet& other) const;

  std::string str() const;
  bool operator==(const ValueSet&) const = default;

 private:
  bool has_dne_ = false;
  bool has_dir_ = false;
  bool any_file_ = false;
  std::set<fs::ContentId> files_;
};

// True if e errors on every input (syntactically: every path reaches Error).
bool always_errors(const fs::Expr& e);

// Paths that are targets of Mkdir / CreateFile / Rm / Cp.
fs::PathSet written_paths(const fs::Expr& e);
void collect_written_paths(const fs::Expr& e, fs::PathSet& out);

}  // namespace ppv::analysis
