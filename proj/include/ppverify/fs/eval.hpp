#pragma once

#include <optional>
#include <string>

#include "ppverify/fs/expr.hpp"
#include "ppverify/fs/filesystem.hpp"

namespace ppv::fs {

// Outcome of running an expression: a new filesystem, or the error state.
class EvalResult {
 public:
  static EvalResult ok(FileSystem fs) { return EvalResult(std::move(fs)); }
  static EvalResult err() { return EvalResult(); }

  bool is_ok() const { return fs_.has_value(); }
  bool is_err() const { return !fs_.has_value(); }
  // Precondition: is_ok().
  const FileSystem& fs() const { return *fs_; }

  std::string str() const { return is_ok() ? fs_->str() : "error"; }

  auto operator<=>(const EvalResult&) const = default;
  bool operator==(const EvalResult&) const = default;

 private:
  EvalResult() = default;
  explicit EvalResult(FileSystem fs) : fs_(std::move(fs)) {}

  std::optional<FileSystem> fs_;
};

// Concrete semantics. Both functions are total; side-condition failures are
// reported as EvalResult::err(), never by exceptions.
bool eval_pred(const Pred& a, const FileSystem& fs);
EvalResult eval(const Expr& e, const FileSystem& fs);
// Runs e on the result of r; an error state stays an error state.
EvalResult eval(const Expr& e, const EvalResult& r);

// Paths occurring syntactically in the expression / predicate.
PathSet mentioned_paths(const Expr& e);
PathSet mentioned_paths(const Pred& a);
void collect_paths(const Expr& e, PathSet& out);
void collect_paths(const Pred& a, PathSet& out);

// Content ids occurring in CreateFile nodes.
ContentSet mentioned_contents(const Expr& e);
void collect_contents(const Expr& e, ContentSet& out);

// Source paths of Cp nodes: the only places input contents can flow from.
PathSet copy_sources(const Expr& e);
void collect_copy_sources(const Expr& e, PathSet& out);

}  // namespace ppv::fs
