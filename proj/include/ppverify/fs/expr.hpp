#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "ppverify/fs/path.hpp"

namespace ppv::fs {

// Predicates over a filesystem. Immutable, structurally shared term trees.
class Pred {
 public:
  enum class Kind { True, False, Dne, IsFile, IsDir, IsEmptyDir, And, Or, Not };

  Pred();  // True

  static Pred true_();
  static Pred false_();
  static Pred dne(Path p);
  static Pred is_file(Path p);
  static Pred is_dir(Path p);
  static Pred is_empty_dir(Path p);
  static Pred and_(Pred a, Pred b);
  static Pred or_(Pred a, Pred b);
  static Pred not_(Pred a);

  Kind kind() const;
  bool is_atom() const;  // Dne / IsFile / IsDir / IsEmptyDir
  const Path& path() const;  // atoms only
  const Pred& lhs() const;   // And / Or / Not
  const Pred& rhs() const;   // And / Or
  std::size_t hash() const;

  bool operator==(const Pred& other) const;

 private:
  struct Node;
  explicit Pred(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Filesystem-operation expressions. Immutable, structurally shared term trees.
class Expr {
 public:
  enum class Kind { Skip, Error, Mkdir, CreateFile, Rm, Cp, Seq, If };

  Expr();  // Skip

  static Expr skip();
  static Expr error();
  static Expr mkdir(Path p);
  static Expr create_file(Path p, ContentId content);
  static Expr rm(Path p);
  static Expr cp(Path src, Path dst);
  static Expr seq(Expr first, Expr second);
  static Expr if_(Pred guard, Expr then_branch, Expr else_branch);

  Kind kind() const;
  // Target of Mkdir / CreateFile / Rm, destination of Cp.
  const Path& path() const;
  const Path& src() const;              // Cp only
  const ContentId& content() const;     // CreateFile only
  const Pred& guard() const;            // If only
  const Expr& first() const;            // Seq: first; If: then-branch
  const Expr& second() const;           // Seq: second; If: else-branch
  const Expr& then_branch() const { return first(); }
  const Expr& else_branch() const { return second(); }
  std::size_t hash() const;
  // Number of nodes (predicates excluded); a cheap size measure.
  std::size_t size() const;

  bool operator==(const Expr& other) const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Kind kind, Path path, Path src, ContentId content, std::vector<Pred> guard,
                   std::vector<Expr> kids);
  std::shared_ptr<const Node> node_;
};

// The guarded, idempotent make-directory form:
//   if dne(p) then mkdir(p) else if file?(p) then error else skip
Expr idemdir(const Path& p);
// Recognizes exactly the form produced by idemdir().
bool is_idemdir(const Expr& e, Path* target = nullptr);

// Right-nested sequence of the given expressions with Skips dropped.
Expr sequence(const std::vector<Expr>& parts);

// Calls f on each non-Seq component of e, left to right.
template <typename F>
void for_each_in_seq(const Expr& e, F&& f) {
  const Expr* cur = &e;
  while (cur->kind() == Expr::Kind::Seq) {
    for_each_in_seq(cur->first(), f);
    cur = &cur->second();
  }
  f(*cur);
}

}  // namespace ppv::fs

template <>
struct std::hash<ppv::fs::Expr> {
  std::size_t operator()(const ppv::fs::Expr& e) const noexcept { return e.hash(); }
};
template <>
struct std::hash<ppv::fs::Pred> {
  std::size_t operator()(const ppv::fs::Pred& a) const noexcept { return a.hash(); }
};
