#include "ppverify/smt/dom.hpp"

#include <set>
#include <string>

#include "ppverify/fs/eval.hpp"

namespace ppv::smt {

using fs::Expr;
using fs::Path;
using fs::PathSet;
using fs::Pred;

namespace {

void pred_dom(const Pred& a, PathSet& out, PathSet& needs_child) {
  switch (a.kind()) {
    case Pred::Kind::True:
    case Pred::Kind::False:
      return;
    case Pred::Kind::And:
    case Pred::Kind::Or:
      pred_dom(a.lhs(), out, needs_child);
      pred_dom(a.rhs(), out, needs_child);
      return;
    case Pred::Kind::Not:
      pred_dom(a.lhs(), out, needs_child);
      return;
    case Pred::Kind::IsEmptyDir:
      needs_child.insert(a.path());
      out.insert(a.path());
      return;
    default:
      out.insert(a.path());
  }
}

void expr_dom(const Expr& e, PathSet& out, PathSet& needs_child) {
  fs::for_each_in_seq(e, [&](const Expr& part) {
    switch (part.kind()) {
      case Expr::Kind::Skip:
      case Expr::Kind::Error:
      case Expr::Kind::Seq:
        return;
      case Expr::Kind::Mkdir:
      case Expr::Kind::CreateFile:
        out.insert(part.path());
        return;
      case Expr::Kind::Rm:
        out.insert(part.path());
        needs_child.insert(part.path());
        return;
      case Expr::Kind::Cp:
        out.insert(part.src());
        out.insert(part.path());
        return;
      case Expr::Kind::If:
        pred_dom(part.guard(), out, needs_child);
        expr_dom(part.then_branch(), out, needs_child);
        expr_dom(part.else_branch(), out, needs_child);
        return;
    }
  });
}

std::string pick_fresh(const PathSet& mentioned) {
  std::set<std::string> segments;
  for (const Path& p : mentioned) segments.insert(p.segments().begin(), p.segments().end());
  for (std::size_t n = 0;; ++n) {
    std::string name = "⋆" + std::to_string(n);
    if (!segments.contains(name)) return name;
  }
}

}  // namespace

PathSet dom_bound(std::span<const Expr> exprs, const PathSet& extra) {
  PathSet out = extra;
  PathSet needs_child;
  for (const Expr& e : exprs) expr_dom(e, out, needs_child);
  if (!needs_child.empty()) {
    std::string fresh = pick_fresh(out);
    for (const Path& p : needs_child) out.insert(p.child(fresh));
  }
  return fs::parent_closure(out);
}

PathSet dom_bound(std::span<const Expr> exprs) { return dom_bound(exprs, {}); }

PathSet dom_bound(const Expr& e) { return dom_bound(std::span<const Expr>(&e, 1), {}); }

std::string fresh_child_name(std::span<const Expr> exprs, const PathSet& extra) {
  PathSet out = extra;
  PathSet ignored;
  for (const Expr& e : exprs) expr_dom(e, out, ignored);
  return pick_fresh(out);
}

}  // namespace ppv::smt
