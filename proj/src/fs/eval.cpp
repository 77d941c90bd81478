#include "ppverify/fs/eval.hpp"

namespace ppv::fs {

bool eval_pred(const Pred& a, const FileSystem& fs) {
  switch (a.kind()) {
    case Pred::Kind::True:
      return true;
    case Pred::Kind::False:
      return false;
    case Pred::Kind::Dne:
      return !fs.exists(a.path());
    case Pred::Kind::IsFile:
      return fs.is_file(a.path());
    case Pred::Kind::IsDir:
      return fs.is_dir(a.path());
    case Pred::Kind::IsEmptyDir:
      return fs.is_dir(a.path()) && !fs.has_children(a.path());
    case Pred::Kind::And:
      return eval_pred(a.lhs(), fs) && eval_pred(a.rhs(), fs);
    case Pred::Kind::Or:
      return eval_pred(a.lhs(), fs) || eval_pred(a.rhs(), fs);
    case Pred::Kind::Not:
      return !eval_pred(a.lhs(), fs);
  }
  return false;
}

namespace {

// Creating p requires a directory parent and p absent; root cannot be created.
bool can_create(const Path& p, const FileSystem& fs) {
  return !p.is_root() && fs.is_dir(p.parent()) && !fs.exists(p);
}

// Evaluates a single step in place. Returns false on error.
bool step(const Expr& e, FileSystem& fs) {
  switch (e.kind()) {
    case Expr::Kind::Skip:
      return true;
    case Expr::Kind::Error:
      return false;
    case Expr::Kind::Mkdir:
      if (!can_create(e.path(), fs)) return false;
      fs = fs.with(e.path(), FileContent::dir());
      return true;
    case Expr::Kind::CreateFile:
      if (!can_create(e.path(), fs)) return false;
      fs = fs.with(e.path(), FileContent::file(e.content()));
      return true;
    case Expr::Kind::Rm: {
      const Path& p = e.path();
      if (p.is_root()) return false;
      const FileContent* v = fs.find(p);
      if (v == nullptr) return false;
      if (v->is_dir() && fs.has_children(p)) return false;
      fs = fs.without(p);
      return true;
    }
    case Expr::Kind::Cp: {
      const FileContent* v = fs.find(e.src());
      if (v == nullptr || !v->is_file()) return false;
      if (!can_create(e.path(), fs)) return false;
      FileContent copy = *v;
      fs = fs.with(e.path(), std::move(copy));
      return true;
    }
    case Expr::Kind::Seq: {
      bool ok = true;
      for_each_in_seq(e, [&](const Expr& part) { ok = ok && step(part, fs); });
      return ok;
    }
    case Expr::Kind::If:
      return step(eval_pred(e.guard(), fs) ? e.then_branch() : e.else_branch(), fs);
  }
  return false;
}

}  // namespace

EvalResult eval(const Expr& e, const FileSystem& fs) {
  FileSystem cur = fs;
  if (!step(e, cur)) return EvalResult::err();
  return EvalResult::ok(std::move(cur));
}

EvalResult eval(const Expr& e, const EvalResult& r) {
  if (r.is_err()) return r;
  return eval(e, r.fs());
}

void collect_paths(const Pred& a, PathSet& out) {
  switch (a.kind()) {
    case Pred::Kind::True:
    case Pred::Kind::False:
      return;
    case Pred::Kind::And:
    case Pred::Kind::Or:
      collect_paths(a.lhs(), out);
      collect_paths(a.rhs(), out);
      return;
    case Pred::Kind::Not:
      collect_paths(a.lhs(), out);
      return;
    default:
      out.insert(a.path());
  }
}

void collect_paths(const Expr& e, PathSet& out) {
  for_each_in_seq(e, [&](const Expr& part) {
    switch (part.kind()) {
      case Expr::Kind::Skip:
      case Expr::Kind::Error:
      case Expr::Kind::Seq:
        return;
      case Expr::Kind::Mkdir:
      case Expr::Kind::CreateFile:
      case Expr::Kind::Rm:
        out.insert(part.path());
        return;
      case Expr::Kind::Cp:
        out.insert(part.src());
        out.insert(part.path());
        return;
      case Expr::Kind::If:
        collect_paths(part.guard(), out);
        collect_paths(part.then_branch(), out);
        collect_paths(part.else_branch(), out);
        return;
    }
  });
}

PathSet mentioned_paths(const Expr& e) {
  PathSet out;
  collect_paths(e, out);
  return out;
}

PathSet mentioned_paths(const Pred& a) {
  PathSet out;
  collect_paths(a, out);
  return out;
}

void collect_contents(const Expr& e, ContentSet& out) {
  for_each_in_seq(e, [&](const Expr& part) {
    if (part.kind() == Expr::Kind::CreateFile) {
      out.insert(part.content());
    } else if (part.kind() == Expr::Kind::If) {
      collect_contents(part.then_branch(), out);
      collect_contents(part.else_branch(), out);
    }
  });
}

ContentSet mentioned_contents(const Expr& e) {
  ContentSet out;
  collect_contents(e, out);
  return out;
}

void collect_copy_sources(const Expr& e, PathSet& out) {
  for_each_in_seq(e, [&](const Expr& part) {
    if (part.kind() == Expr::Kind::Cp) {
      out.insert(part.src());
    } else if (part.kind() == Expr::Kind::If) {
      collect_copy_sources(part.then_branch(), out);
      collect_copy_sources(part.else_branch(), out);
    }
  });
}

PathSet copy_sources(const Expr& e) {
  PathSet out;
  collect_copy_sources(e, out);
  return out;
}

}  // namespace ppv::fs
