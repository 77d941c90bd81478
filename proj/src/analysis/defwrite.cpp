#include "ppverify/analysis/defwrite.hpp"

namespace ppv::analysis {

using fs::Expr;
using fs::Path;
using fs::Pred;

std::string DefValue::str() const {
  switch (kind) {
    case Kind::Bot:
      return "⊥";
    case Kind::Dne:
      return "dne";
    case Kind::Dir:
      return "dir";
    case Kind::File:
      return "file(\"" + content.value + "\")";
    case Kind::Top:
      return "⊤";
  }
  return "?";
}

namespace {

// Abstract state: per-path value sets (missing = ⊤) and written paths.
struct Flow {
  std::map<Path, ValueSet> vals;
  fs::PathSet touched;

  ValueSet get(const Path& p) const {
    auto it = vals.find(p);
    return it == vals.end() ? ValueSet::top() : it->second;
  }
};

using State = std::optional<Flow>;

// Restricts `s` to states where `a` evaluates to `outcome`. Only atoms are
// refined (non-relationally); nullopt when no state remains.
State refine(const Pred& a, bool outcome, State s) {
  if (!s) return s;
  auto narrow = [&](const Path& p, const ValueSet& v) -> State {
    if (v.empty()) return std::nullopt;
    s->vals[p] = v;
    return s;
  };
  switch (a.kind()) {
    case Pred::Kind::True:
      return outcome ? s : std::nullopt;
    case Pred::Kind::False:
      return outcome ? std::nullopt : s;
    case Pred::Kind::Dne: {
      ValueSet v = s->get(a.path());
      return narrow(a.path(), outcome ? (v.may_dne() ? ValueSet::dne() : ValueSet::none()) : v.without_dne());
    }
    case Pred::Kind::IsFile: {
      ValueSet v = s->get(a.path());
      return narrow(a.path(), outcome ? v.files_only() : v.without_files());
    }
    case Pred::Kind::IsDir: {
      ValueSet v = s->get(a.path());
      return narrow(a.path(), outcome ? (v.may_dir() ? ValueSet::dir() : ValueSet::none()) : v.without_dir());
    }
    case Pred::Kind::IsEmptyDir: {
      if (!outcome) return s;  // may be a non-empty directory
      ValueSet v = s->get(a.path());
      return narrow(a.path(), v.may_dir() ? ValueSet::dir() : ValueSet::none());
    }
    case Pred::Kind::And:
      if (outcome) return refine(a.rhs(), true, refine(a.lhs(), true, std::move(s)));
      return s;
    case Pred::Kind::Or:
      if (!outcome) return refine(a.rhs(), false, refine(a.lhs(), false, std::move(s)));
      return s;
    case Pred::Kind::Not:
      return refine(a.lhs(), !outcome, std::move(s));
  }
  return s;
}

State join(State a, State b) {
  if (!a) return b;
  if (!b) return a;
  Flow out;
  for (const auto& [p, v] : a->vals) {
    auto it = b->vals.find(p);
    if (it != b->vals.end()) out.vals.emplace(p, v.join(it->second));  // missing on one side = ⊤
  }
  out.touched = std::move(a->touched);
  out.touched.insert(b->touched.begin(), b->touched.end());
  return out;
}

State require_dir_parent(const Path& p, State s) {
  if (!s || p.is_root()) return std::nullopt;
  return refine(Pred::is_dir(p.parent()), true, std::move(s));
}

State step(const Expr& e, State s);

State run(const Expr& e, State s) {
  fs::for_each_in_seq(e, [&](const Expr& part) { s = step(part, std::move(s)); });
  return s;
}

State step(const Expr& e, State s) {
  if (!s) return s;
  switch (e.kind()) {
    case Expr::Kind::Skip:
      return s;
    case Expr::Kind::Error:
      return std::nullopt;
    case Expr::Kind::Mkdir:
    case Expr::Kind::CreateFile: {
      const Path& p = e.path();
      s = require_dir_parent(p, std::move(s));
      s = refine(Pred::dne(p), true, std::move(s));
      if (!s) return s;
      s->vals[p] = e.kind() == Expr::Kind::Mkdir ? ValueSet::dir() : ValueSet::file(e.content());
      s->touched.insert(p);
      return s;
    }
    case Expr::Kind::Rm: {
      const Path& p = e.path();
      if (p.is_root()) return std::nullopt;
      s = refine(Pred::dne(p), false, std::move(s));
      if (!s) return s;
      s->vals[p] = ValueSet::dne();
      s->touched.insert(p);
      return s;
    }
    case Expr::Kind::Cp: {
      const Path& dst = e.path();
      s = refine(Pred::is_file(e.src()), true, std::move(s));
      s = require_dir_parent(dst, std::move(s));
      s = refine(Pred::dne(dst), true, std::move(s));
      if (!s) return s;
      s->vals[dst] = s->get(e.src());
      s->touched.insert(dst);
      return s;
    }
    case Expr::Kind::Seq:
      return run(e, std::move(s));
    case Expr::Kind::If: {
      State t = run(e.then_branch(), refine(e.guard(), true, s));
      State f = run(e.else_branch(), refine(e.guard(), false, std::move(s)));
      return join(std::move(t), std::move(f));
    }
  }
  return s;
}

DefValue abstract(const ValueSet& v) {
  if (!v.is_single()) return DefValue::top();
  if (v.single_is_dne()) return {DefValue::Kind::Dne, {}};
  fs::FileContent c = v.single_value();
  if (c.is_dir()) return {DefValue::Kind::Dir, {}};
  return {DefValue::Kind::File, c.content()};
}

}  // namespace

DefWriteSummary defwrite_abstract(const Expr& e) {
  State s = run(e, Flow{});
  DefWriteSummary out;
  if (!s) return out;  // never succeeds: nothing is written on a successful run
  for (const Path& p : s->touched) out.emplace(p, abstract(s->get(p)));
  return out;
}

DefValue defwrite_at(const DefWriteSummary& s, const Path& p) {
  auto it = s.find(p);
  return it == s.end() ? DefValue::bot() : it->second;
}

bool may_succeed(const Expr& e) { return run(e, Flow{}).has_value(); }

}  // namespace ppv::analysis
