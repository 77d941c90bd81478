#include "ppverify/analysis/prune.hpp"

#include <map>
#include <optional>

#include "ppverify/analysis/values.hpp"
#include "ppverify/fs/eval.hpp"

namespace ppv::analysis {

using fs::Expr;
using fs::Path;
using fs::PathSet;
using fs::Pred;

namespace {

enum class Written { No, Maybe, Yes };

struct Entry {
  Written written = Written::No;
  ValueSet value = ValueSet::top();  // value in the original program's state
};

// Store over the pruned paths; nullopt = unreachable.
using Store = std::optional<std::map<Path, Entry>>;

Pred pand(Pred a, Pred b) {
  if (a.kind() == Pred::Kind::False || b.kind() == Pred::Kind::False) return Pred::false_();
  if (a.kind() == Pred::Kind::True) return b;
  if (b.kind() == Pred::Kind::True) return a;
  return Pred::and_(std::move(a), std::move(b));
}

Pred por(Pred a, Pred b) {
  if (a.kind() == Pred::Kind::True || b.kind() == Pred::Kind::True) return Pred::true_();
  if (a.kind() == Pred::Kind::False) return b;
  if (b.kind() == Pred::Kind::False) return a;
  return Pred::or_(std::move(a), std::move(b));
}

Pred pnot(Pred a) {
  if (a.kind() == Pred::Kind::True) return Pred::false_();
  if (a.kind() == Pred::Kind::False) return Pred::true_();
  return Pred::not_(std::move(a));
}

Expr guard_expr(const Pred& cond) {
  if (cond.kind() == Pred::Kind::True) return Expr::skip();
  if (cond.kind() == Pred::Kind::False) return Expr::error();
  return Expr::if_(cond, Expr::skip(), Expr::error());
}

class Pruner {
 public:
  explicit Pruner(const PathSet& paths) : paths_(paths) {
    for (const Path& p : paths_) {
      if (p.is_root()) throw PruneInapplicable(p, "the root cannot be pruned");
    }
  }

  std::pair<Expr, Store> run(const Expr& e, Store s) {
    std::vector<Expr> parts;
    bool dead = false;
    fs::for_each_in_seq(e, [&](const Expr& part) {
      if (dead) return;
      auto [out, next] = step(part, std::move(s));
      parts.push_back(std::move(out));
      s = std::move(next);
      dead = !s.has_value();
    });
    return {fs::sequence(parts), std::move(s)};
  }

 private:
  bool pruned(const Path& p) const { return paths_.contains(p); }

  static Entry& entry(std::map<Path, Entry>& m, const Path& p) { return m[p]; }

  // Written pruned children of p (whose real state differs from the original).
  std::vector<Path> written_children(const Path& p, const std::map<Path, Entry>& m) const {
    std::vector<Path> out;
    for (auto it = m.upper_bound(p); it != m.end() && p.is_ancestor_of(it->first); ++it) {
      if (p.is_parent_of(it->first) && it->second.written != Written::No) out.push_back(it->first);
    }
    return out;
  }

  // Folds one atom against the store. Unwritten pruned paths and unpruned
  // paths are read from the real state, which matches the original there.
  Pred fold_atom(const Pred& a, const std::map<Path, Entry>& m) const {
    const Path& p = a.path();
    if (a.kind() == Pred::Kind::IsEmptyDir) {
      std::optional<bool> decided;
      auto self = m.find(p);
      bool self_written = pruned(p) && self != m.end() && self->second.written != Written::No;
      if (self_written && !self->second.value.may_dir()) decided = false;
      for (const Path& c : written_children(p, m)) {
        if (!m.at(c).value.may_dne()) decided = false;  // a child definitely exists
      }
      if (decided) return Pred::false_();
      if (self_written) throw PruneInapplicable(p, "emptiness of a pruned directory is not decided");
      if (!written_children(p, m).empty()) {
        throw PruneInapplicable(written_children(p, m).front(), "parent's emptiness depends on it");
      }
      return a;
    }
    if (!pruned(p)) return a;
    auto it = m.find(p);
    if (it == m.end()) return a;
    bool written = it->second.written != Written::No;
    const ValueSet& v = it->second.value;
    switch (a.kind()) {
      case Pred::Kind::Dne:
        if (v.only_dne()) return Pred::true_();
        if (!v.may_dne()) return Pred::false_();
        break;
      case Pred::Kind::IsFile:
        if (v.only_file()) return Pred::true_();
        if (!v.may_file()) return Pred::false_();
        break;
      case Pred::Kind::IsDir:
        if (v.only_dir()) return Pred::true_();
        if (!v.may_dir()) return Pred::false_();
        break;
      default:
        break;
    }
    // Unwritten pruned paths still hold the original's value in the real state.
    if (!written) return a;
    throw PruneInapplicable(p, "read of a pruned path is not decided");
  }

  Pred fold(const Pred& a, const std::map<Path, Entry>& m) const {
    switch (a.kind()) {
      case Pred::Kind::True:
      case Pred::Kind::False:
        return a;
      case Pred::Kind::And:
        return pand(fold(a.lhs(), m), fold(a.rhs(), m));
      case Pred::Kind::Or:
        return por(fold(a.lhs(), m), fold(a.rhs(), m));
      case Pred::Kind::Not:
        return pnot(fold(a.lhs(), m));
      default:
        return fold_atom(a, m);
    }
  }

  // Restricts the pruned paths' values to states where `a` has `outcome`.
  Store refine(const Pred& a, bool outcome, Store s) const {
    if (!s) return s;
    auto narrow = [&](const Path& p, auto&& f) -> Store {
      if (!pruned(p)) return s;
      Entry& en = entry(*s, p);
      en.value = f(en.value);
      if (en.value.empty()) return std::nullopt;
      return s;
    };
    switch (a.kind()) {
      case Pred::Kind::True:
        return outcome ? s : std::nullopt;
      case Pred::Kind::False:
        return outcome ? std::nullopt : s;
      case Pred::Kind::Dne:
        return narrow(a.path(), [&](const ValueSet& v) {
          return outcome ? (v.may_dne() ? ValueSet::dne() : ValueSet::none()) : v.without_dne();
        });
      case Pred::Kind::IsFile:
        return narrow(a.path(), [&](const ValueSet& v) { return outcome ? v.files_only() : v.without_files(); });
      case Pred::Kind::IsDir:
        return narrow(a.path(), [&](const ValueSet& v) {
          return outcome ? (v.may_dir() ? ValueSet::dir() : ValueSet::none()) : v.without_dir();
        });
      case Pred::Kind::IsEmptyDir:
        if (!outcome) return s;
        return narrow(a.path(),
                      [&](const ValueSet& v) { return v.may_dir() ? ValueSet::dir() : ValueSet::none(); });
      case Pred::Kind::And:
        return outcome ? refine(a.rhs(), true, refine(a.lhs(), true, std::move(s))) : s;
      case Pred::Kind::Or:
        return outcome ? s : refine(a.rhs(), false, refine(a.lhs(), false, std::move(s)));
      case Pred::Kind::Not:
        return refine(a.lhs(), !outcome, std::move(s));
    }
    return s;
  }

  static Store join(Store a, Store b) {
    if (!a) return b;
    if (!b) return a;
    std::map<Path, Entry> out;
    auto merge = [&](const Path& p) {
      Entry x = a->count(p) ? a->at(p) : Entry{};
      Entry y = b->count(p) ? b->at(p) : Entry{};
      Entry z;
      z.written = x.written == y.written ? x.written : Written::Maybe;
      z.value = x.value.join(y.value);
      out[p] = z;
    };
    for (const auto& [p, _] : *a) merge(p);
    for (const auto& [p, _] : *b) merge(p);
    return out;
  }

  // A write to the pruned path `p` whose side-condition is `cond`: emit the
  // check, then record the new value.
  std::pair<Expr, Store> pruned_write(const Path& p, const Pred& cond, const ValueSet& value, Store s) {
    Pred folded = fold(cond, *s);
    Expr out = guard_expr(folded);
    s = refine(cond, true, std::move(s));
    if (!s) return {Expr::error(), std::nullopt};
    Entry& en = entry(*s, p);
    en.written = Written::Yes;
    en.value = value;
    return {out, std::move(s)};
  }

  // A write to an unpruned path below a pruned parent: the real parent is
  // the input's, the original's may differ.
  std::optional<Expr> check_unpruned_child(const Path& q, const std::map<Path, Entry>& m) const {
    if (q.is_root()) return std::nullopt;
    Path parent = q.parent();
    if (!pruned(parent)) return std::nullopt;
    auto it = m.find(parent);
    if (it == m.end() || it->second.written == Written::No) return std::nullopt;
    if (!it->second.value.may_dir()) return Expr::error();
    throw PruneInapplicable(parent, "an unpruned child " + q.str() + " is written below it");
  }

  std::pair<Expr, Store> step(const Expr& e, Store s) {
    // Unreachable code: any replacement is exact, so drop its writes.
    if (!s) return {Expr::error(), s};
    switch (e.kind()) {
      case Expr::Kind::Skip:
        return {e, s};
      case Expr::Kind::Error:
        return {e, std::nullopt};
      case Expr::Kind::Mkdir:
      case Expr::Kind::CreateFile: {
        const Path& p = e.path();
        if (p.is_root()) return {Expr::error(), std::nullopt};
        ValueSet value = e.kind() == Expr::Kind::Mkdir ? ValueSet::dir() : ValueSet::file(e.content());
        Pred cond = Pred::and_(Pred::is_dir(p.parent()), Pred::dne(p));
        if (pruned(p)) return pruned_write(p, cond, value, std::move(s));
        if (auto err = check_unpruned_child(p, *s)) return {*err, std::nullopt};
        Store next = refine(cond, true, std::move(s));
        return {e, std::move(next)};
      }
      case Expr::Kind::Rm: {
        const Path& p = e.path();
        if (p.is_root()) return {Expr::error(), std::nullopt};
        Pred cond = Pred::or_(Pred::is_file(p), Pred::is_empty_dir(p));
        if (pruned(p)) return pruned_write(p, cond, ValueSet::dne(), std::move(s));
        // Rm observes p's children.
        Pred folded = fold(Pred::is_empty_dir(p), *s);
        if (folded.kind() == Pred::Kind::False) {
          // p is a non-empty directory in the original; it could still be... a
          // file? No: it has an existing child, so it is a directory.
          return {Expr::error(), std::nullopt};
        }
        Store next = refine(Pred::dne(p), false, std::move(s));
        return {e, std::move(next)};
      }
      case Expr::Kind::Cp: {
        const Path& src = e.src();
        const Path& dst = e.path();
        if (dst.is_root()) return {Expr::error(), std::nullopt};
        bool src_written = pruned(src) && s->count(src) && s->at(src).written != Written::No;
        if (src_written) {
          const ValueSet& v = s->at(src).value;
          if (!v.may_file()) return {Expr::error(), std::nullopt};
          if (!(v.only_file() && v.is_single())) {
            throw PruneInapplicable(src, "copied while its content is not decided");
          }
          // The source is known to be this file: the copy is a create.
          return step(Expr::create_file(dst, v.single_value().content()), std::move(s));
        }
        Pred cond = Pred::and_(Pred::is_file(src), Pred::and_(Pred::is_dir(dst.parent()), Pred::dne(dst)));
        if (pruned(dst)) {
          ValueSet value = (s->count(src) ? s->at(src).value : ValueSet::top()).files_only();
          return pruned_write(dst, cond, value, std::move(s));
        }
        if (auto err = check_unpruned_child(dst, *s)) return {*err, std::nullopt};
        Store next = refine(cond, true, std::move(s));
        return {e, std::move(next)};
      }
      case Expr::Kind::Seq:
        return run(e, std::move(s));
      case Expr::Kind::If: {
        Pred g = fold(e.guard(), *s);
        if (g.kind() == Pred::Kind::True) return run(e.then_branch(), std::move(s));
        if (g.kind() == Pred::Kind::False) return run(e.else_branch(), std::move(s));
        auto [t, ts] = run(e.then_branch(), refine(e.guard(), true, s));
        auto [f, fs_] = run(e.else_branch(), refine(e.guard(), false, std::move(s)));
        Expr out = t == f ? t : Expr::if_(g, t, f);
        return {out, join(std::move(ts), std::move(fs_))};
      }
    }
    return {e, s};
  }

  const PathSet& paths_;
};

}  // namespace

Expr prune(const PathSet& paths, const Expr& e) {
  if (paths.empty()) return e;
  Pruner pruner(paths);
  return pruner.run(e, std::map<Path, Entry>{}).first;
}

Expr prune(const Path& path, const Expr& e) { return prune(PathSet{path}, e); }

Expr prune_greedy(PathSet paths, const Expr& e, PathSet* pruned) {
  paths.erase(Path::root());
  while (true) {
    try {
      Expr out = prune(paths, e);
      if (pruned != nullptr) *pruned = paths;
      return out;
    } catch (const PruneInapplicable& refusal) {
      if (!paths.erase(refusal.path())) {
        // The offending path is not one we asked for; give up on pruning.
        if (pruned != nullptr) pruned->clear();
        return e;
      }
    }
  }
}

}  // namespace ppv::analysis
