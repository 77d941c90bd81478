#include "ppverify/analysis/commute.hpp"

#include "ppverify/fs/eval.hpp"

namespace ppv::analysis {

using fs::Expr;
using fs::Path;
using fs::Pred;

const char* access_name(Access a) {
  switch (a) {
    case Access::Bot:
      return "⊥";
    case Access::R:
      return "R";
    case Access::D:
      return "D";
    case Access::W:
      return "W";
  }
  return "?";
}

Access join(Access a, Access b) {
  if (a == b || b == Access::Bot) return a;
  if (a == Access::Bot) return b;
  return Access::W;  // R∨D, anything∨W
}

Access CommSummary::at(const Path& p) const {
  auto it = access.find(p);
  return it == access.end() ? Access::Bot : it->second;
}

std::string CommSummary::str() const {
  std::string out;
  for (const auto& [p, a] : access) {
    if (!out.empty()) out += ' ';
    out += p.str() + ":" + access_name(a);
  }
  for (const auto& p : children_read) {
    if (!out.empty()) out += ' ';
    out += p.str() + ":children";
  }
  return out;
}

namespace {

class CommAnalysis {
 public:
  void run(const Expr& e, CommSummary& s) const {
    fs::for_each_in_seq(e, [&](const Expr& part) { step(part, s); });
  }

 private:
  static void read(const Path& p, CommSummary& s) {
    if (p.is_root()) return;
    Access& a = s.access[p];
    if (a == Access::Bot) a = Access::R;  // R stays R, D stays D, W stays W
  }

  static void write(const Path& p, CommSummary& s) {
    if (p.is_root()) return;
    s.access[p] = Access::W;
  }

  static void read_pred(const Pred& a, CommSummary& s) {
    switch (a.kind()) {
      case Pred::Kind::True:
      case Pred::Kind::False:
        return;
      case Pred::Kind::And:
      case Pred::Kind::Or:
        read_pred(a.lhs(), s);
        read_pred(a.rhs(), s);
        return;
      case Pred::Kind::Not:
        read_pred(a.lhs(), s);
        return;
      case Pred::Kind::IsEmptyDir:
        s.children_read.insert(a.path());
        read(a.path(), s);
        return;
      default:
        read(a.path(), s);
    }
  }

  void step(const Expr& e, CommSummary& s) const {
    switch (e.kind()) {
      case Expr::Kind::Skip:
      case Expr::Kind::Error:
        return;
      case Expr::Kind::Mkdir:
      case Expr::Kind::CreateFile:
        if (!e.path().is_root()) read(e.path().parent(), s);
        write(e.path(), s);
        return;
      case Expr::Kind::Rm:
        s.children_read.insert(e.path());
        write(e.path(), s);
        return;
      case Expr::Kind::Cp:
        read(e.src(), s);
        if (!e.path().is_root()) read(e.path().parent(), s);
        write(e.path(), s);
        return;
      case Expr::Kind::Seq:
        run(e, s);
        return;
      case Expr::Kind::If: {
        Path p;
        if (fs::is_idemdir(e, &p) && !p.is_root()) {
          Access cur = s.at(p);
          bool parent_d = p.parent().is_root() || s.at(p.parent()) == Access::D;
          if ((cur == Access::Bot || cur == Access::D) && parent_d) {
            s.access[p] = Access::D;
            return;
          }
        }
        read_pred(e.guard(), s);
        CommSummary t = s;
        run(e.then_branch(), t);
        CommSummary f = s;
        run(e.else_branch(), f);
        s.access.clear();
        for (const auto& [q, a] : t.access) s.access[q] = join(a, f.at(q));
        for (const auto& [q, a] : f.access) s.access[q] = join(t.at(q), a);
        s.children_read = t.children_read;
        s.children_read.insert(f.children_read.begin(), f.children_read.end());
        return;
      }
    }
  }
};

bool read_or_write(Access a) { return a == Access::R || a == Access::W; }
bool creates(Access a) { return a == Access::W || a == Access::D; }

bool one_way(const CommSummary& a, const CommSummary& b) {
  for (const auto& [p, x] : a.access) {
    Access y = b.at(p);
    if (y == Access::Bot) continue;
    if (x == Access::W && y != Access::Bot) return false;             // W vs R/D/W
    if (x == Access::D && read_or_write(y)) return false;             // D vs R/W
    if (x == Access::R && (y == Access::W || y == Access::D)) return false;  // R vs W/D
  }
  for (const auto& [p, x] : a.access) {
    if (creates(x) && !p.is_root() && b.children_read.contains(p.parent())) return false;
  }
  return true;
}

}  // namespace

CommSummary comm_abstract(const Expr& e) {
  CommSummary s;
  CommAnalysis().run(e, s);
  return s;
}

bool commutes(const CommSummary& a, const CommSummary& b) { return one_way(a, b) && one_way(b, a); }

bool commutes(const Expr& e1, const Expr& e2) { return commutes(comm_abstract(e1), comm_abstract(e2)); }

}  // namespace ppv::analysis
