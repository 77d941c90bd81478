#include "ppverify/smt/encoder.hpp"

#include <algorithm>
#include <set>

#include "ppverify/error.hpp"

namespace ppv::smt {

using fs::ContentId;
using fs::Expr;
using fs::Path;
using fs::Pred;

Encoder::Encoder(fs::PathSet dom, fs::ContentSet named, std::size_t anonymous) {
  if (!fs::is_parent_closed(dom)) throw InternalError("query domain is not parent-closed");
  paths_.assign(dom.begin(), dom.end());
  children_.resize(paths_.size());
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    index_.emplace(paths_[i], i);
    if (!paths_[i].is_root()) children_[index_.at(paths_[i].parent())].push_back(i);
    inputs_.push_back("in" + std::to_string(i));
  }
  contents_.assign(named.begin(), named.end());
  for (ContentId& c : fs::anonymous_contents(named, anonymous)) contents_.push_back(std::move(c));
  if (contents_.empty()) contents_ = fs::anonymous_contents(named, 1);
  for (std::size_t i = 0; i < contents_.size(); ++i) content_index_.emplace(contents_[i], i);
}

std::size_t Encoder::index_of(const Path& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) throw InternalError("path outside the query domain: " + p.str());
  return it->second;
}

LogicalState Encoder::input() const { return LogicalState{"true", inputs_}; }

std::string Encoder::define(const char* prefix, const char* sort, const std::string& body) {
  std::string key = std::string(sort) + body;
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  std::string name = prefix + std::to_string(next_name_++);
  defs_.push_back("(define-fun " + name + " () " + sort + " " + body + ")");
  memo_.emplace(std::move(key), name);
  return name;
}

Encoder::Known Encoder::known(const std::string& t) const {
  if (t == "DNE") return Known::Dne;
  if (t == "Dir") return Known::Dir;
  if (t.rfind("(File ", 0) == 0) return Known::File;
  return Known::Unknown;
}

std::string Encoder::file_literal(const ContentId& c) const {
  auto it = content_index_.find(c);
  if (it == content_index_.end()) throw InternalError("content outside the query alphabet: " + c.value);
  return "(File c" + std::to_string(it->second) + ")";
}

std::string Encoder::mk_and(std::vector<std::string> xs) {
  std::vector<std::string> kept;
  std::set<std::string> seen;
  for (auto& x : xs) {
    if (x == "false") return "false";
    if (x == "true" || !seen.insert(x).second) continue;
    kept.push_back(std::move(x));
  }
  if (kept.empty()) return "true";
  if (kept.size() == 1) return kept[0];
  std::string body = "(and";
  for (const auto& x : kept) body += " " + x;
  return define("b", "Bool", body + ")");
}

std::string Encoder::mk_or(std::vector<std::string> xs) {
  std::vector<std::string> kept;
  std::set<std::string> seen;
  for (auto& x : xs) {
    if (x == "true") return "true";
    if (x == "false" || !seen.insert(x).second) continue;
    kept.push_back(std::move(x));
  }
  if (kept.empty()) return "false";
  if (kept.size() == 1) return kept[0];
  std::string body = "(or";
  for (const auto& x : kept) body += " " + x;
  return define("b", "Bool", body + ")");
}

std::string Encoder::mk_not(const std::string& x) {
  if (x == "true") return "false";
  if (x == "false") return "true";
  return define("b", "Bool", "(not " + x + ")");
}

std::string Encoder::mk_ite_bool(const std::string& c, const std::string& a, const std::string& b) {
  if (c == "true" || a == b) return a;
  if (c == "false") return b;
  if (a == "true" && b == "false") return c;
  if (a == "false" && b == "true") return mk_not(c);
  if (a == "false") return mk_and({mk_not(c), b});
  if (b == "false") return mk_and({c, a});
  if (a == "true") return mk_or({c, b});
  if (b == "true") return mk_or({mk_not(c), a});
  return define("b", "Bool", "(ite " + c + " " + a + " " + b + ")");
}

std::string Encoder::mk_ite_state(const std::string& c, const std::string& a, const std::string& b) {
  if (c == "true" || a == b) return a;
  if (c == "false") return b;
  return define("t", "FState", "(ite " + c + " " + a + " " + b + ")");
}

std::string Encoder::mk_state_eq(const std::string& a, const std::string& b) {
  if (a == b) return "true";
  if (known(a) != Known::Unknown && known(b) != Known::Unknown) return "false";  // distinct literals
  return define("b", "Bool", "(= " + a + " " + b + ")");
}

std::string Encoder::is_dne(const std::string& t) {
  switch (known(t)) {
    case Known::Dne:
      return "true";
    case Known::Unknown:
      return define("b", "Bool", "((_ is DNE) " + t + ")");
    default:
      return "false";
  }
}

std::string Encoder::is_dir(const std::string& t) {
  switch (known(t)) {
    case Known::Dir:
      return "true";
    case Known::Unknown:
      return define("b", "Bool", "((_ is Dir) " + t + ")");
    default:
      return "false";
  }
}

std::string Encoder::is_file(const std::string& t) {
  switch (known(t)) {
    case Known::File:
      return "true";
    case Known::Unknown:
      return define("b", "Bool", "((_ is File) " + t + ")");
    default:
      return "false";
  }
}

std::string Encoder::empty_dir(const Path& p, const LogicalState& s) {
  std::size_t i = index_of(p);
  std::vector<std::string> parts{is_dir(s.fs[i])};
  for (std::size_t c : children_[i]) parts.push_back(is_dne(s.fs[c]));
  return mk_and(std::move(parts));
}

std::string Encoder::pred(const Pred& a, const LogicalState& s) {
  switch (a.kind()) {
    case Pred::Kind::True:
      return "true";
    case Pred::Kind::False:
      return "false";
    case Pred::Kind::Dne:
      return is_dne(s.fs[index_of(a.path())]);
    case Pred::Kind::IsFile:
      return is_file(s.fs[index_of(a.path())]);
    case Pred::Kind::IsDir:
      return is_dir(s.fs[index_of(a.path())]);
    case Pred::Kind::IsEmptyDir:
      return empty_dir(a.path(), s);
    case Pred::Kind::And:
      return mk_and({pred(a.lhs(), s), pred(a.rhs(), s)});
    case Pred::Kind::Or:
      return mk_or({pred(a.lhs(), s), pred(a.rhs(), s)});
    case Pred::Kind::Not:
      return mk_not(pred(a.lhs(), s));
  }
  return "false";
}

void Encoder::step_into(const Expr& e, LogicalState& s) {
  if (s.ok == "false") return;  // error is absorbing; later steps are irrelevant
  switch (e.kind()) {
    case Expr::Kind::Skip:
      return;
    case Expr::Kind::Error:
      s.ok = "false";
      return;
    case Expr::Kind::Mkdir:
    case Expr::Kind::CreateFile: {
      const Path& p = e.path();
      if (p.is_root()) {
        s.ok = "false";
        return;
      }
      std::size_t i = index_of(p);
      std::size_t parent = index_of(p.parent());
      s.ok = mk_and({s.ok, is_dir(s.fs[parent]), is_dne(s.fs[i])});
      s.fs[i] = e.kind() == Expr::Kind::Mkdir ? "Dir" : file_literal(e.content());
      return;
    }
    case Expr::Kind::Rm: {
      const Path& p = e.path();
      if (p.is_root()) {
        s.ok = "false";
        return;
      }
      std::size_t i = index_of(p);
      s.ok = mk_and({s.ok, mk_or({is_file(s.fs[i]), empty_dir(p, s)})});
      s.fs[i] = "DNE";
      return;
    }
    case Expr::Kind::Cp: {
      const Path& dst = e.path();
      if (dst.is_root()) {
        s.ok = "false";
        return;
      }
      std::size_t src = index_of(e.src());
      std::size_t i = index_of(dst);
      std::size_t parent = index_of(dst.parent());
      s.ok = mk_and({s.ok, is_file(s.fs[src]), is_dir(s.fs[parent]), is_dne(s.fs[i])});
      s.fs[i] = s.fs[src];
      return;
    }
    case Expr::Kind::Seq:
      fs::for_each_in_seq(e, [&](const Expr& part) { step_into(part, s); });
      return;
    case Expr::Kind::If: {
      std::string g = pred(e.guard(), s);
      if (g == "true") return step_into(e.then_branch(), s);
      if (g == "false") return step_into(e.else_branch(), s);
      LogicalState t{"true", s.fs};
      step_into(e.then_branch(), t);
      LogicalState f{"true", s.fs};
      step_into(e.else_branch(), f);
      std::string ok = mk_ite_bool(g, t.ok, f.ok);
      for (std::size_t i = 0; i < s.fs.size(); ++i) {
        if (t.ok == "false") {
          s.fs[i] = f.fs[i];
        } else if (f.ok == "false") {
          s.fs[i] = t.fs[i];
        } else {
          s.fs[i] = mk_ite_state(g, t.fs[i], f.fs[i]);
        }
      }
      s.ok = mk_and({s.ok, ok});
      return;
    }
  }
}

LogicalState Encoder::step(const Expr& e, const LogicalState& s) {
  LogicalState out = s;
  step_into(e, out);
  return out;
}

std::string Encoder::differ(const LogicalState& a, const LogicalState& b) {
  std::vector<std::string> paths_differ;
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    std::string eq = mk_state_eq(a.fs[i], b.fs[i]);
    if (eq != "true") paths_differ.push_back(mk_not(eq));
  }
  std::string ok_differ = mk_not(mk_ite_bool(a.ok, b.ok, mk_not(b.ok)));
  return mk_or({ok_differ, mk_and({a.ok, b.ok, mk_or(std::move(paths_differ))})});
}

std::string Encoder::name_bool(const std::string& b) {
  if (b.rfind('b', 0) == 0 && b.find(' ') == std::string::npos) return b;  // already a definition
  return define("b", "Bool", "(and " + b + ")");
}

void Encoder::assert_(const std::string& b) { asserts_.push_back(b); }

namespace {

// Text for a trailing ';' comment: control characters (which would end the
// comment early) are escaped.
std::string comment_text(const std::string& text) {
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (c == '\\') {
      out += "\\\\";
    } else if (c < 0x20 || c == 0x7f) {
      out += "\\x";
      out += hex[c >> 4];
      out += hex[c & 15];
    } else {
      out += ch;
    }
  }
  return out;
}

}  // namespace

std::string Encoder::script() const {
  std::string out;
  out += "(set-option :produce-models true)\n";
  out += "(set-logic ALL)\n";
  out += "(declare-datatypes ((Content 0) (FState 0)) ((";
  for (std::size_t i = 0; i < contents_.size(); ++i) out += (i ? " (c" : "(c") + std::to_string(i) + ")";
  out += ") ((DNE) (Dir) (File (content Content)))))\n";
  for (std::size_t i = 0; i < contents_.size(); ++i) {
    out += "; c" + std::to_string(i) + " = " + comment_text(contents_[i].value) + "\n";
  }
  if (contents_.size() >= 2) {
    out += "(assert (distinct";
    for (std::size_t i = 0; i < contents_.size(); ++i) out += " c" + std::to_string(i);
    out += "))\n";
  }
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    out += "(declare-const " + inputs_[i] + " FState) ; " + comment_text(paths_[i].str()) + "\n";
  }
  // Tree-closure of the input: the root is never a file; anything that
  // exists below the root has a directory parent.
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    if (paths_[i].is_root()) {
      out += "(assert (not ((_ is File) " + inputs_[i] + ")))\n";
    } else {
      const std::string& parent = inputs_[index_.at(paths_[i].parent())];
      out += "(assert (or ((_ is DNE) " + inputs_[i] + ") ((_ is Dir) " + parent + ")))\n";
    }
  }
  for (const auto& d : defs_) out += d + "\n";
  for (const auto& a : asserts_) out += "(assert " + a + ")\n";
  return out;
}

fs::FileContent Encoder::decode_value(const SExp& v) const {
  if (v.is("Dir")) return fs::FileContent::dir();
  if (!v.is_atom && v.list.size() == 2 && v.list[0].is("File") && v.list[1].is_atom) {
    const std::string& c = v.list[1].atom;
    if (c.size() >= 2 && c[0] == 'c') {
      std::size_t k = std::stoul(c.substr(1));
      if (k < contents_.size()) return fs::FileContent::file(contents_[k]);
    }
  }
  throw InternalError("cannot decode solver value " + v.str());
}

fs::FileSystem Encoder::decode_input(const CheckOutcome& model) const {
  fs::FileSystem::Map entries;
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    auto it = model.values.find(inputs_[i]);
    if (it == model.values.end()) throw InternalError("model lacks a value for " + inputs_[i]);
    if (it->second.is("DNE")) continue;
    entries.emplace(paths_[i], decode_value(it->second));
  }
  fs::FileSystem out(std::move(entries));
  if (!out.is_tree_closed()) throw InternalError("decoded input violates tree-closure: " + out.str());
  return out;
}

}  // namespace ppv::smt
