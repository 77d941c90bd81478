#include "ppverify/fs/sexpr.hpp"

#include <cctype>
#include <vector>

#include "ppverify/error.hpp"

namespace ppv::fs {

namespace {

bool bare_path_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '/' || c == '.' || c == '_' || c == '+' ||
         c == '-';
}

void put_string(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
}

void put_path(std::string& out, const Path& p) {
  std::string s = p.str();
  bool bare = true;
  for (char c : s) bare = bare && bare_path_char(c);
  if (bare) {
    out += s;
  } else {
    put_string(out, s);
  }
}

void print(std::string& out, const Pred& a) {
  switch (a.kind()) {
    case Pred::Kind::True:
      out += "true";
      return;
    case Pred::Kind::False:
      out += "false";
      return;
    case Pred::Kind::Dne:
      out += "(dne ";
      break;
    case Pred::Kind::IsFile:
      out += "(file? ";
      break;
    case Pred::Kind::IsDir:
      out += "(dir? ";
      break;
    case Pred::Kind::IsEmptyDir:
      out += "(empty? ";
      break;
    case Pred::Kind::And:
    case Pred::Kind::Or:
      out += a.kind() == Pred::Kind::And ? "(and " : "(or ";
      print(out, a.lhs());
      out += ' ';
      print(out, a.rhs());
      out += ')';
      return;
    case Pred::Kind::Not:
      out += "(not ";
      print(out, a.lhs());
      out += ')';
      return;
  }
  put_path(out, a.path());
  out += ')';
}

void print(std::string& out, const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Skip:
      out += "skip";
      return;
    case Expr::Kind::Error:
      out += "error";
      return;
    case Expr::Kind::Mkdir:
      out += "(mkdir ";
      put_path(out, e.path());
      out += ')';
      return;
    case Expr::Kind::CreateFile:
      out += "(create ";
      put_path(out, e.path());
      out += ' ';
      put_string(out, e.content().value);
      out += ')';
      return;
    case Expr::Kind::Rm:
      out += "(rm ";
      put_path(out, e.path());
      out += ')';
      return;
    case Expr::Kind::Cp:
      out += "(cp ";
      put_path(out, e.src());
      out += ' ';
      put_path(out, e.path());
      out += ')';
      return;
    case Expr::Kind::Seq: {
      out += "(seq";
      const Expr* cur = &e;
      while (cur->kind() == Expr::Kind::Seq) {
        out += ' ';
        print(out, cur->first());
        cur = &cur->second();
      }
      out += ' ';
      print(out, *cur);
      out += ')';
      return;
    }
    case Expr::Kind::If:
      out += "(if ";
      print(out, e.guard());
      out += ' ';
      print(out, e.then_branch());
      out += ' ';
      print(out, e.else_branch());
      out += ')';
      return;
  }
}

// Minimal recursive-descent reader over the grammar above.
class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Expr whole_expr() {
    Expr e = expr();
    finish();
    return e;
  }

  Pred whole_pred() {
    Pred a = pred();
    finish();
    return a;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("IR syntax error at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
  }

  void finish() {
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) != 0 || c == '(' || c == ')' || c == '"') break;
      ++pos_;
    }
    if (start == pos_) fail("expected a word");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string quoted() {
    expect('"');
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated string");
      char c = text_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= text_.size()) fail("unterminated escape");
        c = text_[pos_++];
      }
      out += c;
    }
    return out;
  }

  Path path() {
    std::string s = peek('"') ? quoted() : word();
    auto p = Path::try_parse(s);
    if (!p) fail("invalid path '" + s + "'");
    return *p;
  }

  Pred pred() {
    if (!peek('(')) {
      std::string w = word();
      if (w == "true") return Pred::true_();
      if (w == "false") return Pred::false_();
      fail("unknown predicate '" + w + "'");
    }
    expect('(');
    std::string head = word();
    Pred out;
    if (head == "dne") {
      out = Pred::dne(path());
    } else if (head == "file?") {
      out = Pred::is_file(path());
    } else if (head == "dir?") {
      out = Pred::is_dir(path());
    } else if (head == "empty?") {
      out = Pred::is_empty_dir(path());
    } else if (head == "and" || head == "or") {
      Pred l = pred();
      Pred r = pred();
      out = head == "and" ? Pred::and_(l, r) : Pred::or_(l, r);
    } else if (head == "not") {
      out = Pred::not_(pred());
    } else {
      fail("unknown predicate '" + head + "'");
    }
    expect(')');
    return out;
  }

  Expr expr() {
    if (!peek('(')) {
      std::string w = word();
      if (w == "skip") return Expr::skip();
      if (w == "error") return Expr::error();
      fail("unknown expression '" + w + "'");
    }
    expect('(');
    std::string head = word();
    Expr out;
    if (head == "mkdir") {
      out = Expr::mkdir(path());
    } else if (head == "create") {
      Path p = path();
      out = Expr::create_file(p, ContentId{quoted()});
    } else if (head == "rm") {
      out = Expr::rm(path());
    } else if (head == "cp") {
      Path src = path();
      Path dst = path();
      out = Expr::cp(src, dst);
    } else if (head == "seq") {
      std::vector<Expr> parts;
      while (!peek(')')) parts.push_back(expr());
      if (parts.size() < 2) fail("seq needs at least two parts");
      out = parts.back();
      for (std::size_t i = parts.size() - 1; i-- > 0;) out = Expr::seq(parts[i], out);
    } else if (head == "if") {
      Pred g = pred();
      Expr t = expr();
      Expr f = expr();
      out = Expr::if_(g, t, f);
    } else {
      fail("unknown expression '" + head + "'");
    }
    expect(')');
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_sexpr(const Expr& e) {
  std::string out;
  print(out, e);
  return out;
}

std::string to_sexpr(const Pred& a) {
  std::string out;
  print(out, a);
  return out;
}

Expr parse_expr(std::string_view text) { return Reader(text).whole_expr(); }
Pred parse_pred(std::string_view text) { return Reader(text).whole_pred(); }

}  // namespace ppv::fs
