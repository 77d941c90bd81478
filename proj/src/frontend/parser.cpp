#include "ppverify/frontend/parser.hpp"

#include <cctype>
#include <optional>
#include <set>

namespace ppv::frontend {

std::string Value::str() const {
  switch (kind) {
    case Kind::String: {
      if (parts.empty()) return "'" + text + "'";
      std::string out;
      for (const StrPart& p : parts) out += p.is_var ? "${" + p.text + "}" : p.text;
      return "'" + out + "'";
    }
    case Kind::Number:
    case Kind::Bare:
      return text;
    case Kind::Var:
      return "$" + text;
    case Kind::Array:
    case Kind::Ref: {
      std::string out;
      if (kind == Kind::Ref) {
        out = text;
        if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
      }
      out += "[";
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += ", ";
        out += items[i].str();
      }
      return out + "]";
    }
  }
  return "?";
}

bool Value::operator==(const Value& other) const {
  if (kind != other.kind || text != other.text || items != other.items) return false;
  if (kind == Kind::String) {
    if (parts.size() != other.parts.size()) return false;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i].is_var != other.parts[i].is_var || parts[i].text != other.parts[i].text) return false;
    }
  }
  return true;
}

namespace {

enum class Tok {
  End,
  Ident,    // lowercase-initial word (may contain ::)
  TypeRef,  // capitalized word
  Var,      // $name
  SQString,
  DQString,
  Number,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Colon,
  Comma,
  Semi,
  FatArrow,  // =>
  Equals,
  Arrow,      // -> or ~>
  BackArrow,  // <- or <~
  Collector,  // <| or <<|
};

struct Token {
  Tok kind = Tok::End;
  std::string text;             // identifier / variable name / number / SQ string contents
  std::vector<StrPart> parts;   // DQ string
  Location loc;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.loc = loc_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.text = word();
        t.kind = std::isupper(static_cast<unsigned char>(t.text[0])) ? Tok::TypeRef : Tok::Ident;
      } else if (c == '$') {
        advance();
        if (peek() == '{') {
          advance();
          t.text = word();
          expect_char('}', "'}' closing ${...}");
        } else {
          t.text = word();
        }
        if (t.text.empty()) fail(t.loc, "expected a variable name after '$'");
        t.kind = Tok::Var;
      } else if (c == '\'') {
        t.kind = Tok::SQString;
        t.text = single_quoted();
      } else if (c == '"') {
        t.kind = Tok::DQString;
        t.parts = double_quoted();
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        t.kind = Tok::Number;
        t.text.push_back(c);
        advance();
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '.')) {
          t.text.push_back(peek());
          advance();
        }
      } else {
        t.kind = punct(t.loc);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void fail(Location loc, const std::string& what) { throw ParseError(loc, what); }

  char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++loc_.line;
      loc_.column = 1;
    } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
      ++loc_.column;  // count code points, not UTF-8 continuation bytes
    }
    ++pos_;
  }

  void expect_char(char c, const char* what) {
    if (peek() != c) fail(loc_, std::string("expected ") + what);
    advance();
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        Location start = loc_;
        advance();
        advance();
        while (pos_ < src_.size() && !(src_[pos_] == '*' && peek(1) == '/')) advance();
        if (pos_ >= src_.size()) fail(start, "unterminated comment");
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  std::string word() {
    std::string out;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
        out.push_back(c);
        advance();
      } else if (c == ':' && peek(1) == ':' &&
                 (std::isalpha(static_cast<unsigned char>(peek(2))) || peek(2) == '_')) {
        out += "::";
        advance();
        advance();
      } else {
        break;
      }
    }
    // A trailing '-' belongs to an arrow ("a->b" is unusual but legal).
    while (!out.empty() && out.back() == '-') {
      out.pop_back();
      --pos_;
      --loc_.column;
    }
    return out;
  }

  std::string single_quoted() {
    Location start = loc_;
    advance();
    std::string out;
    while (true) {
      if (pos_ >= src_.size()) fail(start, "unterminated string");
      char c = src_[pos_];
      if (c == '\'') {
        advance();
        return out;
      }
      if (c == '\\' && (peek(1) == '\'' || peek(1) == '\\')) {
        advance();
        c = src_[pos_];
      }
      out.push_back(c);
      advance();
    }
  }

  std::vector<StrPart> double_quoted() {
    Location start = loc_;
    advance();
    std::vector<StrPart> parts;
    std::string lit;
    auto flush = [&] {
      if (!lit.empty()) parts.push_back({false, lit});
      lit.clear();
    };
    while (true) {
      if (pos_ >= src_.size()) fail(start, "unterminated string");
      char c = src_[pos_];
      if (c == '"') {
        advance();
        flush();
        return parts;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) fail(start, "unterminated string");
        char e = src_[pos_];
        switch (e) {
          case 'n':
            lit.push_back('\n');
            break;
          case 't':
            lit.push_back('\t');
            break;
          case '"':
          case '\\':
          case '$':
            lit.push_back(e);
            break;
          default:
            lit.push_back('\\');
            lit.push_back(e);
        }
        advance();
        continue;
      }
      if (c == '$' && (peek(1) == '{' || std::isalpha(static_cast<unsigned char>(peek(1))) || peek(1) == '_')) {
        Location at = loc_;
        advance();
        std::string name;
        if (peek() == '{') {
          advance();
          name = word();
          if (peek() != '}') fail(at, "expected '}' closing ${...}");
          advance();
        } else {
          name = word();
        }
        if (name.empty()) fail(at, "expected a variable name after '$'");
        flush();
        parts.push_back({true, name});
        continue;
      }
      lit.push_back(c);
      advance();
    }
  }

  Tok punct(Location at) {
    char c = src_[pos_];
    char n = peek(1);
    auto two = [&](Tok t) {
      advance();
      advance();
      return t;
    };
    switch (c) {
      case '{':
        advance();
        return Tok::LBrace;
      case '}':
        advance();
        return Tok::RBrace;
      case '[':
        advance();
        return Tok::LBracket;
      case ']':
        advance();
        return Tok::RBracket;
      case '(':
        advance();
        return Tok::LParen;
      case ')':
        advance();
        return Tok::RParen;
      case ':':
        advance();
        return Tok::Colon;
      case ',':
        advance();
        return Tok::Comma;
      case ';':
        advance();
        return Tok::Semi;
      case '=':
        if (n == '>') return two(Tok::FatArrow);
        advance();
        return Tok::Equals;
      case '-':
      case '~':
        if (n == '>') return two(Tok::Arrow);
        break;
      case '<':
        if (n == '-' || n == '~') return two(Tok::BackArrow);
        if (n == '|') return two(Tok::Collector);
        if (n == '<' && peek(2) == '|') {
          advance();
          return two(Tok::Collector);
        }
        break;
      default:
        break;
    }
    fail(at, std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Location loc_;
};

const std::set<std::string>& unsupported_keywords() {
  static const std::set<std::string> k = {"class", "node", "include", "require", "contain", "stage",
                                          "if",    "unless", "case", "import", "inherits"};
  return k;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Manifest manifest(bool nested) {
    Manifest m;
    while (true) {
      const Token& t = cur();
      if (t.kind == Tok::End) {
        if (nested) fail(t.loc, "expected '}' closing the define body");
        return m;
      }
      if (t.kind == Tok::RBrace && nested) return m;
      item(m);
    }
  }

 private:
  [[noreturn]] void fail(Location loc, const std::string& what) { throw ParseError(loc, what); }

  const Token& cur() const { return toks_[i_]; }
  const Token& ahead(std::size_t k) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  Token take() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

  Token expect(Tok kind, const char* what) {
    if (cur().kind != kind) fail(cur().loc, std::string("expected ") + what + describe(cur()));
    return take();
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::End:
        return ", found end of input";
      case Tok::Ident:
      case Tok::TypeRef:
        return ", found '" + t.text + "'";
      case Tok::Var:
        return ", found '$" + t.text + "'";
      default:
        return "";
    }
  }

  void item(Manifest& m) {
    const Token& t = cur();
    if (t.kind == Tok::Ident && t.text == "define") {
      m.items.emplace_back(define());
      return;
    }
    if (t.kind == Tok::Ident && unsupported_keywords().contains(t.text)) {
      fail(t.loc, "unsupported feature: '" + t.text + "'");
    }
    if (t.kind == Tok::Ident) {
      resource(m);
      return;
    }
    if (t.kind == Tok::TypeRef) {
      if (ahead(1).kind == Tok::Collector) fail(ahead(1).loc, "unsupported feature: resource collectors");
      if (ahead(1).kind == Tok::LBrace) fail(t.loc, "unsupported feature: resource defaults ('" + t.text + " {')");
      dependency_chain(m);
      return;
    }
    if (t.kind == Tok::Var && ahead(1).kind == Tok::Equals) {
      fail(t.loc, "unsupported feature: variable assignment");
    }
    fail(t.loc, "expected a resource, define or dependency" + describe(t));
  }

  DefineDecl define() {
    DefineDecl d;
    d.loc = take().loc;
    Token name = expect(Tok::Ident, "a type name after 'define'");
    d.name = lower(name.text);
    if (cur().kind == Tok::LParen) {
      take();
      while (cur().kind != Tok::RParen) {
        Token v = expect(Tok::Var, "a parameter ($name)");
        Param p;
        p.name = v.text;
        for (const Param& q : d.params) {
          if (q.name == p.name) fail(v.loc, "duplicate parameter $" + p.name);
        }
        if (cur().kind == Tok::Equals) {
          take();
          p.default_value = std::make_shared<Value>(value());
        }
        d.params.push_back(std::move(p));
        if (cur().kind == Tok::Comma) {
          take();
        } else if (cur().kind != Tok::RParen) {
          fail(cur().loc, "expected ',' or ')' in parameter list" + describe(cur()));
        }
      }
      take();
    }
    expect(Tok::LBrace, "'{' opening the define body");
    d.body = std::make_shared<Manifest>(manifest(true));
    expect(Tok::RBrace, "'}' closing the define body");
    return d;
  }

  void resource(Manifest& m) {
    Token type = take();
    expect(Tok::LBrace, ("'{' after resource type '" + type.text + "'").c_str());
    while (cur().kind != Tok::RBrace) {
      ResourceDecl r;
      r.type = lower(type.text);
      r.loc = cur().loc;
      r.title = value();
      expect(Tok::Colon, "':' after the resource title");
      attributes(r);
      m.items.emplace_back(std::move(r));
      if (cur().kind == Tok::Semi) take();
    }
    take();
  }

  bool at_attribute() const {
    return (cur().kind == Tok::Ident || cur().kind == Tok::TypeRef) && ahead(1).kind == Tok::FatArrow;
  }

  void attributes(ResourceDecl& r) {
    std::set<std::string> seen;
    while (at_attribute()) {
      Attribute a;
      a.loc = cur().loc;
      a.name = take().text;
      take();  // =>
      a.value = value();
      if (!seen.insert(a.name).second) fail(a.loc, "duplicate attribute '" + a.name + "'");
      r.attrs.push_back(std::move(a));
      if (cur().kind == Tok::Comma) {
        take();
      } else if (cur().kind == Tok::Semi && ahead(1).kind != Tok::End &&
                 (ahead(1).kind == Tok::Ident || ahead(1).kind == Tok::TypeRef) && ahead(2).kind == Tok::FatArrow) {
        take();  // ';' used as an attribute separator
      } else {
        break;
      }
    }
    if (cur().kind != Tok::RBrace && cur().kind != Tok::Semi) {
      fail(cur().loc, "expected an attribute, ';' or '}'" + describe(cur()));
    }
  }

  Value value() {
    Token t = take();
    Value v;
    v.loc = t.loc;
    switch (t.kind) {
      case Tok::SQString:
        return [&] {
          Value s = Value::string(t.text);
          s.loc = t.loc;
          return s;
        }();
      case Tok::DQString:
        v.kind = Value::Kind::String;
        v.parts = t.parts;
        for (const StrPart& p : v.parts) {
          if (!p.is_var) v.text += p.text;
        }
        return v;
      case Tok::Number:
        v.kind = Value::Kind::Number;
        v.text = t.text;
        return v;
      case Tok::Ident:
        v.kind = Value::Kind::Bare;
        v.text = t.text;
        return v;
      case Tok::Var:
        v.kind = Value::Kind::Var;
        v.text = t.text;
        return v;
      case Tok::LBracket:
        v.kind = Value::Kind::Array;
        v.items = list(Tok::RBracket);
        return v;
      case Tok::TypeRef:
        v.kind = Value::Kind::Ref;
        v.text = lower(t.text);
        expect(Tok::LBracket, "'[' after a resource reference type");
        v.items = list(Tok::RBracket);
        if (v.items.empty()) fail(t.loc, "empty resource reference");
        return v;
      default:
        fail(t.loc, "expected a value" + describe(t));
    }
  }

  std::vector<Value> list(Tok close) {
    std::vector<Value> items;
    while (cur().kind != close) {
      items.push_back(value());
      if (cur().kind == Tok::Comma) {
        take();
      } else if (cur().kind != close) {
        fail(cur().loc, "expected ',' or closing bracket" + describe(cur()));
      }
    }
    take();
    return items;
  }

  void dependency_chain(Manifest& m) {
    Value left = value();
    if (left.kind != Value::Kind::Ref) fail(left.loc, "expected a resource reference");
    bool any = false;
    while (cur().kind == Tok::Arrow || cur().kind == Tok::BackArrow) {
      Token arrow = take();
      if (cur().kind != Tok::TypeRef) fail(cur().loc, "expected a resource reference after the arrow");
      Value right = value();
      DependencyDecl d;
      d.loc = arrow.loc;
      if (arrow.kind == Tok::Arrow) {
        d.before = left;
        d.after = right;
      } else {
        d.before = right;
        d.after = left;
      }
      m.items.emplace_back(std::move(d));
      left = std::move(right);
      any = true;
    }
    if (!any) fail(cur().loc, "expected '->' after a resource reference" + describe(cur()));
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

Manifest parse(std::string_view source) {
  Lexer lexer(source);
  Parser parser(lexer.run());
  return parser.manifest(false);
}

}  // namespace ppv::frontend
