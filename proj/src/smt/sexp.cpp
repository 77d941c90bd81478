#include "ppverify/smt/sexp.hpp"

#include <cctype>

#include "ppverify/error.hpp"

namespace ppv::smt {

std::string SExp::str() const {
  if (is_atom) return atom;
  std::string out = "(";
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i != 0) out += ' ';
    out += list[i].str();
  }
  return out + ")";
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : t_(text) {}

  // nullopt = incomplete input.
  std::optional<SExp> parse(std::size_t& consumed) {
    if (!skip_space()) return std::nullopt;
    auto v = value();
    if (v) consumed = i_;
    return v;
  }

 private:
  // Returns false when input runs out.
  bool skip_space() {
    while (i_ < t_.size()) {
      char c = t_[i_];
      if (c == ';') {
        while (i_ < t_.size() && t_[i_] != '\n') ++i_;
      } else if (std::isspace(static_cast<unsigned char>(c)) != 0) {
        ++i_;
      } else {
        return true;
      }
    }
    return false;
  }

  std::optional<SExp> value() {
    if (!skip_space()) return std::nullopt;
    char c = t_[i_];
    if (c == ')') throw SolverFailure("unexpected ')' in solver output");
    if (c == '(') {
      ++i_;
      std::vector<SExp> items;
      while (true) {
        if (!skip_space()) return std::nullopt;
        if (t_[i_] == ')') {
          ++i_;
          return SExp::make_list(std::move(items));
        }
        auto item = value();
        if (!item) return std::nullopt;
        items.push_back(std::move(*item));
      }
    }
    if (c == '"') {
      std::string out = "\"";
      ++i_;
      while (true) {
        if (i_ >= t_.size()) return std::nullopt;
        char d = t_[i_++];
        out += d;
        if (d == '"') {
          if (i_ < t_.size() && t_[i_] == '"') {
            out += t_[i_++];
            continue;
          }
          if (i_ >= t_.size()) return std::nullopt;  // may be an escaped quote
          return SExp::make_atom(std::move(out));
        }
      }
    }
    if (c == '|') {
      std::size_t end = t_.find('|', i_ + 1);
      if (end == std::string_view::npos) return std::nullopt;
      std::string out(t_.substr(i_, end - i_ + 1));
      i_ = end + 1;
      return SExp::make_atom(std::move(out));
    }
    std::size_t start = i_;
    while (i_ < t_.size()) {
      char d = t_[i_];
      if (std::isspace(static_cast<unsigned char>(d)) != 0 || d == '(' || d == ')' || d == '"' || d == ';') break;
      ++i_;
    }
    // A bare atom at the very end of the buffer may still be growing.
    if (i_ >= t_.size()) return std::nullopt;
    return SExp::make_atom(std::string(t_.substr(start, i_ - start)));
  }

  std::string_view t_;
  std::size_t i_ = 0;
};

}  // namespace

std::optional<SExp> parse_sexp(std::string_view text, std::size_t& consumed) {
  return Parser(text).parse(consumed);
}

}  // namespace ppv::smt
