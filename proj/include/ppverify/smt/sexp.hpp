#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ppv::smt {

// A parsed S-expression from solver output: an atom or a list.
struct SExp {
  bool is_atom = true;
  std::string atom;
  std::vector<SExp> list;

  static SExp make_atom(std::string a) { return SExp{true, std::move(a), {}}; }
  static SExp make_list(std::vector<SExp> l) { return SExp{false, {}, std::move(l)}; }

  bool is(std::string_view a) const { return is_atom && atom == a; }
  std::string str() const;
};

// Parses one complete S-expression from the front of `text`. Returns nullopt
// when the text holds only a prefix of one (more input is needed); on success
// sets `consumed` to the number of bytes used. Handles "strings" (with ""
// escapes), |quoted symbols| and ; comments. Throws SolverFailure on a stray
// closing parenthesis.
std::optional<SExp> parse_sexp(std::string_view text, std::size_t& consumed);

}  // namespace ppv::smt
