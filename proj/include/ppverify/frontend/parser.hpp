#pragma once

#include <string>
#include <string_view>

#include "ppverify/error.hpp"
#include "ppverify/frontend/ast.hpp"

namespace ppv::frontend {

// Syntax errors carry the position of the offending token.
class ParseError : public InputError {
 public:
  ParseError(Location loc, const std::string& what)
      : InputError(loc.str() + ": " + what), loc_(loc) {}
  const Location& location() const { return loc_; }

 private:
  Location loc_;
};

// Parses the manifest language:
//
//   manifest ::= item*
//   item     ::= rtype '{' body (';' body)* ';'? '}'
//              | 'define' name '(' ($x ('=' value)?),* ')' '{' manifest '}'
//              | ref (('->' | '~>' | '<-' | '<~') ref)+
//   body     ::= title ':' (attr (',' | ';')?)*
//   attr     ::= name '=>' value
//   value    ::= 'str' | "str with $x / ${x}" | number | bareword | $x
//              | '[' value,* ']' | Type '[' value,* ']'
//
// A ';' inside a body is an attribute separator when the next tokens are
// `name =>`, otherwise it starts another body. `#` and `/* */` comments are
// skipped. Classes, nodes, includes, stages and collectors are rejected as
// unsupported features.
Manifest parse(std::string_view source);

}  // namespace ppv::frontend
