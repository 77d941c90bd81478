#pragma once

#include <string>
#include <string_view>

#include "ppverify/fs/expr.hpp"

namespace ppv::fs {

// Textual S-expression form of the IR, used for golden tests and debugging:
//
//   expr ::= skip | error | (mkdir P) | (create P "c") | (rm P) | (cp P P)
//          | (seq expr expr ...) | (if pred expr expr)
//   pred ::= true | false | (dne P) | (file? P) | (dir? P) | (empty? P)
//          | (and pred pred) | (or pred pred) | (not pred)
//
// Paths are printed bare when they only contain [A-Za-z0-9/._+-], otherwise as
// double-quoted strings with \" and \\ escapes. Contents are always quoted.
// "(seq a b c)" abbreviates the right-nested (seq a (seq b c)); only the right
// spine is flattened when printing, so parse(print(e)) == e for every e.

std::string to_sexpr(const Expr& e);
std::string to_sexpr(const Pred& a);

// Throws InputError with a byte offset on malformed input.
Expr parse_expr(std::string_view text);
Pred parse_pred(std::string_view text);

}  // namespace ppv::fs
