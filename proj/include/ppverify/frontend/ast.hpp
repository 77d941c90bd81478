#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace ppv::frontend {

struct Location {
  std::size_t line = 1;
  std::size_t column = 1;
  std::string str() const { return std::to_string(line) + ":" + std::to_string(column); }
};

// One piece of a double-quoted string: literal text or an interpolated
// variable ("$x" / "${x}").
struct StrPart {
  bool is_var = false;
  std::string text;  // literal text, or the variable name without '$'
};

// Attribute / title values. Before expansion strings may contain
// interpolation holes and variables may occur; after expansion only String,
// Number, Bare, Array and Ref remain and strings are fully interpolated.
struct Value {
  enum class Kind { String, Number, Bare, Array, Var, Ref };
  Kind kind = Kind::String;
  std::string text;              // String (after expansion), Number, Bare, Var (name), Ref (type, lowercase)
  std::vector<StrPart> parts;    // String before expansion
  std::vector<Value> items;      // Array elements; Ref titles
  Location loc;

  static Value string(std::string s) {
    Value v;
    v.kind = Kind::String;
    v.parts.push_back({false, s});
    v.text = std::move(s);
    return v;
  }
  static Value bare(std::string s) {
    Value v;
    v.kind = Kind::Bare;
    v.text = std::move(s);
    return v;
  }

  bool is_scalar() const { return kind == Kind::String || kind == Kind::Number || kind == Kind::Bare; }
  // Printable form after expansion (used in messages and DOT labels).
  std::string str() const;
  bool operator==(const Value& other) const;
};

struct Attribute {
  std::string name;
  Value value;
  Location loc;
};

struct ResourceDecl {
  std::string type;  // lowercase
  Value title;       // a scalar, a variable, or an array of them
  std::vector<Attribute> attrs;
  Location loc;
};

struct Manifest;

struct Param {
  std::string name;  // without '$'
  std::shared_ptr<Value> default_value;
};

struct DefineDecl {
  std::string name;
  std::vector<Param> params;
  std::shared_ptr<Manifest> body;
  Location loc;
};

// `Type[t1] -> Type[t2]` (chains are split into consecutive pairs).
struct DependencyDecl {
  Value before;  // a Ref
  Value after;   // a Ref
  Location loc;
};

using Item = std::variant<ResourceDecl, DefineDecl, DependencyDecl>;

struct Manifest {
  std::vector<Item> items;
};

}  // namespace ppv::frontend
