#pragma once

#include <string>
#include <vector>

#include "ppverify/error.hpp"
#include "ppverify/frontend/ast.hpp"
#include "ppverify/frontend/graph.hpp"

namespace ppv::frontend {

class ExpandError : public InputError {
 public:
  enum class Kind {
    DependencyCycle,
    UnknownType,
    UnsupportedType,
    DuplicateResource,
    UnboundVariable,
    MissingReference,
    InvalidParameter,
    RecursiveDefine,
    InvalidValue,
  };

  ExpandError(Kind kind, const std::string& what, std::vector<std::string> cycle = {})
      : InputError(what), kind_(kind), cycle_(std::move(cycle)) {}
  Kind kind() const { return kind_; }
  // For DependencyCycle: the resources on the cycle, in order.
  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  Kind kind_;
  std::vector<std::string> cycle_;
};

// Built-in resource types that compile to filesystem programs.
bool is_primitive_type(const std::string& type);

// Replaces define instances by their bodies (binding parameters and $title /
// $name), interpolates strings, turns dependency statements and the
// before/require/notify/subscribe metaparameters into edges, adds the
// parent-directory auto-require between file resources, and rejects cycles.
// Identical duplicate primitive declarations are merged; duplicates with
// different attributes are an error.
ResourceGraph expand(const Manifest& m);

}  // namespace ppv::frontend
