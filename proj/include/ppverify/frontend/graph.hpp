#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ppverify/frontend/ast.hpp"

namespace ppv::frontend {

// A fully expanded resource: a built-in type, a concrete title and concrete
// attribute values (metaparameters already turned into edges).
struct PrimitiveResource {
  std::string type;  // file, package, user, group, ssh_authorized_key
  std::string title;
  std::map<std::string, Value> attrs;
  Location loc;

  // "File[/etc/motd]"
  std::string label() const;
  const Value* attr(const std::string& name) const;
};

// Vertices are kept sorted by (type, title), so expansion is independent of
// declaration order. Edges (a, b) mean a must run before b.
struct ResourceGraph {
  std::vector<PrimitiveResource> vertices;
  std::set<std::pair<std::size_t, std::size_t>> edges;

  std::optional<std::size_t> find(const std::string& type, const std::string& title) const;
  std::vector<std::string> labels() const;
};

// Graphviz rendering for debugging.
std::string to_dot(const ResourceGraph& g);

}  // namespace ppv::frontend
