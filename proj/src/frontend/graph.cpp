#include "ppverify/frontend/graph.hpp"

#include <cctype>
#include <sstream>

namespace ppv::frontend {

std::string PrimitiveResource::label() const {
  std::string t = type;
  bool start = true;
  for (char& c : t) {
    if (start) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    start = c == ':';
  }
  return t + "[" + title + "]";
}

const Value* PrimitiveResource::attr(const std::string& name) const {
  auto it = attrs.find(name);
  return it == attrs.end() ? nullptr : &it->second;
}

std::optional<std::size_t> ResourceGraph::find(const std::string& type, const std::string& title) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i].type == type && vertices[i].title == title) return i;
  }
  return std::nullopt;
}

std::vector<std::string> ResourceGraph::labels() const {
  std::vector<std::string> out;
  out.reserve(vertices.size());
  for (const auto& v : vertices) out.push_back(v.label());
  return out;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string to_dot(const ResourceGraph& g) {
  std::ostringstream out;
  out << "digraph resources {\n";
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    out << "  n" << i << " [label=\"" << dot_escape(g.vertices[i].label()) << "\"];\n";
  }
  for (auto [a, b] : g.edges) out << "  n" << a << " -> n" << b << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace ppv::frontend
