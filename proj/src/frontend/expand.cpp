#include "ppverify/frontend/expand.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "ppverify/fs/path.hpp"

namespace ppv::frontend {

namespace {

using Key = std::pair<std::string, std::string>;  // (type, title)
using Env = std::map<std::string, Value>;

const std::set<std::string>& primitive_types() {
  static const std::set<std::string> t = {"file", "package", "user", "group", "ssh_authorized_key"};
  return t;
}

const std::set<std::string>& unsupported_types() {
  static const std::set<std::string> t = {"service", "cron", "host", "exec", "mount", "notify",
                                          "schedule", "tidy", "augeas", "yumrepo", "zfs"};
  return t;
}

const std::set<std::string>& metaparameters() {
  static const std::set<std::string> m = {"before", "require", "notify", "subscribe"};
  return m;
}

std::string key_label(const Key& k) {
  PrimitiveResource r;
  r.type = k.first;
  r.title = k.second;
  return r.label();
}

// A relation not yet resolved to vertices: `from` runs before `to`.
struct Relation {
  std::vector<Key> from;
  std::vector<Key> to;
  Location loc;
};

class Expander {
 public:
  explicit Expander(const Manifest& m) {
    for (const Item& item : m.items) {
      if (const auto* d = std::get_if<DefineDecl>(&item)) {
        if (primitive_types().contains(d->name) || unsupported_types().contains(d->name)) {
          throw ExpandError(ExpandError::Kind::InvalidParameter,
                            d->loc.str() + ": cannot redefine built-in type '" + d->name + "'");
        }
        if (!defines_.emplace(d->name, d).second) {
          throw ExpandError(ExpandError::Kind::DuplicateResource,
                            d->loc.str() + ": type '" + d->name + "' is defined twice");
        }
      }
    }
  }

  ResourceGraph run(const Manifest& m) {
    std::vector<std::size_t> group;
    manifest(m, Env{}, group, true);
    return finish();
  }

 private:
  void manifest(const Manifest& m, const Env& env, std::vector<std::size_t>& group, bool top) {
    for (const Item& item : m.items) {
      if (const auto* r = std::get_if<ResourceDecl>(&item)) {
        resource(*r, env, group);
      } else if (const auto* d = std::get_if<DependencyDecl>(&item)) {
        relations_.push_back({refs(d->before, env), refs(d->after, env), d->loc});
      } else if (!top) {
        const auto& def = std::get<DefineDecl>(item);
        throw ExpandError(ExpandError::Kind::InvalidParameter,
                          def.loc.str() + ": define '" + def.name + "' must be declared at top level");
      }
    }
  }

  Value eval(const Value& v, const Env& env) const {
    switch (v.kind) {
      case Value::Kind::String: {
        Value out = v;
        out.text.clear();
        for (const StrPart& p : v.parts) {
          if (!p.is_var) {
            out.text += p.text;
            continue;
          }
          Value bound = lookup(p.text, env, v.loc);
          if (!bound.is_scalar()) {
            throw ExpandError(ExpandError::Kind::InvalidValue,
                              v.loc.str() + ": cannot interpolate non-scalar $" + p.text + " into a string");
          }
          out.text += bound.text;
        }
        out.parts = {StrPart{false, out.text}};
        return out;
      }
      case Value::Kind::Var:
        return lookup(v.text, env, v.loc);
      case Value::Kind::Array:
      case Value::Kind::Ref: {
        Value out = v;
        for (Value& item : out.items) item = eval(item, env);
        return out;
      }
      default:
        return v;
    }
  }

  static Value lookup(const std::string& name, const Env& env, Location loc) {
    auto it = env.find(name);
    if (it == env.end()) {
      throw ExpandError(ExpandError::Kind::UnboundVariable, loc.str() + ": unbound variable $" + name);
    }
    return it->second;
  }

  static std::vector<std::string> titles(const Value& v) {
    std::vector<std::string> out;
    if (v.kind == Value::Kind::Array) {
      for (const Value& item : v.items) {
        auto sub = titles(item);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
    if (!v.is_scalar()) {
      throw ExpandError(ExpandError::Kind::InvalidValue, v.loc.str() + ": a title must be a string");
    }
    out.push_back(v.text);
    return out;
  }

  std::vector<Key> refs(const Value& raw, const Env& env) const {
    Value v = eval(raw, env);
    std::vector<Key> out;
    if (v.kind == Value::Kind::Array) {
      for (const Value& item : v.items) {
        if (item.kind != Value::Kind::Ref) {
          throw ExpandError(ExpandError::Kind::InvalidValue,
                            item.loc.str() + ": expected a resource reference, found " + item.str());
        }
        for (const std::string& t : titles(Value{Value::Kind::Array, "", {}, item.items, item.loc})) {
          out.emplace_back(item.text, t);
        }
      }
      return out;
    }
    if (v.kind != Value::Kind::Ref) {
      throw ExpandError(ExpandError::Kind::InvalidValue,
                        v.loc.str() + ": expected a resource reference, found " + v.str());
    }
    for (const std::string& t : titles(Value{Value::Kind::Array, "", {}, v.items, v.loc})) {
      out.emplace_back(v.text, t);
    }
    return out;
  }

  // Records a metaparameter on `self` as relations.
  void metaparameter(const Attribute& a, const Env& env, const Key& self) {
    std::vector<Key> others = refs(a.value, env);
    if (a.name == "before" || a.name == "notify") {
      relations_.push_back({{self}, others, a.loc});
    } else {
      relations_.push_back({others, {self}, a.loc});
    }
  }

  void resource(const ResourceDecl& r, const Env& env, std::vector<std::size_t>& group) {
    Value title_value = eval(r.title, env);
    for (const std::string& title : titles(title_value)) {
      Key key{r.type, title};
      if (primitive_types().contains(r.type)) {
        primitive(r, env, key, group);
      } else if (defines_.contains(r.type)) {
        instance(r, env, key, group);
      } else if (unsupported_types().contains(r.type)) {
        throw ExpandError(ExpandError::Kind::UnsupportedType,
                          r.loc.str() + ": unsupported resource type '" + r.type + "'");
      } else {
        throw ExpandError(ExpandError::Kind::UnknownType, r.loc.str() + ": unknown resource type '" + r.type + "'");
      }
    }
  }

  void primitive(const ResourceDecl& r, const Env& env, const Key& key, std::vector<std::size_t>& group) {
    PrimitiveResource p;
    p.type = key.first;
    p.title = key.second;
    p.loc = r.loc;
    std::vector<const Attribute*> metas;
    for (const Attribute& a : r.attrs) {
      if (metaparameters().contains(a.name)) {
        metas.push_back(&a);
      } else {
        Value v = eval(a.value, env);
        v.loc = a.loc;
        p.attrs.emplace(a.name, std::move(v));
      }
    }
    std::size_t index;
    auto it = primitive_index_.find(key);
    if (it != primitive_index_.end()) {
      index = it->second;
      if (!same_attributes(prims_[index].attrs, p.attrs)) {
        throw ExpandError(ExpandError::Kind::DuplicateResource,
                          r.loc.str() + ": duplicate declaration of " + p.label() + " (first declared at " +
                              prims_[index].loc.str() + ") with different attributes");
      }
    } else {
      index = prims_.size();
      prims_.push_back(std::move(p));
      primitive_index_.emplace(key, index);
      groups_[key].push_back(index);
    }
    group.push_back(index);
    for (const Attribute* a : metas) metaparameter(*a, env, key);
  }

  static bool same_attributes(const std::map<std::string, Value>& a, const std::map<std::string, Value>& b) {
    if (a.size() != b.size()) return false;
    for (const auto& [name, v] : a) {
      auto it = b.find(name);
      if (it == b.end() || it->second.kind != v.kind || it->second.str() != v.str()) return false;
    }
    return true;
  }

  void instance(const ResourceDecl& r, const Env& outer, const Key& key, std::vector<std::size_t>& group) {
    const DefineDecl& def = *defines_.at(r.type);
    if (std::find(stack_.begin(), stack_.end(), r.type) != stack_.end()) {
      throw ExpandError(ExpandError::Kind::RecursiveDefine,
                        r.loc.str() + ": recursive instantiation of define '" + r.type + "'");
    }
    if (instance_keys_.contains(key)) {
      throw ExpandError(ExpandError::Kind::DuplicateResource,
                        r.loc.str() + ": duplicate declaration of " + key_label(key));
    }
    instance_keys_.insert(key);

    Env env;
    env["title"] = Value::string(key.second);
    env["name"] = Value::string(key.second);
    std::map<std::string, const Attribute*> given;
    std::vector<const Attribute*> metas;
    for (const Attribute& a : r.attrs) {
      if (metaparameters().contains(a.name)) {
        metas.push_back(&a);
        continue;
      }
      bool known = std::any_of(def.params.begin(), def.params.end(), [&](const Param& p) { return p.name == a.name; });
      if (!known) {
        throw ExpandError(ExpandError::Kind::InvalidParameter,
                          a.loc.str() + ": " + key_label(key) + " has no parameter '" + a.name + "'");
      }
      given[a.name] = &a;
    }
    for (const Param& p : def.params) {
      if (auto it = given.find(p.name); it != given.end()) {
        env[p.name] = eval(it->second->value, outer);
      } else if (p.default_value) {
        env[p.name] = eval(*p.default_value, env);
      } else if (p.name != "title" && p.name != "name") {
        throw ExpandError(ExpandError::Kind::InvalidParameter,
                          r.loc.str() + ": " + key_label(key) + " is missing parameter '" + p.name + "'");
      }
    }

    stack_.push_back(r.type);
    std::vector<std::size_t> inner;
    manifest(*def.body, env, inner, false);
    stack_.pop_back();
    groups_[key] = inner;
    group.insert(group.end(), inner.begin(), inner.end());
    for (const Attribute* a : metas) metaparameter(*a, outer, key);
  }

  const std::vector<std::size_t>& resolve(const Key& k, Location loc) const {
    auto it = groups_.find(k);
    if (it == groups_.end()) {
      throw ExpandError(ExpandError::Kind::MissingReference,
                        loc.str() + ": reference to undeclared resource " + key_label(k));
    }
    return it->second;
  }

  ResourceGraph finish() {
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (const Relation& rel : relations_) {
      for (const Key& a : rel.from) {
        for (const Key& b : rel.to) {
          for (std::size_t x : resolve(a, rel.loc)) {
            for (std::size_t y : resolve(b, rel.loc)) edges.emplace(x, y);
          }
        }
      }
    }
    auto_require(edges);

    // Canonical vertex order: by (type, title).
    std::vector<std::size_t> order(prims_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::tie(prims_[a].type, prims_[a].title) < std::tie(prims_[b].type, prims_[b].title);
    });
    std::vector<std::size_t> position(prims_.size());
    ResourceGraph g;
    for (std::size_t i = 0; i < order.size(); ++i) {
      position[order[i]] = i;
      g.vertices.push_back(prims_[order[i]]);
    }
    for (auto [a, b] : edges) g.edges.emplace(position[a], position[b]);
    check_acyclic(g);
    return g;
  }

  // A file resource managing a directory runs before the file resources
  // managing its direct children.
  void auto_require(std::set<std::pair<std::size_t, std::size_t>>& edges) const {
    std::map<fs::Path, std::size_t> by_path;
    auto path_of = [&](const PrimitiveResource& r) -> std::optional<fs::Path> {
      const Value* v = r.attr("path");
      return fs::Path::try_parse(v != nullptr ? v->text : r.title);
    };
    for (std::size_t i = 0; i < prims_.size(); ++i) {
      if (prims_[i].type != "file") continue;
      if (auto p = path_of(prims_[i])) by_path.emplace(*p, i);
    }
    for (const auto& [p, i] : by_path) {
      if (p.is_root()) continue;
      auto parent = by_path.find(p.parent());
      if (parent != by_path.end()) edges.emplace(parent->second, i);
    }
  }

  static void check_acyclic(const ResourceGraph& g) {
    std::vector<std::vector<std::size_t>> succ(g.vertices.size());
    for (auto [a, b] : g.edges) succ[a].push_back(b);
    enum Color { White, Grey, Black };
    std::vector<Color> color(g.vertices.size(), White);
    std::vector<std::size_t> stack;
    std::vector<std::size_t> cycle;
    std::function<bool(std::size_t)> dfs = [&](std::size_t v) {
      color[v] = Grey;
      stack.push_back(v);
      for (std::size_t w : succ[v]) {
        if (color[w] == Grey) {
          cycle.assign(std::find(stack.begin(), stack.end(), w), stack.end());
          cycle.push_back(w);
          return true;
        }
        if (color[w] == White && dfs(w)) return true;
      }
      stack.pop_back();
      color[v] = Black;
      return false;
    };
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
      if (color[v] == White && dfs(v)) {
        std::vector<std::string> labels;
        std::string text;
        for (std::size_t c : cycle) {
          labels.push_back(g.vertices[c].label());
          text += (text.empty() ? "" : " -> ") + labels.back();
        }
        throw ExpandError(ExpandError::Kind::DependencyCycle, "dependency cycle: " + text, labels);
      }
    }
  }

  std::map<std::string, const DefineDecl*> defines_;
  std::vector<PrimitiveResource> prims_;
  std::map<Key, std::size_t> primitive_index_;
  std::map<Key, std::vector<std::size_t>> groups_;  // primitives and define instances
  std::set<Key> instance_keys_;
  std::vector<Relation> relations_;
  std::vector<std::string> stack_;
};

}  // namespace

bool is_primitive_type(const std::string& type) { return primitive_types().contains(type); }

ResourceGraph expand(const Manifest& m) { return Expander(m).run(m); }

}  // namespace ppv::frontend
