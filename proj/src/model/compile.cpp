#include "ppverify/model/compile.hpp"

#include <set>

#include "ppverify/error.hpp"

namespace ppv::model {

using frontend::PrimitiveResource;
using frontend::Value;
using fs::ContentId;
using fs::Expr;
using fs::Path;
using fs::Pred;

namespace {

[[noreturn]] void invalid(const PrimitiveResource& r, const std::string& what) {
  throw ModelError(ModelError::Kind::InvalidAttributes, r.loc.str() + ": " + r.label() + ": " + what);
}

// Rejects attributes outside `allowed`.
void check_attributes(const PrimitiveResource& r, const std::set<std::string>& allowed) {
  for (const auto& [name, v] : r.attrs) {
    if (!allowed.contains(name)) invalid(r, "unsupported attribute '" + name + "'");
  }
}

std::string scalar(const PrimitiveResource& r, const std::string& name, const std::string& fallback) {
  const Value* v = r.attr(name);
  if (v == nullptr) return fallback;
  if (!v->is_scalar()) invalid(r, "attribute '" + name + "' must be a single value, found " + v->str());
  return v->text;
}

bool boolean(const PrimitiveResource& r, const std::string& name, bool fallback) {
  const Value* v = r.attr(name);
  if (v == nullptr) return fallback;
  std::string s = scalar(r, name, "");
  if (s == "true") return true;
  if (s == "false") return false;
  invalid(r, "attribute '" + name + "' must be true or false, found " + v->str());
}

Path absolute_path(const PrimitiveResource& r, const std::string& text, const std::string& what) {
  auto p = Path::try_parse(text);
  if (!p) invalid(r, what + " '" + text + "' is not a canonical absolute path");
  if (p->is_root()) invalid(r, what + " cannot be the root directory");
  return *p;
}

std::string segment(const PrimitiveResource& r, const std::string& text, const std::string& what) {
  if (!Path::valid_segment(text)) invalid(r, what + " '" + text + "' is not a valid name");
  return text;
}

std::string ensure_value(const PrimitiveResource& r, const std::set<std::string>& allowed, const std::string& fallback) {
  std::string e = scalar(r, "ensure", fallback);
  if (!allowed.contains(e)) invalid(r, "unsupported ensure value '" + e + "'");
  return e;
}

Expr remove_if_file(const Path& p) { return Expr::if_(Pred::is_file(p), Expr::rm(p), Expr::skip()); }

}  // namespace

Path package_sentinel(const std::string& package) { return Path::parse("/var/db/pkgs").child(package); }
Path user_entry(const std::string& user) { return Path::parse("/etc/users").child(user); }
Path group_entry(const std::string& group) { return Path::parse("/etc/groups").child(group); }

ContentId literal_content(const std::string& text) {
  for (const char* prefix : {"pkg:", "rsrc:", "lit:"}) {
    if (text.rfind(prefix, 0) == 0) return ContentId{"lit:" + text};
  }
  return ContentId{text};
}

ContentId package_content(const std::string& package, const Path& p) {
  return ContentId{"pkg:" + package + ":" + p.str()};
}

ContentId resource_content(const std::string& type, const std::string& title) {
  return ContentId{"rsrc:" + type + ":" + title};
}

Expr ensure_file(const Path& p, const ContentId& c) {
  return Expr::if_(Pred::is_file(p), Expr::seq(Expr::rm(p), Expr::create_file(p, c)),
                   Expr::if_(Pred::dne(p), Expr::create_file(p, c), Expr::error()));
}

Expr ensure_directory_chain(const Path& p) {
  std::vector<Expr> steps;
  std::vector<Path> chain;
  for (Path q = p; !q.is_root(); q = q.parent()) chain.push_back(q);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) steps.push_back(fs::idemdir(*it));
  return fs::sequence(steps);
}

Expr compile_file(const PrimitiveResource& r) {
  check_attributes(r, {"path", "ensure", "content", "source", "force", "owner", "group", "mode", "backup"});
  Path p = absolute_path(r, scalar(r, "path", r.title), "path");
  bool has_content = r.attr("content") != nullptr;
  bool has_source = r.attr("source") != nullptr;
  if (has_content && has_source) invalid(r, "'content' and 'source' are mutually exclusive");
  std::string fallback = has_content || has_source ? "file" : "unmanaged";
  std::string ensure = ensure_value(r, {"present", "file", "directory", "absent", "unmanaged"}, fallback);
  bool force = boolean(r, "force", false);

  if (ensure == "directory") {
    if (has_content || has_source) invalid(r, "a directory cannot have 'content' or 'source'");
    return fs::idemdir(p);
  }
  if (ensure == "absent") {
    if (has_content || has_source) invalid(r, "an absent file cannot have 'content' or 'source'");
    Expr dir_case = force ? Expr::if_(Pred::is_empty_dir(p), Expr::rm(p), Expr::error()) : Expr::skip();
    return Expr::if_(Pred::is_file(p), Expr::rm(p), Expr::if_(Pred::is_dir(p), dir_case, Expr::skip()));
  }
  if (ensure == "unmanaged") return Expr::skip();

  // A directory in the way is replaced only with force (and only if empty).
  auto on_dir = [&](Expr create) {
    return force ? Expr::if_(Pred::is_empty_dir(p), Expr::seq(Expr::rm(p), create), Expr::error()) : Expr::error();
  };
  if (has_source) {
    Path src = absolute_path(r, scalar(r, "source", ""), "source");
    if (src == p) invalid(r, "a file cannot be its own source");
    Expr copy = Expr::cp(src, p);
    return Expr::if_(Pred::is_file(p), Expr::seq(Expr::rm(p), copy),
                     Expr::if_(Pred::dne(p), copy, on_dir(copy)));
  }
  if (has_content) {
    ContentId c = literal_content(scalar(r, "content", ""));
    Expr create = Expr::create_file(p, c);
    return Expr::if_(Pred::is_file(p), Expr::seq(Expr::rm(p), create),
                     Expr::if_(Pred::dne(p), create, on_dir(create)));
  }
  // Existence only: an existing file is left alone.
  Expr create = Expr::create_file(p, resource_content("file", r.title));
  if (ensure == "present") return Expr::if_(Pred::dne(p), create, Expr::skip());
  return Expr::if_(Pred::dne(p), create, Expr::if_(Pred::is_file(p), Expr::skip(), on_dir(create)));
}

namespace {

// Entries of a package listing that are ancestors of other entries are
// directories; the rest are files.
void split_listing(const PackageInfo& info, std::set<Path>& dirs, std::vector<Path>& files) {
  std::set<Path> all(info.files.begin(), info.files.end());
  for (const Path& p : info.files) {
    for (Path q = p; !q.is_root(); q = q.parent()) {
      if (q != p) dirs.insert(q);
    }
  }
  for (const Path& p : info.files) {
    if (!dirs.contains(p)) files.push_back(p);
  }
}

const PackageInfo& lookup(const PrimitiveResource& r, const CompileEnv& env, const std::string& name) {
  const PackageInfo* info = env.db != nullptr ? env.db->find(name) : nullptr;
  if (info == nullptr) {
    throw ModelError(ModelError::Kind::UnknownPackage,
                     r.loc.str() + ": " + r.label() + ": package '" + name + "' is not in the " +
                         (env.platform.empty() ? std::string("package") : env.platform) + " database");
  }
  return *info;
}

// Installs `name` unless its sentinel says it is installed.
Expr own_present(const PrimitiveResource& r, const CompileEnv& env, const std::string& name) {
  const PackageInfo& info = lookup(r, env, name);
  std::set<Path> dirs;
  std::vector<Path> files;
  split_listing(info, dirs, files);
  Path sentinel = package_sentinel(name);
  for (Path q = sentinel.parent(); !q.is_root(); q = q.parent()) dirs.insert(q);
  std::vector<Expr> steps;
  for (const Path& d : dirs) steps.push_back(fs::idemdir(d));  // parents sort first
  for (const Path& f : files) steps.push_back(ensure_file(f, package_content(name, f)));
  steps.push_back(Expr::create_file(sentinel, package_content(name, sentinel)));
  return Expr::if_(Pred::is_file(sentinel), Expr::skip(), fs::sequence(steps));
}

}  // namespace

Expr compile_package(const PrimitiveResource& r, const CompileEnv& env) {
  check_attributes(r, {"name", "ensure", "provider"});
  if (env.db != nullptr && !env.platform.empty() && env.db->platform() != env.platform) {
    throw ModelError(ModelError::Kind::UnknownPlatform,
                     "package database is for platform '" + env.db->platform() + "', not '" + env.platform + "'");
  }
  std::string name = segment(r, scalar(r, "name", r.title), "package name");
  std::string ensure = ensure_value(r, {"present", "installed", "latest", "absent", "purged"}, "present");
  const PackageInfo& info = lookup(r, env, name);

  if (ensure == "absent" || ensure == "purged") {
    std::vector<Expr> steps;
    // Dependents lose their files; their sentinels stay (the package state
    // Puppet read before the run still lists them).
    for (const std::string& q : env.db->reverse_dependents(name)) {
      std::set<Path> dirs;
      std::vector<Path> files;
      split_listing(lookup(r, env, q), dirs, files);
      for (const Path& f : files) steps.push_back(remove_if_file(f));
    }
    std::set<Path> dirs;
    std::vector<Path> files;
    split_listing(info, dirs, files);
    for (const Path& f : files) steps.push_back(remove_if_file(f));
    // Directories no other package lists are removed when empty, deepest first.
    std::set<Path> shared;
    for (const auto& [other, other_info] : env.db->packages()) {
      if (other == name) continue;
      std::vector<Path> unused;
      split_listing(other_info, shared, unused);
    }
    for (auto it = dirs.rbegin(); it != dirs.rend(); ++it) {
      if (shared.contains(*it)) continue;
      steps.push_back(Expr::if_(Pred::is_empty_dir(*it), Expr::rm(*it), Expr::skip()));
    }
    Path sentinel = package_sentinel(name);
    steps.push_back(Expr::rm(sentinel));
    return Expr::if_(Pred::is_file(sentinel), fs::sequence(steps), Expr::skip());
  }

  std::vector<Expr> steps;
  for (const std::string& dep : env.db->dependency_closure(name)) steps.push_back(own_present(r, env, dep));
  steps.push_back(own_present(r, env, name));
  return fs::sequence(steps);
}

namespace {

Expr principal(const PrimitiveResource& r, const Path& entry, const std::string& ensure, std::vector<Expr> extra) {
  if (ensure == "absent") return remove_if_file(entry);
  std::vector<Expr> steps{ensure_directory_chain(entry.parent()), ensure_file(entry, resource_content(r.type, r.title))};
  for (Expr& e : extra) steps.push_back(std::move(e));
  return fs::sequence(steps);
}

}  // namespace

Expr compile_user(const PrimitiveResource& r) {
  check_attributes(r, {"name", "ensure", "managehome", "home", "uid", "gid", "shell", "comment", "groups",
                       "password"});
  std::string name = segment(r, scalar(r, "name", r.title), "user name");
  std::string ensure = ensure_value(r, {"present", "absent"}, "present");
  std::vector<Expr> extra;
  if (boolean(r, "managehome", false)) {
    Path home = absolute_path(r, scalar(r, "home", "/home/" + name), "home");
    extra.push_back(ensure_directory_chain(home));
  }
  return principal(r, user_entry(name), ensure, std::move(extra));
}

Expr compile_group(const PrimitiveResource& r) {
  check_attributes(r, {"name", "ensure", "gid", "members", "system"});
  std::string name = segment(r, scalar(r, "name", r.title), "group name");
  std::string ensure = ensure_value(r, {"present", "absent"}, "present");
  return principal(r, group_entry(name), ensure, {});
}

Expr compile_ssh_key(const PrimitiveResource& r) {
  check_attributes(r, {"name", "ensure", "user", "key", "type", "options", "target"});
  if (r.attr("user") == nullptr) invalid(r, "missing required attribute 'user'");
  std::string user = segment(r, scalar(r, "user", ""), "user");
  std::string name = segment(r, scalar(r, "name", r.title), "key name");
  std::string ensure = ensure_value(r, {"present", "absent"}, "present");
  scalar(r, "key", "");
  scalar(r, "type", "");
  Path entry = Path::parse("/etc/sshkeys").child(user).child(name);
  if (ensure == "absent") return remove_if_file(entry);
  // The key also rewrites the user's key file; the user's home must exist.
  Path ssh_dir = Path::parse("/home").child(user).child(".ssh");
  Path key_file = absolute_path(r, scalar(r, "target", ssh_dir.child("authorized_keys").str()), "target");
  ContentId c = resource_content(r.type, r.title);
  std::vector<Expr> steps{ensure_directory_chain(entry.parent()), ensure_file(entry, c)};
  if (key_file.parent() == ssh_dir) steps.push_back(fs::idemdir(ssh_dir));
  steps.push_back(ensure_file(key_file, c));
  return fs::sequence(steps);
}

Expr compile_resource(const PrimitiveResource& r, const CompileEnv& env) {
  if (r.type == "file") return compile_file(r);
  if (r.type == "package") return compile_package(r, env);
  if (r.type == "user") return compile_user(r);
  if (r.type == "group") return compile_group(r);
  if (r.type == "ssh_authorized_key") return compile_ssh_key(r);
  throw ModelError(ModelError::Kind::InvalidAttributes, r.loc.str() + ": no model for resource type '" + r.type + "'");
}

analysis::CompiledGraph compile_graph(const frontend::ResourceGraph& g, const CompileEnv& env) {
  analysis::CompiledGraph out;
  for (const PrimitiveResource& r : g.vertices) {
    out.labels.push_back(r.label());
    out.exprs.push_back(compile_resource(r, env));
  }
  out.edges.assign(g.edges.begin(), g.edges.end());
  return out;
}

}  // namespace ppv::model
