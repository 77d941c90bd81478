#pragma once

#include <string>

#include "ppverify/analysis/graph.hpp"
#include "ppverify/frontend/graph.hpp"
#include "ppverify/fs/expr.hpp"
#include "ppverify/model/package_db.hpp"

namespace ppv::model {

// Everything a resource model needs besides the resource itself. `db` may be
// null when the manifest declares no packages.
struct CompileEnv {
  std::string platform;
  const PackageDb* db = nullptr;
};

// Model-reserved locations.
fs::Path package_sentinel(const std::string& package);  // /var/db/pkgs/<name>
fs::Path user_entry(const std::string& user);           // /etc/users/<name>
fs::Path group_entry(const std::string& group);         // /etc/groups/<name>

// Content written for a literal string. Literals that could be mistaken for
// generated tokens ("pkg:", "rsrc:", "lit:" prefixes) are escaped with "lit:".
fs::ContentId literal_content(const std::string& text);
// Generated content tokens: "pkg:<name>:<path>" and "rsrc:<type>:<title>".
fs::ContentId package_content(const std::string& package, const fs::Path& p);
fs::ContentId resource_content(const std::string& type, const std::string& title);

// Leaves p as a file holding c: replaces an existing file, creates a missing
// one, errs on a directory (or a missing parent).
fs::Expr ensure_file(const fs::Path& p, const fs::ContentId& c);
// idemdir for every non-root ancestor of p (parent first), then p itself.
fs::Expr ensure_directory_chain(const fs::Path& p);

// The compilation function: dispatches on the resource type. Throws
// ModelError (InvalidAttributes, UnknownPackage, UnknownPlatform).
fs::Expr compile_resource(const frontend::PrimitiveResource& r, const CompileEnv& env);

fs::Expr compile_file(const frontend::PrimitiveResource& r);
fs::Expr compile_package(const frontend::PrimitiveResource& r, const CompileEnv& env);
fs::Expr compile_user(const frontend::PrimitiveResource& r);
fs::Expr compile_group(const frontend::PrimitiveResource& r);
fs::Expr compile_ssh_key(const frontend::PrimitiveResource& r);

// Compiles every vertex; labels are the resource labels ("File[/a]").
analysis::CompiledGraph compile_graph(const frontend::ResourceGraph& g, const CompileEnv& env);

}  // namespace ppv::model
