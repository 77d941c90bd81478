#include "ppverify/check/pipeline.hpp"

#include <algorithm>

#include "ppverify/frontend/expand.hpp"
#include "ppverify/frontend/parser.hpp"

namespace ppv::check {

LoadedManifest load_manifest(std::string_view text, const model::CompileEnv& env) {
  LoadedManifest out;
  out.resources = frontend::expand(frontend::parse(text));
  out.compiled = model::compile_graph(out.resources, env);
  return out;
}

bool uses_packages(const frontend::ResourceGraph& g) {
  return std::any_of(g.vertices.begin(), g.vertices.end(),
                     [](const frontend::PrimitiveResource& r) { return r.type == "package"; });
}

std::string synthetic_manifest(std::size_t n, SyntheticMode mode) {
  std::string out = "# All packages create a file /a\n";
  for (std::size_t i = 1; i <= n; ++i) {
    out += "package{'A-" + std::to_string(i) + "':";
    if (mode == SyntheticMode::Deterministic) out += " before => File['/a']";
    out += " }\n";
  }
  if (mode == SyntheticMode::Deterministic) out += "file{'/a': content => 'x' }\n";
  return out;
}

model::PackageDb synthetic_package_db(std::size_t n, const std::string& platform, std::size_t extra_files) {
  model::PackageDb db(platform);
  for (std::size_t i = 1; i <= n; ++i) {
    std::string name = "A-" + std::to_string(i);
    std::string listing = "/a\n";
    for (std::size_t k = 0; k < extra_files; ++k) {
      listing += "/usr/share/" + name + "/file" + std::to_string(k) + "\n";
    }
    db.ingest_listing(name, listing);
  }
  return db;
}

}  // namespace ppv::check
