#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "ppverify/analysis/graph.hpp"
#include "ppverify/frontend/graph.hpp"
#include "ppverify/model/compile.hpp"
#include "ppverify/model/package_db.hpp"

namespace ppv::check {

struct LoadedManifest {
  frontend::ResourceGraph resources;
  analysis::CompiledGraph compiled;
};

// Parses, expands and compiles manifest text. Throws ParseError /
// ExpandError / ModelError.
LoadedManifest load_manifest(std::string_view text, const model::CompileEnv& env);

// True if the expanded graph declares a package resource.
bool uses_packages(const frontend::ResourceGraph& g);

// The synthetic scaling family: packages A-1..A-n that all install /a and
// are mutually unordered. In deterministic mode a final file resource
// overwrites /a after every package, which makes the manifest deterministic
// (the solver has to prove unsatisfiability).
enum class SyntheticMode { Conflict, Deterministic };
std::string synthetic_manifest(std::size_t n, SyntheticMode mode);
// Package database for the synthetic family (each A-i installs /a plus
// `extra_files` private files).
model::PackageDb synthetic_package_db(std::size_t n, const std::string& platform, std::size_t extra_files = 4);

}  // namespace ppv::check
