#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ppverify/fs/path.hpp"

namespace ppv::model {

struct PackageInfo {
  std::vector<fs::Path> files;     // sorted, deduplicated
  std::vector<std::string> deps;   // direct dependencies, sorted
};

// Offline package database for one platform: package name -> installed
// paths and dependencies. Persisted as
//   {"platform": str, "packages": {name: {"files": [paths], "deps": [names]}}}
// with a canonical rendering, so load + save is byte-identical.
class PackageDb {
 public:
  PackageDb() = default;
  explicit PackageDb(std::string platform) : platform_(std::move(platform)) {}

  const std::string& platform() const { return platform_; }
  const std::map<std::string, PackageInfo>& packages() const { return packages_; }
  const PackageInfo* find(const std::string& name) const;

  // Throws InputError on malformed JSON or paths.
  static PackageDb from_json(std::string_view text);
  std::string to_json() const;

  // `source` is a file, or a directory holding <platform>.json.
  static PackageDb load(const std::filesystem::path& source, const std::string& platform);
  // Atomic: writes a temporary file next to `file` and renames it.
  void save(const std::filesystem::path& file) const;

  // Adds or replaces a package from a newline-separated listing of absolute
  // paths (apt-file / dpkg -L / repoquery output). Blank lines are skipped;
  // malformed lines raise InputError naming the line number.
  void ingest_listing(const std::string& name, std::string_view listing, std::vector<std::string> deps = {});

  // Transitive dependencies of `name` in installation order (dependencies
  // first), excluding `name` itself.
  std::vector<std::string> dependency_closure(const std::string& name) const;
  // Packages that transitively depend on `name`, sorted.
  std::vector<std::string> reverse_dependents(const std::string& name) const;

 private:
  std::string platform_;
  std::map<std::string, PackageInfo> packages_;
};

}  // namespace ppv::model
