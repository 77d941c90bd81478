#include "ppverify/model/package_db.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "ppverify/error.hpp"

namespace ppv::model {

using nlohmann::json;

const PackageInfo* PackageDb::find(const std::string& name) const {
  auto it = packages_.find(name);
  return it == packages_.end() ? nullptr : &it->second;
}

namespace {

void check_name(const std::string& name) {
  if (!fs::Path::valid_segment(name)) throw InputError("invalid package name '" + name + "'");
}

PackageInfo canonical(std::vector<fs::Path> files, std::vector<std::string> deps) {
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  std::sort(deps.begin(), deps.end());
  deps.erase(std::unique(deps.begin(), deps.end()), deps.end());
  return PackageInfo{std::move(files), std::move(deps)};
}

}  // namespace

PackageDb PackageDb::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("package database: ") + e.what());
  }
  try {
    PackageDb db(doc.at("platform").get<std::string>());
    for (const auto& [name, entry] : doc.at("packages").items()) {
      check_name(name);
      std::vector<fs::Path> files;
      for (const auto& f : entry.at("files")) {
        std::string s = f.get<std::string>();
        auto p = fs::Path::try_parse(s);
        if (!p) throw InputError("package database: package '" + name + "' has malformed path '" + s + "'");
        files.push_back(*p);
      }
      std::vector<std::string> deps;
      if (entry.contains("deps")) deps = entry.at("deps").get<std::vector<std::string>>();
      db.packages_[name] = canonical(std::move(files), std::move(deps));
    }
    // Dependencies may name packages not imported yet; compiling a manifest
    // that needs one reports it as an unknown package.
    for (const auto& [name, info] : db.packages_) {
      for (const std::string& d : info.deps) {
        if (d == name) throw InputError("package database: '" + name + "' depends on itself");
      }
    }
    return db;
  } catch (const json::exception& e) {
    throw InputError(std::string("package database: ") + e.what());
  }
}

std::string PackageDb::to_json() const {
  json packages = json::object();
  for (const auto& [name, info] : packages_) {
    json files = json::array();
    for (const fs::Path& p : info.files) files.push_back(p.str());
    packages[name] = {{"deps", info.deps}, {"files", files}};
  }
  json doc = {{"packages", packages}, {"platform", platform_}};
  return doc.dump(2) + "\n";
}

PackageDb PackageDb::load(const std::filesystem::path& source, const std::string& platform) {
  std::filesystem::path file = source;
  if (std::filesystem::is_directory(source)) file = source / (platform + ".json");
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError("cannot read package database " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

void PackageDb::save(const std::filesystem::path& file) const {
  std::filesystem::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << to_json();
    if (!out.flush()) throw InputError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

void PackageDb::ingest_listing(const std::string& name, std::string_view listing, std::vector<std::string> deps) {
  check_name(name);
  for (const std::string& d : deps) {
    check_name(d);
    if (d == name) throw InputError("package '" + name + "' cannot depend on itself");
  }
  std::vector<fs::Path> files;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= listing.size()) {
    std::size_t end = listing.find('\n', start);
    if (end == std::string_view::npos) end = listing.size();
    std::string line(listing.substr(start, end - start));
    ++line_no;
    start = end + 1;
    // Trim whitespace and a "package: " prefix as printed by apt-file.
    auto first = line.find_first_not_of(" \t\r");
    auto last = line.find_last_not_of(" \t\r");
    if (first == std::string::npos) {
      if (end == listing.size()) break;
      continue;
    }
    line = line.substr(first, last - first + 1);
    if (auto colon = line.find(": /"); colon != std::string::npos && line[0] != '/') line = line.substr(colon + 2);
    auto p = fs::Path::normalize(line);
    if (!p) throw InputError("listing line " + std::to_string(line_no) + ": not an absolute path: '" + line + "'");
    if (!p->is_root()) files.push_back(*p);
    if (end == listing.size()) break;
  }
  packages_[name] = canonical(std::move(files), std::move(deps));
}

std::vector<std::string> PackageDb::dependency_closure(const std::string& name) const {
  std::vector<std::string> order;
  std::set<std::string> seen{name};
  std::function<void(const std::string&)> visit = [&](const std::string& n) {
    const PackageInfo* info = find(n);
    if (info == nullptr) return;
    for (const std::string& d : info->deps) {
      if (!seen.insert(d).second) continue;
      visit(d);
      order.push_back(d);
    }
  };
  visit(name);
  return order;
}

std::vector<std::string> PackageDb::reverse_dependents(const std::string& name) const {
  std::vector<std::string> out;
  for (const auto& [other, info] : packages_) {
    if (other == name) continue;
    auto closure = dependency_closure(other);
    if (std::find(closure.begin(), closure.end(), name) != closure.end()) out.push_back(other);
  }
  return out;
}

}  // namespace ppv::model
