#include "ppverify/fs/filesystem.hpp"

#include <sstream>

namespace ppv::fs {

std::string FileContent::str() const {
  if (is_dir()) return "dir";
  return "file(\"" + content_.value + "\")";
}

const FileContent* FileSystem::find(const Path& p) const {
  auto it = entries_.find(p);
  return it == entries_.end() ? nullptr : &it->second;
}

bool FileSystem::is_dir(const Path& p) const {
  const FileContent* v = find(p);
  return v != nullptr && v->is_dir();
}

bool FileSystem::is_file(const Path& p) const {
  const FileContent* v = find(p);
  return v != nullptr && v->is_file();
}

bool FileSystem::has_children(const Path& p) const {
  // Descendants of p sort immediately after p, so the next key decides.
  auto it = entries_.upper_bound(p);
  return it != entries_.end() && p.is_ancestor_of(it->first);
}

FileSystem FileSystem::with(const Path& p, FileContent v) const {
  Map copy = entries_;
  copy.insert_or_assign(p, std::move(v));
  return FileSystem(std::move(copy));
}

FileSystem FileSystem::without(const Path& p) const {
  Map copy = entries_;
  copy.erase(p);
  return FileSystem(std::move(copy));
}

bool FileSystem::is_tree_closed() const {
  for (const auto& [p, v] : entries_) {
    if (p.is_root()) {
      if (!v.is_dir()) return false;
      continue;
    }
    if (!is_dir(p.parent())) return false;
  }
  return true;
}

std::string FileSystem::str() const {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (const auto& [p, v] : entries_) {
    if (!first) out << ", ";
    first = false;
    out << p.str() << ": " << v.str();
  }
  out << '}';
  return out.str();
}

std::vector<ContentId> anonymous_contents(const ContentSet& taken, std::size_t n) {
  std::string prefix = "?";
  auto collides = [&](const std::string& pre) {
    for (const ContentId& c : taken) {
      if (c.value.rfind(pre, 0) == 0) return true;
    }
    return false;
  };
  while (collides(prefix)) prefix += "?";
  std::vector<ContentId> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(ContentId{prefix + std::to_string(i)});
  return out;
}

}  // namespace ppv::fs
