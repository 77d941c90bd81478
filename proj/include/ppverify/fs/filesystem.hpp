#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ppverify/fs/path.hpp"

namespace ppv::fs {

// What a path holds: a directory, or a file with an opaque content token.
class FileContent {
 public:
  enum class Kind { Dir, File };

  static FileContent dir() { return FileContent(Kind::Dir, {}); }
  static FileContent file(ContentId content) { return FileContent(Kind::File, std::move(content)); }

  Kind kind() const { return kind_; }
  bool is_dir() const { return kind_ == Kind::Dir; }
  bool is_file() const { return kind_ == Kind::File; }
  // Only meaningful for files.
  const ContentId& content() const { return content_; }

  std::string str() const;

  auto operator<=>(const FileContent&) const = default;
  bool operator==(const FileContent&) const = default;

 private:
  FileContent(Kind kind, ContentId content) : kind_(kind), content_(std::move(content)) {}

  Kind kind_;
  ContentId content_;
};

// A finite map from paths to contents. Values are immutable: every update
// returns a new filesystem, so states can be shared freely between explored
// orderings. Paths absent from the map do not exist.
class FileSystem {
 public:
  using Map = std::map<Path, FileContent>;

  FileSystem() = default;
  explicit FileSystem(Map entries) : entries_(std::move(entries)) {}

  const Map& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  const FileContent* find(const Path& p) const;
  bool exists(const Path& p) const { return entries_.contains(p); }
  bool is_dir(const Path& p) const;
  bool is_file(const Path& p) const;
  // True if some direct child of p exists.
  bool has_children(const Path& p) const;

  FileSystem with(const Path& p, FileContent v) const;
  FileSystem without(const Path& p) const;

  // Every non-root member's parent is a member and a directory; the root, if
  // present, is a directory.
  bool is_tree_closed() const;

  std::string str() const;

  auto operator<=>(const FileSystem&) const = default;
  bool operator==(const FileSystem&) const = default;

 private:
  Map entries_;
};

// n content ids that stand for "some content not otherwise named", chosen so
// they never collide with `taken`. Deterministic for given arguments.
std::vector<ContentId> anonymous_contents(const ContentSet& taken, std::size_t n);

}  // namespace ppv::fs
