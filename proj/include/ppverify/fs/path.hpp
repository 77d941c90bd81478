#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ppv::fs {

// An absolute, canonical path: a list of non-empty segments under "/".
// Ordering is lexicographic over segments, so a parent always sorts before
// its descendants and a directory's subtree is contiguous in ordered sets.
class Path {
 public:
  Path() = default;  // root

  static Path root() { return Path{}; }

  // Parses a canonical absolute path ("/", "/a/b"). Rejects relative paths,
  // empty segments, ".", "..", and trailing separators.
  static Path parse(std::string_view text);
  static std::optional<Path> try_parse(std::string_view text);

  // Lenient form used for package listings: collapses repeated separators,
  // drops trailing ones and "." segments, resolves "..".
  static std::optional<Path> normalize(std::string_view text);

  static bool valid_segment(std::string_view segment);

  bool is_root() const { return segments_.empty(); }
  std::size_t depth() const { return segments_.size(); }
  const std::vector<std::string>& segments() const { return segments_; }
  const std::string& name() const { return segments_.back(); }

  Path parent() const;
  Path child(std::string segment) const;

  // Strict ancestor test.
  bool is_ancestor_of(const Path& other) const;
  bool is_parent_of(const Path& other) const {
    return other.depth() == depth() + 1 && is_ancestor_of(other);
  }

  std::string str() const;

  auto operator<=>(const Path&) const = default;
  bool operator==(const Path&) const = default;

 private:
  std::vector<std::string> segments_;
};

using PathSet = std::set<Path>;

// Adds every ancestor of every member (root included when non-empty).
PathSet parent_closure(const PathSet& paths);
bool is_parent_closed(const PathSet& paths);

// Opaque, interned file-content token. Contents are never inspected.
struct ContentId {
  std::string value;

  auto operator<=>(const ContentId&) const = default;
  bool operator==(const ContentId&) const = default;
};

using ContentSet = std::set<ContentId>;

}  // namespace ppv::fs

template <>
struct std::hash<ppv::fs::Path> {
  std::size_t operator()(const ppv::fs::Path& p) const noexcept;
};
