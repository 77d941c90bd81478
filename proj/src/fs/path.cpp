#include "ppverify/fs/path.hpp"

#include <stdexcept>

#include "ppverify/error.hpp"

namespace ppv::fs {

bool Path::valid_segment(std::string_view segment) {
  if (segment.empty() || segment == "." || segment == "..") return false;
  for (char c : segment) {
    if (c == '/' || c == '\0' || c == '\n' || c == '\r') return false;
  }
  return true;
}

std::optional<Path> Path::try_parse(std::string_view text) {
  if (text.empty() || text.front() != '/') return std::nullopt;
  Path p;
  if (text == "/") return p;
  std::size_t pos = 1;
  while (true) {
    std::size_t next = text.find('/', pos);
    std::string_view seg = text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    if (!valid_segment(seg)) return std::nullopt;
    p.segments_.emplace_back(seg);
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return p;
}

Path Path::parse(std::string_view text) {
  auto p = try_parse(text);
  if (!p) throw InputError("invalid path: '" + std::string(text) + "'");
  return *p;
}

std::optional<Path> Path::normalize(std::string_view text) {
  if (text.empty() || text.front() != '/') return std::nullopt;
  Path p;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find('/', pos);
    if (next == std::string_view::npos) next = text.size();
    std::string_view seg = text.substr(pos, next - pos);
    pos = next + 1;
    if (seg.empty() || seg == ".") continue;
    if (seg == "..") {
      if (p.segments_.empty()) return std::nullopt;
      p.segments_.pop_back();
      continue;
    }
    if (!valid_segment(seg)) return std::nullopt;
    p.segments_.emplace_back(seg);
  }
  return p;
}

Path Path::parent() const {
  if (is_root()) throw std::logic_error("root has no parent");
  Path p = *this;
  p.segments_.pop_back();
  return p;
}

Path Path::child(std::string segment) const {
  if (!valid_segment(segment)) throw InputError("invalid path segment: '" + segment + "'");
  Path p = *this;
  p.segments_.push_back(std::move(segment));
  return p;
}

bool Path::is_ancestor_of(const Path& other) const {
  if (other.segments_.size() <= segments_.size()) return false;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (segments_[i] != other.segments_[i]) return false;
  }
  return true;
}

std::string Path::str() const {
  if (is_root()) return "/";
  std::string out;
  for (const auto& s : segments_) {
    out += '/';
    out += s;
  }
  return out;
}

PathSet parent_closure(const PathSet& paths) {
  PathSet out;
  for (const Path& p : paths) {
    Path cur = p;
    while (out.insert(cur).second && !cur.is_root()) cur = cur.parent();
  }
  return out;
}

bool is_parent_closed(const PathSet& paths) {
  for (const Path& p : paths) {
    if (!p.is_root() && !paths.contains(p.parent())) return false;
  }
  return true;
}

}  // namespace ppv::fs

std::size_t std::hash<ppv::fs::Path>::operator()(const ppv::fs::Path& p) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& s : p.segments()) {
    h ^= std::hash<std::string>{}(s) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}
