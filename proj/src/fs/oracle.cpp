#include "ppverify/fs/oracle.hpp"

#include "ppverify/error.hpp"

namespace ppv::fs {

namespace {

class Enumerator {
 public:
  Enumerator(const PathSet& paths, const ContentSet& contents, std::size_t anonymous,
             const std::function<bool(const FileSystem&)>& f)
      : paths_(paths.begin(), paths.end()), named_(contents.begin(), contents.end()), f_(f) {
    ContentSet taken(contents);
    anon_ = anonymous_contents(taken, anonymous);
    parent_.resize(paths_.size(), -1);
    for (std::size_t i = 0; i < paths_.size(); ++i) {
      if (paths_[i].is_root()) continue;
      auto it = paths.find(paths_[i].parent());
      if (it == paths.end()) throw InputError("path set is not parent-closed: missing parent of " + paths_[i].str());
      parent_[i] = static_cast<int>(std::distance(paths.begin(), it));
    }
    is_dir_.assign(paths_.size(), false);
  }

  bool run() { return go(0, 0); }

 private:
  bool go(std::size_t i, std::size_t anon_used) {
    if (i == paths_.size()) return f_(FileSystem(current_));
    const Path& p = paths_[i];
    bool parent_dir = parent_[i] < 0 || is_dir_[static_cast<std::size_t>(parent_[i])];

    // Absent.
    is_dir_[i] = false;
    if (!go(i + 1, anon_used)) return false;
    if (!parent_dir) return true;

    // Directory (root may be a directory; it can never be a file).
    is_dir_[i] = true;
    current_.emplace(p, FileContent::dir());
    bool keep = go(i + 1, anon_used);
    current_.erase(p);
    is_dir_[i] = false;
    if (!keep || p.is_root()) return keep;

    for (const ContentId& c : named_) {
      current_.emplace(p, FileContent::file(c));
      keep = go(i + 1, anon_used);
      current_.erase(p);
      if (!keep) return false;
    }
    for (std::size_t j = 0; j < anon_.size() && j <= anon_used; ++j) {
      current_.emplace(p, FileContent::file(anon_[j]));
      keep = go(i + 1, j == anon_used ? anon_used + 1 : anon_used);
      current_.erase(p);
      if (!keep) return false;
    }
    return true;
  }

  std::vector<Path> paths_;
  std::vector<ContentId> named_;
  std::vector<ContentId> anon_;
  std::vector<int> parent_;
  std::vector<bool> is_dir_;
  FileSystem::Map current_;
  const std::function<bool(const FileSystem&)>& f_;
};

}  // namespace

bool for_each_filesystem(const PathSet& paths, const ContentSet& contents,
                         const std::function<bool(const FileSystem&)>& f, std::size_t anonymous) {
  return Enumerator(paths, contents, anonymous, f).run();
}

std::vector<FileSystem> enumerate_filesystems(const PathSet& paths, const ContentSet& contents) {
  std::vector<FileSystem> out;
  for_each_filesystem(paths, contents, [&](const FileSystem& fs) {
    out.push_back(fs);
    return true;
  });
  return out;
}

std::size_t anonymous_contents_needed(const std::vector<Expr>& exprs) {
  PathSet sources;
  for (const Expr& e : exprs) collect_copy_sources(e, sources);
  return 1 + sources.size();
}

std::optional<FileSystem> oracle_counterexample(const Expr& e1, const Expr& e2, const PathSet& paths,
                                                const ContentSet& contents) {
  std::optional<FileSystem> witness;
  for_each_filesystem(
      paths, contents,
      [&](const FileSystem& fs) {
        if (eval(e1, fs) != eval(e2, fs)) {
          witness = fs;
          return false;
        }
        return true;
      },
      anonymous_contents_needed({e1, e2}));
  return witness;
}

bool oracle_equiv(const Expr& e1, const Expr& e2, const PathSet& paths, const ContentSet& contents) {
  return !oracle_counterexample(e1, e2, paths, contents).has_value();
}

}  // namespace ppv::fs
