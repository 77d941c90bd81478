#include "ppverify/analysis/values.hpp"

#include <stdexcept>

namespace ppv::analysis {

ValueSet ValueSet::top() {
  ValueSet v;
  v.has_dne_ = v.has_dir_ = v.any_file_ = true;
  return v;
}

ValueSet ValueSet::none() { return ValueSet(); }

ValueSet ValueSet::dne() {
  ValueSet v;
  v.has_dne_ = true;
  return v;
}

ValueSet ValueSet::dir() {
  ValueSet v;
  v.has_dir_ = true;
  return v;
}

ValueSet ValueSet::file(const fs::ContentId& c) {
  ValueSet v;
  v.files_.insert(c);
  return v;
}

ValueSet ValueSet::of(const fs::FileContent& c) { return c.is_dir() ? dir() : file(c.content()); }

bool ValueSet::is_single() const {
  int n = (has_dne_ ? 1 : 0) + (has_dir_ ? 1 : 0) + (any_file_ ? 2 : static_cast<int>(files_.size()));
  return n == 1;
}

fs::FileContent ValueSet::single_value() const {
  if (!is_single() || has_dne_) throw std::logic_error("ValueSet::single_value on a non-singleton");
  if (has_dir_) return fs::FileContent::dir();
  return fs::FileContent::file(*files_.begin());
}

ValueSet ValueSet::files_only() const {
  ValueSet v = *this;
  v.has_dne_ = v.has_dir_ = false;
  return v;
}

ValueSet ValueSet::without_files() const {
  ValueSet v = *this;
  v.any_file_ = false;
  v.files_.clear();
  return v;
}

ValueSet ValueSet::without_dne() const {
  ValueSet v = *this;
  v.has_dne_ = false;
  return v;
}

ValueSet ValueSet::without_dir() const {
  ValueSet v = *this;
  v.has_dir_ = false;
  return v;
}

ValueSet ValueSet::join(const ValueSet& other) const {
  ValueSet v = *this;
  v.has_dne_ = has_dne_ || other.has_dne_;
  v.has_dir_ = has_dir_ || other.has_dir_;
  v.any_file_ = any_file_ || other.any_file_;
  if (v.any_file_) {
    v.files_.clear();
  } else {
    v.files_.insert(other.files_.begin(), other.files_.end());
  }
  return v;
}

std::string ValueSet::str() const {
  std::string out = "{";
  auto add = [&](const std::string& s) {
    if (out.size() > 1) out += ",";
    out += s;
  };
  if (has_dne_) add("dne");
  if (has_dir_) add("dir");
  if (any_file_) add("file(*)");
  for (const auto& c : files_) add("file(\"" + c.value + "\")");
  return out + "}";
}

bool always_errors(const fs::Expr& e) {
  switch (e.kind()) {
    case fs::Expr::Kind::Error:
      return true;
    case fs::Expr::Kind::Seq:
      return always_errors(e.first()) || always_errors(e.second());
    case fs::Expr::Kind::If:
      return always_errors(e.then_branch()) && always_errors(e.else_branch());
    default:
      return false;
  }
}

void collect_written_paths(const fs::Expr& e, fs::PathSet& out) {
  fs::for_each_in_seq(e, [&](const fs::Expr& part) {
    switch (part.kind()) {
      case fs::Expr::Kind::Mkdir:
      case fs::Expr::Kind::CreateFile:
      case fs::Expr::Kind::Rm:
      case fs::Expr::Kind::Cp:
        out.insert(part.path());
        return;
      case fs::Expr::Kind::If:
        collect_written_paths(part.then_branch(), out);
        collect_written_paths(part.else_branch(), out);
        return;
      default:
        return;
    }
  });
}

fs::PathSet written_paths(const fs::Expr& e) {
  fs::PathSet out;
  collect_written_paths(e, out);
  return out;
}

}  // namespace ppv::analysis
