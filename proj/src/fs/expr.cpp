#include "ppverify/fs/expr.hpp"

#include <functional>
#include <stdexcept>

namespace ppv::fs {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

// ---------------------------------------------------------------- Pred

struct Pred::Node {
  Kind kind;
  Path path;
  std::vector<Pred> kids;
  std::size_t hash;
};

namespace {

std::size_t pred_hash(Pred::Kind kind, const Path* p, const std::vector<Pred>& kids) {
  std::size_t h = mix(0x51ed27, static_cast<std::size_t>(kind));
  if (p != nullptr) h = mix(h, std::hash<Path>{}(*p));
  for (const Pred& k : kids) h = mix(h, k.hash());
  return h;
}

}  // namespace

Pred::Pred() : Pred(true_()) {}

Pred Pred::true_() {
  static const auto node = std::make_shared<const Node>(Node{Kind::True, Path{}, {}, pred_hash(Kind::True, nullptr, {})});
  return Pred(node);
}

Pred Pred::false_() {
  static const auto node =
      std::make_shared<const Node>(Node{Kind::False, Path{}, {}, pred_hash(Kind::False, nullptr, {})});
  return Pred(node);
}

#define PPV_PRED_ATOM(fn, K)                                                       \
  Pred Pred::fn(Path p) {                                                          \
    std::size_t h = pred_hash(Kind::K, &p, {});                                    \
    return Pred(std::make_shared<const Node>(Node{Kind::K, std::move(p), {}, h})); \
  }
PPV_PRED_ATOM(dne, Dne)
PPV_PRED_ATOM(is_file, IsFile)
PPV_PRED_ATOM(is_dir, IsDir)
PPV_PRED_ATOM(is_empty_dir, IsEmptyDir)
#undef PPV_PRED_ATOM

Pred Pred::and_(Pred a, Pred b) {
  std::vector<Pred> kids{std::move(a), std::move(b)};
  std::size_t h = pred_hash(Kind::And, nullptr, kids);
  return Pred(std::make_shared<const Node>(Node{Kind::And, Path{}, std::move(kids), h}));
}

Pred Pred::or_(Pred a, Pred b) {
  std::vector<Pred> kids{std::move(a), std::move(b)};
  std::size_t h = pred_hash(Kind::Or, nullptr, kids);
  return Pred(std::make_shared<const Node>(Node{Kind::Or, Path{}, std::move(kids), h}));
}

Pred Pred::not_(Pred a) {
  std::vector<Pred> kids{std::move(a)};
  std::size_t h = pred_hash(Kind::Not, nullptr, kids);
  return Pred(std::make_shared<const Node>(Node{Kind::Not, Path{}, std::move(kids), h}));
}

Pred::Kind Pred::kind() const { return node_->kind; }

bool Pred::is_atom() const {
  switch (node_->kind) {
    case Kind::Dne:
    case Kind::IsFile:
    case Kind::IsDir:
    case Kind::IsEmptyDir:
      return true;
    default:
      return false;
  }
}

const Path& Pred::path() const {
  if (!is_atom()) throw std::logic_error("Pred::path on a non-atomic predicate");
  return node_->path;
}

const Pred& Pred::lhs() const {
  if (node_->kids.empty()) throw std::logic_error("Pred::lhs on a leaf predicate");
  return node_->kids[0];
}

const Pred& Pred::rhs() const {
  if (node_->kids.size() < 2) throw std::logic_error("Pred::rhs on a non-binary predicate");
  return node_->kids[1];
}

std::size_t Pred::hash() const { return node_->hash; }

bool Pred::operator==(const Pred& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  return a.hash == b.hash && a.kind == b.kind && a.path == b.path && a.kids == b.kids;
}

// ---------------------------------------------------------------- Expr

struct Expr::Node {
  Kind kind;
  Path path;
  Path src;
  ContentId content;
  std::vector<Pred> guard;  // empty or one element
  std::vector<Expr> kids;
  std::size_t hash;
  std::size_t size;
};

Expr::Expr() : Expr(skip()) {}

namespace {

std::size_t expr_hash(Expr::Kind kind, const Path& path, const Path& src, const ContentId& content,
                      const std::vector<Pred>& guard, const std::vector<Expr>& kids) {
  std::size_t h = mix(0xe1a5, static_cast<std::size_t>(kind));
  h = mix(h, std::hash<Path>{}(path));
  h = mix(h, std::hash<Path>{}(src));
  h = mix(h, std::hash<std::string>{}(content.value));
  for (const Pred& g : guard) h = mix(h, g.hash());
  for (const Expr& k : kids) h = mix(h, k.hash());
  return h;
}

}  // namespace

Expr Expr::make(Kind kind, Path path, Path src, ContentId content, std::vector<Pred> guard,
                std::vector<Expr> kids) {
  std::size_t h = expr_hash(kind, path, src, content, guard, kids);
  std::size_t size = 1;
  for (const Expr& k : kids) size += k.size();
  return Expr(std::make_shared<const Node>(
      Node{kind, std::move(path), std::move(src), std::move(content), std::move(guard), std::move(kids), h, size}));
}

Expr Expr::skip() {
  static const Expr e = make(Kind::Skip, {}, {}, {}, {}, {});
  return e;
}

Expr Expr::error() {
  static const Expr e = make(Kind::Error, {}, {}, {}, {}, {});
  return e;
}

Expr Expr::mkdir(Path p) { return make(Kind::Mkdir, std::move(p), {}, {}, {}, {}); }

Expr Expr::create_file(Path p, ContentId content) {
  return make(Kind::CreateFile, std::move(p), {}, std::move(content), {}, {});
}

Expr Expr::rm(Path p) { return make(Kind::Rm, std::move(p), {}, {}, {}, {}); }

Expr Expr::cp(Path src, Path dst) { return make(Kind::Cp, std::move(dst), std::move(src), {}, {}, {}); }

Expr Expr::seq(Expr first, Expr second) {
  return make(Kind::Seq, {}, {}, {}, {}, {std::move(first), std::move(second)});
}

Expr Expr::if_(Pred guard, Expr then_branch, Expr else_branch) {
  return make(Kind::If, {}, {}, {}, {std::move(guard)}, {std::move(then_branch), std::move(else_branch)});
}

Expr::Kind Expr::kind() const { return node_->kind; }

const Path& Expr::path() const {
  switch (node_->kind) {
    case Kind::Mkdir:
    case Kind::CreateFile:
    case Kind::Rm:
    case Kind::Cp:
      return node_->path;
    default:
      throw std::logic_error("Expr::path on an expression without a target");
  }
}

const Path& Expr::src() const {
  if (node_->kind != Kind::Cp) throw std::logic_error("Expr::src on a non-copy expression");
  return node_->src;
}

const ContentId& Expr::content() const {
  if (node_->kind != Kind::CreateFile) throw std::logic_error("Expr::content on a non-create expression");
  return node_->content;
}

const Pred& Expr::guard() const {
  if (node_->kind != Kind::If) throw std::logic_error("Expr::guard on a non-conditional expression");
  return node_->guard[0];
}

const Expr& Expr::first() const {
  if (node_->kids.size() != 2) throw std::logic_error("Expr::first on a leaf expression");
  return node_->kids[0];
}

const Expr& Expr::second() const {
  if (node_->kids.size() != 2) throw std::logic_error("Expr::second on a leaf expression");
  return node_->kids[1];
}

std::size_t Expr::hash() const { return node_->hash; }
std::size_t Expr::size() const { return node_->size; }

bool Expr::operator==(const Expr& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  return a.hash == b.hash && a.size == b.size && a.kind == b.kind && a.path == b.path && a.src == b.src &&
         a.content == b.content && a.guard == b.guard && a.kids == b.kids;
}

// ---------------------------------------------------------------- helpers

Expr idemdir(const Path& p) {
  return Expr::if_(Pred::dne(p), Expr::mkdir(p), Expr::if_(Pred::is_file(p), Expr::error(), Expr::skip()));
}

bool is_idemdir(const Expr& e, Path* target) {
  if (e.kind() != Expr::Kind::If) return false;
  const Pred& g = e.guard();
  if (g.kind() != Pred::Kind::Dne) return false;
  const Path& p = g.path();
  const Expr& t = e.then_branch();
  if (t.kind() != Expr::Kind::Mkdir || t.path() != p) return false;
  const Expr& f = e.else_branch();
  if (f.kind() != Expr::Kind::If) return false;
  if (f.guard().kind() != Pred::Kind::IsFile || f.guard().path() != p) return false;
  if (f.then_branch().kind() != Expr::Kind::Error || f.else_branch().kind() != Expr::Kind::Skip) return false;
  if (target != nullptr) *target = p;
  return true;
}

Expr sequence(const std::vector<Expr>& parts) {
  std::vector<const Expr*> kept;
  for (const Expr& e : parts) {
    if (e.kind() != Expr::Kind::Skip) kept.push_back(&e);
  }
  if (kept.empty()) return Expr::skip();
  Expr acc = *kept.back();
  for (std::size_t i = kept.size() - 1; i-- > 0;) acc = Expr::seq(*kept[i], std::move(acc));
  return acc;
}

}  // namespace ppv::fs
