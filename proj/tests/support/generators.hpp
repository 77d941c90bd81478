#pragma once

// Seeded random generators of small IR programs and resource graphs for
// property tests against the brute-force oracles.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "ppverify/analysis/graph.hpp"
#include "ppverify/fs/expr.hpp"
#include "ppverify/smt/dom.hpp"

namespace ppv::testgen {

class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed, std::vector<fs::Path> pool = default_pool(),
                   std::vector<fs::ContentId> contents = {fs::ContentId{"x"}, fs::ContentId{"y"}})
      : rng_(seed), pool_(std::move(pool)), contents_(std::move(contents)) {}

  static std::vector<fs::Path> default_pool() {
    return {fs::Path::parse("/a"), fs::Path::parse("/b"), fs::Path::parse("/a/c")};
  }

  std::mt19937_64& rng() { return rng_; }
  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin(int percent = 50) { return below(100) < percent; }

  const fs::Path& path() { return pool_[static_cast<std::size_t>(below(static_cast<int>(pool_.size())))]; }
  // Occasionally the root, to exercise root side-conditions.
  fs::Path path_or_root() { return coin(8) ? fs::Path::root() : path(); }
  const fs::ContentId& content() {
    return contents_[static_cast<std::size_t>(below(static_cast<int>(contents_.size())))];
  }

  fs::Pred pred(int depth) {
    int k = below(depth > 0 ? 9 : 6);
    switch (k) {
      case 0:
        return fs::Pred::dne(path_or_root());
      case 1:
        return fs::Pred::is_file(path());
      case 2:
        return fs::Pred::is_dir(path_or_root());
      case 3:
        return fs::Pred::is_empty_dir(path_or_root());
      case 4:
        return coin() ? fs::Pred::true_() : fs::Pred::false_();
      case 5:
        return fs::Pred::dne(path());
      case 6:
        return fs::Pred::and_(pred(depth - 1), pred(depth - 1));
      case 7:
        return fs::Pred::or_(pred(depth - 1), pred(depth - 1));
      default:
        return fs::Pred::not_(pred(depth - 1));
    }
  }

  fs::Expr leaf() {
    switch (below(10)) {
      case 0:
        return fs::Expr::skip();
      case 1:
        return fs::Expr::error();
      case 2:
      case 3:
        return fs::Expr::mkdir(path_or_root());
      case 4:
      case 5:
        return fs::Expr::create_file(path(), content());
      case 6:
      case 7:
        return fs::Expr::rm(path_or_root());
      case 8:
        return fs::idemdir(path());
      default:
        return fs::Expr::cp(path(), path());
    }
  }

  fs::Expr expr(int depth) {
    if (depth <= 0) return leaf();
    switch (below(5)) {
      case 0:
      case 1:
        return leaf();
      case 2:
      case 3:
        return fs::Expr::seq(expr(depth - 1), expr(depth - 1));
      default:
        return fs::Expr::if_(pred(1), expr(depth - 1), expr(depth - 1));
    }
  }

  // A semantics-preserving (or nearly so) variant, so that random pairs are
  // often equivalent and the interesting boundary is exercised.
  fs::Expr variant(const fs::Expr& e) {
    switch (below(8)) {
      case 0:
        return fs::Expr::seq(e, fs::Expr::skip());
      case 1:
        return fs::Expr::if_(fs::Pred::true_(), e, expr(1));
      case 2: {
        fs::Pred g = pred(1);
        return fs::Expr::if_(g, e, e);
      }
      case 3:
        if (e.kind() == fs::Expr::Kind::Seq) return fs::Expr::seq(e.second(), e.first());
        return e;
      case 4:
        if (e.kind() == fs::Expr::Kind::If) {
          return fs::Expr::if_(fs::Pred::not_(e.guard()), e.else_branch(), e.then_branch());
        }
        return fs::Expr::seq(fs::Expr::skip(), e);
      case 5:
        return fs::Expr::seq(e, leaf());
      case 6:
        if (e.kind() == fs::Expr::Kind::If) return fs::Expr::if_(pred(1), e.then_branch(), e.else_branch());
        return e;
      default:
        return expr(2);
    }
  }

  // A pair whose joint bounded domain has at most `max_dom` paths.
  std::pair<fs::Expr, fs::Expr> pair(std::size_t max_dom = 5) {
    while (true) {
      fs::Expr e1 = expr(3);
      fs::Expr e2 = coin(60) ? variant(e1) : expr(3);
      std::vector<fs::Expr> both{e1, e2};
      if (smt::dom_bound(both).size() <= max_dom) return {e1, e2};
    }
  }

 private:
  std::mt19937_64 rng_;
  std::vector<fs::Path> pool_;
  std::vector<fs::ContentId> contents_;
};

// Small resource graphs whose programs look like compiled resources (guarded
// installs, idempotent directory creation, overwrites) mixed with arbitrary
// programs.
class GraphGen {
 public:
  explicit GraphGen(std::uint64_t seed)
      : exprs_(seed, {fs::Path::parse("/a"), fs::Path::parse("/a/b"), fs::Path::parse("/c"),
                      fs::Path::parse("/a/d")}) {}

  ExprGen& exprs() { return exprs_; }

  fs::Expr resource() {
    const fs::Path& p = exprs_.path();
    const fs::ContentId& c = exprs_.content();
    fs::Expr create = fs::Expr::create_file(p, c);
    switch (exprs_.below(7)) {
      case 0:  // overwrite a file
        return fs::Expr::if_(fs::Pred::is_file(p), fs::Expr::seq(fs::Expr::rm(p), create),
                             fs::Expr::if_(fs::Pred::dne(p), create, fs::Expr::error()));
      case 1:  // directory chain
        return p.parent().is_root() ? fs::idemdir(p) : fs::Expr::seq(fs::idemdir(p.parent()), fs::idemdir(p));
      case 2:  // create unless present
        return fs::Expr::if_(fs::Pred::dne(p), create, fs::Expr::skip());
      case 3:  // remove if a file
        return fs::Expr::if_(fs::Pred::is_file(p), fs::Expr::rm(p), fs::Expr::skip());
      case 4: {  // sentinel-guarded install
        const fs::Path& s = exprs_.path();
        return fs::Expr::if_(fs::Pred::is_file(s), fs::Expr::skip(), fs::Expr::seq(create, exprs_.leaf()));
      }
      default:
        return exprs_.expr(2);
    }
  }

  // At most `max_vertices` vertices, random forward edges (under a random
  // relabelling), and a joint bounded domain of at most `max_dom` paths.
  analysis::CompiledGraph graph(std::size_t max_vertices = 4, std::size_t max_dom = 6) {
    while (true) {
      analysis::CompiledGraph g;
      std::size_t n = 1 + static_cast<std::size_t>(exprs_.below(static_cast<int>(max_vertices)));
      for (std::size_t i = 0; i < n; ++i) {
        g.exprs.push_back(resource());
        g.labels.push_back("R" + std::to_string(i));
      }
      if (smt::dom_bound(g.exprs).size() > max_dom) continue;
      std::vector<std::size_t> perm(n);
      for (std::size_t i = 0; i < n; ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), exprs_.rng());
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (exprs_.coin(25)) g.edges.emplace_back(perm[i], perm[j]);
        }
      }
      return g;
    }
  }

 private:
  ExprGen exprs_;
};

}  // namespace ppv::testgen
