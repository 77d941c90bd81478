#include <gtest/gtest.h>

#include "ppverify/error.hpp"
#include "ppverify/fs/eval.hpp"
#include "ppverify/fs/oracle.hpp"
#include "ppverify/fs/sexpr.hpp"

using namespace ppv;
using namespace ppv::fs;

namespace {

Path P(const char* s) { return Path::parse(s); }
ContentId C(const char* s) { return ContentId{s}; }

FileSystem fs_of(std::initializer_list<std::pair<const char*, FileContent>> entries) {
  FileSystem::Map m;
  for (const auto& [p, v] : entries) m.emplace(P(p), v);
  return FileSystem(m);
}

}  // namespace

TEST(Path, ParseAndPrint) {
  EXPECT_EQ(P("/").str(), "/");
  EXPECT_EQ(P("/a/b").str(), "/a/b");
  EXPECT_EQ(P("/a/b").parent(), P("/a"));
  EXPECT_TRUE(P("/").is_ancestor_of(P("/a")));
  EXPECT_TRUE(P("/a").is_parent_of(P("/a/b")));
  EXPECT_FALSE(P("/a").is_ancestor_of(P("/ab")));
  EXPECT_FALSE(Path::try_parse("a/b"));
  EXPECT_FALSE(Path::try_parse("/a/"));
  EXPECT_FALSE(Path::try_parse("/a//b"));
  EXPECT_FALSE(Path::try_parse("/a/../b"));
  EXPECT_THROW(P("/").parent(), std::logic_error);
  EXPECT_EQ(*Path::normalize("//usr/./bin/"), P("/usr/bin"));
}

TEST(Path, OrderKeepsSubtreesContiguous) {
  PathSet s{P("/a/b"), P("/a-x"), P("/a"), P("/"), P("/a/b/c"), P("/b")};
  std::vector<std::string> order;
  for (const Path& p : s) order.push_back(p.str());
  EXPECT_EQ(order, (std::vector<std::string>{"/", "/a", "/a/b", "/a/b/c", "/a-x", "/b"}));
}

TEST(EvalPred, Definitions) {
  FileSystem fs = fs_of({{"/", FileContent::dir()}, {"/a", FileContent::dir()}});
  EXPECT_TRUE(eval_pred(Pred::is_dir(P("/a")), fs));
  FileSystem with_child =
      fs_of({{"/", FileContent::dir()}, {"/a", FileContent::dir()}, {"/a/b", FileContent::file(C("x"))}});
  EXPECT_FALSE(eval_pred(Pred::is_empty_dir(P("/a")), with_child));
  EXPECT_TRUE(eval_pred(Pred::is_empty_dir(P("/a")), fs));
  EXPECT_FALSE(eval_pred(Pred::not_(Pred::dne(P("/a"))), fs_of({{"/", FileContent::dir()}})));
  EXPECT_TRUE(eval_pred(Pred::is_file(P("/a/b")), with_child));
  EXPECT_FALSE(eval_pred(Pred::and_(Pred::true_(), Pred::false_()), fs));
  EXPECT_TRUE(eval_pred(Pred::or_(Pred::false_(), Pred::true_()), fs));
}

TEST(Eval, Basics) {
  FileSystem root = fs_of({{"/", FileContent::dir()}});
  EXPECT_EQ(eval(Expr::skip(), root), EvalResult::ok(root));
  EXPECT_TRUE(eval(Expr::error(), root).is_err());
  EXPECT_TRUE(eval(Expr::mkdir(P("/a/b")), root).is_err());
  EvalResult r = eval(Expr::mkdir(P("/a")), root);
  ASSERT_TRUE(r.is_ok());
  EXPECT_TRUE(r.fs().is_dir(P("/a")));
  EXPECT_TRUE(eval(Expr::mkdir(P("/a")), r).is_err());
  EXPECT_TRUE(eval(Expr::rm(P("/")), root).is_err());
  EXPECT_TRUE(eval(Expr::mkdir(P("/")), FileSystem()).is_err());
}

TEST(Eval, RmNeedsFileOrEmptyDir) {
  FileSystem fs =
      fs_of({{"/", FileContent::dir()}, {"/a", FileContent::dir()}, {"/a/b", FileContent::file(C("x"))}});
  EXPECT_TRUE(eval(Expr::rm(P("/a")), fs).is_err());
  EvalResult r = eval(Expr::seq(Expr::rm(P("/a/b")), Expr::rm(P("/a"))), fs);
  ASSERT_TRUE(r.is_ok());
  EXPECT_EQ(r.fs(), fs_of({{"/", FileContent::dir()}}));
  EXPECT_TRUE(eval(Expr::rm(P("/z")), fs).is_err());
}

TEST(Eval, CopyThenRemoveIsNotRepeatable) {
  FileSystem fs = fs_of({{"/", FileContent::dir()}, {"/src", FileContent::file(C("c"))}});
  Expr e = Expr::seq(Expr::cp(P("/src"), P("/dst")), Expr::rm(P("/src")));
  EvalResult once = eval(e, fs);
  ASSERT_TRUE(once.is_ok());
  EXPECT_EQ(once.fs(), fs_of({{"/", FileContent::dir()}, {"/dst", FileContent::file(C("c"))}}));
  EXPECT_TRUE(eval(e, once).is_err());
}

TEST(Eval, CopyCarriesContent) {
  FileSystem fs = fs_of({{"/", FileContent::dir()}, {"/s", FileContent::file(C("k"))}, {"/d", FileContent::dir()}});
  EvalResult r = eval(Expr::cp(P("/s"), P("/d/t")), fs);
  ASSERT_TRUE(r.is_ok());
  EXPECT_EQ(*r.fs().find(P("/d/t")), FileContent::file(C("k")));
  EXPECT_TRUE(eval(Expr::cp(P("/d"), P("/t")), fs).is_err());
  EXPECT_TRUE(eval(Expr::cp(P("/s"), P("/s/t")), fs).is_err());
}

TEST(Eval, IdemdirIsIdempotentOnAllInputs) {
  Expr e = idemdir(P("/a"));
  EXPECT_TRUE(is_idemdir(e));
  PathSet paths{P("/"), P("/a"), P("/a/x")};
  EXPECT_TRUE(oracle_equiv(e, Expr::seq(e, e), paths, {C("c")}));
}

TEST(Eval, PreservesTreeClosure) {
  PathSet paths{P("/"), P("/a"), P("/a/b"), P("/c")};
  std::vector<Expr> programs = {
      Expr::mkdir(P("/a")),           Expr::rm(P("/a")),
      Expr::cp(P("/c"), P("/a/b")),   Expr::create_file(P("/a/b"), C("x")),
      Expr::seq(Expr::rm(P("/a/b")), Expr::rm(P("/a")))};
  for (const Expr& e : programs) {
    for (const FileSystem& fs : enumerate_filesystems(paths, {C("x")})) {
      EvalResult r = eval(e, fs);
      if (r.is_ok()) EXPECT_TRUE(r.fs().is_tree_closed()) << to_sexpr(e) << " on " << fs.str();
    }
  }
}

TEST(MentionedPaths, Examples) {
  EXPECT_TRUE(mentioned_paths(Expr::skip()).empty());
  EXPECT_EQ(mentioned_paths(Expr::mkdir(P("/a/b"))), PathSet{P("/a/b")});
  EXPECT_EQ(mentioned_paths(Expr::if_(Pred::is_empty_dir(P("/a")), Expr::skip(), Expr::error())), PathSet{P("/a")});
  EXPECT_EQ(mentioned_paths(Expr::cp(P("/s"), P("/d"))), (PathSet{P("/s"), P("/d")}));
  EXPECT_EQ(mentioned_contents(Expr::seq(Expr::create_file(P("/f"), C("q")), Expr::skip())), ContentSet{C("q")});
}

// Expected counts below are derived by hand: each path is absent, a directory
// (if its parent is one), or a file with one of the contents (never the root).
TEST(Enumerate, HandCountedExamples) {
  auto just_root = enumerate_filesystems({P("/")}, {});
  ASSERT_EQ(just_root.size(), 2u);
  EXPECT_EQ(just_root[0], FileSystem());
  EXPECT_EQ(just_root[1], fs_of({{"/", FileContent::dir()}}));

  auto two = enumerate_filesystems({P("/"), P("/a")}, {C("c")});
  std::set<FileSystem> got(two.begin(), two.end());
  std::set<FileSystem> want{FileSystem(), fs_of({{"/", FileContent::dir()}}),
                            fs_of({{"/", FileContent::dir()}, {"/a", FileContent::dir()}}),
                            fs_of({{"/", FileContent::dir()}, {"/a", FileContent::file(C("c"))}})};
  EXPECT_EQ(two.size(), 4u);
  EXPECT_EQ(got, want);

  auto none = enumerate_filesystems({}, {});
  ASSERT_EQ(none.size(), 1u);
  EXPECT_TRUE(none[0].empty());

  EXPECT_THROW(enumerate_filesystems({P("/a")}, {}), InputError);
}

TEST(Enumerate, AllResultsAreTreeClosedAndDistinct) {
  PathSet paths{P("/"), P("/a"), P("/a/b"), P("/c")};
  auto all = enumerate_filesystems(paths, {C("x"), C("y")});
  std::set<FileSystem> uniq(all.begin(), all.end());
  EXPECT_EQ(uniq.size(), all.size());
  for (const auto& fs : all) EXPECT_TRUE(fs.is_tree_closed());
  // root absent: 1; root dir: /a in {dne, dir, x, y} x /c in {dne, dir, x, y},
  // with /a/b free (4 choices) only when /a is a dir: (1*4 + 3) * 4 = 28.
  EXPECT_EQ(all.size(), 1u + 28u);
}

TEST(Oracle, EmptinessWitnessNeedsAChild) {
  Expr e1 = Expr::if_(Pred::is_empty_dir(P("/a")), Expr::skip(), Expr::error());
  Expr e2 = Expr::if_(Pred::is_dir(P("/a")), Expr::skip(), Expr::error());
  EXPECT_TRUE(oracle_equiv(Expr::skip(), Expr::skip(), {P("/")}, {}));
  EXPECT_FALSE(oracle_equiv(e1, e2, {P("/"), P("/a"), P("/a/x")}, {}));
  EXPECT_TRUE(oracle_equiv(e1, e2, {P("/"), P("/a")}, {}));
}

TEST(Oracle, UnnamedContentsDistinguishCopies) {
  // Both copies need both sources to be files; they differ only when the
  // sources hold different (unnamed) contents.
  Pred both = Pred::and_(Pred::is_file(P("/a")), Pred::is_file(P("/b")));
  Expr e1 = Expr::if_(both, Expr::cp(P("/a"), P("/c")), Expr::error());
  Expr e2 = Expr::if_(both, Expr::cp(P("/b"), P("/c")), Expr::error());
  EXPECT_FALSE(oracle_equiv(e1, e2, {P("/"), P("/a"), P("/b"), P("/c")}, {}));
}

TEST(Sexpr, RoundTrip) {
  const char* texts[] = {
      "skip",
      "error",
      "(seq (mkdir /a) (create /a/f \"c\"))",
      "(seq (mkdir /a) (rm /a) (cp /x /y))",
      "(seq (seq skip error) skip)",
      "(if (and (dne /a) (not (or (file? /b) (empty? /c)))) (mkdir /a) (if (dir? /a) skip error))",
      "(create \"/with space\" \"q\\\"uote\")",
  };
  for (const char* t : texts) {
    Expr e = parse_expr(t);
    EXPECT_EQ(to_sexpr(e), t);
    EXPECT_EQ(parse_expr(to_sexpr(e)), e);
  }
  EXPECT_EQ(to_sexpr(idemdir(P("/d"))), "(if (dne /d) (mkdir /d) (if (file? /d) error skip))");
  EXPECT_EQ(to_sexpr(parse_pred("(empty? /a)")), "(empty? /a)");
  EXPECT_THROW(parse_expr("(mkdir a)"), InputError);
  EXPECT_THROW(parse_expr("(seq skip)"), InputError);
  EXPECT_THROW(parse_expr("(mkdir /a) x"), InputError);
}

TEST(Expr, StructuralEqualityAndSequence) {
  EXPECT_EQ(Expr::mkdir(P("/a")), Expr::mkdir(P("/a")));
  EXPECT_FALSE(Expr::mkdir(P("/a")) == Expr::rm(P("/a")));
  EXPECT_EQ(sequence({Expr::skip(), Expr::skip()}), Expr::skip());
  Expr s = sequence({Expr::mkdir(P("/a")), Expr::skip(), Expr::rm(P("/a"))});
  EXPECT_EQ(s, Expr::seq(Expr::mkdir(P("/a")), Expr::rm(P("/a"))));
}
