#include <gtest/gtest.h>

#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ppverify/error.hpp"
#include "ppverify/fs/oracle.hpp"
#include "ppverify/fs/sexpr.hpp"
#include "ppverify/smt/dom.hpp"
#include "ppverify/smt/equiv.hpp"
#include "ppverify/smt/sexp.hpp"
#include "support/generators.hpp"

using namespace ppv;
using namespace ppv::fs;
using namespace ppv::smt;

namespace {

Path P(const char* s) { return Path::parse(s); }
ContentId C(const char* s) { return ContentId{s}; }

SmtContext& shared_context() {
  static SmtContext ctx(SolverConfig{});
  return ctx;
}

}  // namespace

TEST(Dom, Examples) {
  EXPECT_EQ(dom_bound(Expr::mkdir(P("/a/b"))), (PathSet{P("/"), P("/a"), P("/a/b")}));
  EXPECT_TRUE(dom_bound(Expr::skip()).empty());
  Expr guard = Expr::if_(Pred::is_empty_dir(P("/a")), Expr::skip(), Expr::error());
  PathSet d = dom_bound(guard);
  EXPECT_EQ(d, (PathSet{P("/"), P("/a"), Path::parse("/a/⋆0")}));
  EXPECT_EQ(dom_bound(Expr::cp(P("/s"), P("/d/t"))), (PathSet{P("/"), P("/s"), P("/d"), P("/d/t")}));
}

TEST(Dom, FreshNameAvoidsCollisions) {
  Path clash = P("/a").child("⋆0");
  std::array<Expr, 1> e{Expr::seq(Expr::rm(P("/a")), Expr::mkdir(clash))};
  PathSet d = dom_bound(e);
  EXPECT_TRUE(d.contains(P("/a").child("⋆1")));
}

TEST(Dom, IsParentClosed) {
  testgen::ExprGen gen(7);
  for (int i = 0; i < 200; ++i) EXPECT_TRUE(is_parent_closed(dom_bound(gen.expr(3))));
}

TEST(SolverSexp, ParsesPartialAndComplete) {
  std::size_t used = 0;
  EXPECT_FALSE(parse_sexp("((in0 (File", used));
  auto v = parse_sexp("((in0 (File\n c1)) (in1 DNE))\n", used);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->str(), "((in0 (File c1)) (in1 DNE))");
  auto s = parse_sexp("sat\n", used);
  ASSERT_TRUE(s);
  EXPECT_TRUE(s->is("sat"));
  EXPECT_FALSE(parse_sexp("sat", used));  // may still grow
  auto e = parse_sexp("(error \"line 3: \"\"x\"\"\")\n", used);
  ASSERT_TRUE(e);
  EXPECT_TRUE(e->list[0].is("error"));
}

TEST(Solver, ReportsMissingBinary) {
  SmtContext ctx(SolverConfig{"/nonexistent/solver", {}, std::chrono::seconds(5)});
  Encoder enc({}, {}, 1);
  EXPECT_THROW(ctx.check("x", enc.script(), {}), SolverFailure);
}

TEST(Solver, TimeoutKillsAndRecovers) {
  // A shell "solver" that never answers.
  SmtContext slow(SolverConfig{"/bin/sh", {"-c", "cat > /dev/null"}, std::chrono::seconds(1)});
  Encoder enc({}, {}, 1);
  EXPECT_THROW(slow.check("x", enc.script(), {}), SolverFailure);
  EXPECT_THROW(slow.check("x", enc.script(), {}), SolverFailure);
}

TEST(Solver, ReportsSolverErrors) {
  SmtContext& ctx = shared_context();
  EXPECT_THROW(ctx.check("bad", "(assert (= undefined_symbol 1))\n", {}), SolverFailure);
  // The session recovers for the next query.
  EXPECT_FALSE(check_equiv(Expr::skip(), Expr::skip(), ctx));
}

TEST(Encoder, OkOfBasicForms) {
  Encoder enc({P("/"), P("/a"), P("/a/⋆0")}, {}, 1);
  LogicalState in = enc.input();
  EXPECT_EQ(enc.step(Expr::skip(), in).ok, "true");
  EXPECT_EQ(enc.step(Expr::error(), in).ok, "false");
  EXPECT_EQ(enc.step(Expr::skip(), in).fs, in.fs);
  EXPECT_EQ(enc.step(Expr::error(), in).fs, in.fs);
  LogicalState created = enc.step(Expr::create_file(P("/a"), C("?0")), in);
  EXPECT_EQ(created.fs[enc.index_of(P("/a"))], "(File c0)");
  EXPECT_EQ(enc.pred(Pred::true_(), in), "true");
  EXPECT_THROW(enc.step(Expr::mkdir(P("/zz")), in), InternalError);
  // Rm references the fresh child.
  enc.step(Expr::rm(P("/a")), in);
  EXPECT_NE(enc.script().find("in2"), std::string::npos);
}

TEST(Equiv, SmallExamples) {
  SmtContext& ctx = shared_context();
  EXPECT_FALSE(check_equiv(Expr::skip(), Expr::skip(), ctx));

  Expr e1 = Expr::if_(Pred::is_empty_dir(P("/a")), Expr::skip(), Expr::error());
  Expr e2 = Expr::if_(Pred::is_dir(P("/a")), Expr::skip(), Expr::error());
  auto w = check_equiv(e1, e2, ctx);
  ASSERT_TRUE(w);
  EXPECT_TRUE(w->input.is_dir(P("/a")));
  EXPECT_TRUE(w->input.has_children(P("/a")));

  Expr expanded = parse_expr("(if (dne /p) (mkdir /p) (if (file? /p) error skip))");
  EXPECT_FALSE(check_equiv(idemdir(P("/p")), expanded, ctx));

  // Contradictory guard never takes the then-branch.
  Pred a = Pred::is_dir(P("/a"));
  EXPECT_FALSE(check_equiv(Expr::if_(Pred::and_(a, Pred::not_(a)), Expr::error(), Expr::skip()), Expr::skip(), ctx));
}

TEST(Equiv, CopyThenRemoveIsNotIdempotent) {
  SmtContext& ctx = shared_context();
  Expr e = Expr::seq(Expr::cp(P("/src"), P("/dst")), Expr::rm(P("/src")));
  auto w = check_equiv(e, Expr::seq(e, e), ctx);
  ASSERT_TRUE(w);
  EXPECT_TRUE(w->first.is_ok());
  EXPECT_TRUE(w->second.is_err());
}

TEST(Equiv, CopiesOfDifferentUnnamedContents) {
  SmtContext& ctx = shared_context();
  Pred both = Pred::and_(Pred::is_file(P("/a")), Pred::is_file(P("/b")));
  Expr e1 = Expr::if_(both, Expr::cp(P("/a"), P("/c")), Expr::error());
  Expr e2 = Expr::if_(both, Expr::cp(P("/b"), P("/c")), Expr::error());
  EXPECT_TRUE(check_equiv(e1, e2, ctx));
}

TEST(Equiv, AgreesWithOracleOnRandomPairs) {
  SmtContext& ctx = shared_context();
  testgen::ExprGen gen(12345);
  int equivalent_pairs = 0;
  for (int i = 0; i < 400; ++i) {
    auto [e1, e2] = gen.pair();
    std::array<Expr, 2> both{e1, e2};
    ContentSet named = mentioned_contents(e1);
    collect_contents(e2, named);
    bool oracle = oracle_equiv(e1, e2, dom_bound(both), named);
    bool smt = !check_equiv(e1, e2, ctx).has_value();
    equivalent_pairs += oracle ? 1 : 0;
    ASSERT_EQ(oracle, smt) << to_sexpr(e1) << "\n" << to_sexpr(e2);
  }
  EXPECT_GT(equivalent_pairs, 40);
}

TEST(Emit, DumpsAreDeterministic) {
  auto dir = std::filesystem::temp_directory_path() / "ppv_emit_test";
  std::filesystem::remove_all(dir);
  auto run = [&](const std::filesystem::path& sub) {
    SmtContext ctx(SolverConfig{}, dir / sub);
    Expr e = parse_expr("(seq (cp /src /dst) (rm /src))");
    check_equiv(e, Expr::seq(e, e), ctx, "idem");
    std::ifstream in(dir / sub / "0001-idem.smt2");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string a = run("a");
  std::string b = run("b");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  std::filesystem::remove_all(dir);
}
