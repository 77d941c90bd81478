#include <gtest/gtest.h>

#include "ppverify/check/checker.hpp"
#include "ppverify/fs/sexpr.hpp"
#include "support/generators.hpp"

namespace ppv::check {
namespace {

using analysis::CompiledGraph;
using fs::Expr;

Expr E(const char* s) { return fs::parse_expr(s); }

smt::SmtContext& context() {
  static smt::SmtContext ctx(smt::SolverConfig{});
  return ctx;
}

CompiledGraph graph_of(std::vector<const char*> exprs, std::vector<std::pair<std::size_t, std::size_t>> edges) {
  CompiledGraph g;
  for (std::size_t i = 0; i < exprs.size(); ++i) {
    g.exprs.push_back(E(exprs[i]));
    g.labels.push_back("R" + std::to_string(i));
  }
  g.edges = std::move(edges);
  return g;
}

TEST(Checker, ConflictingWritesAreNonDeterministic) {
  Checker c(graph_of({"(create /a \"x\")", "(if (file? /a) (seq (rm /a) (create /a \"y\")) (create /a \"y\"))"}, {}),
            context());
  Verdict v = c.check_determinism();
  ASSERT_EQ(v.kind, Verdict::Kind::NonDeterministic);
  EXPECT_NE(*v.result_a, *v.result_b);
  EXPECT_EQ(c.run_order(v.order_a, *v.input), *v.result_a);
}

TEST(Checker, OrderingEdgeMakesItDeterministic) {
  Checker c(graph_of({"(create /a \"x\")", "(if (file? /a) (seq (rm /a) (create /a \"y\")) (create /a \"y\"))"},
                     {{0, 1}}),
            context());
  EXPECT_EQ(c.check_determinism().kind, Verdict::Kind::Deterministic);
}

TEST(Checker, PrefersSuccessDivergence) {
  // Either order may fail, but there are inputs where both succeed differently.
  Checker c(graph_of({"(if (dne /a) (create /a \"x\") skip)", "(if (dne /a) (create /a \"y\") skip)"}, {}),
            context());
  Verdict v = c.check_determinism();
  ASSERT_EQ(v.kind, Verdict::Kind::NonDeterministic);
  EXPECT_TRUE(v.result_a->is_ok());
  EXPECT_TRUE(v.result_b->is_ok());
}

TEST(Checker, IdempotenceRequiresDeterminism) {
  Checker c(graph_of({"(mkdir /a)"}, {}), context());
  EXPECT_THROW(c.check_idempotence(), DeterminismRequired);
  ASSERT_TRUE(c.check_determinism().holds());
  Verdict v = c.check_idempotence();
  ASSERT_EQ(v.kind, Verdict::Kind::NonIdempotent);
  EXPECT_TRUE(v.result_a->is_ok());
  EXPECT_TRUE(v.result_b->is_err());
}

TEST(Checker, IdempotentDirectoryChain) {
  Checker c(graph_of({"(if (dir? /a) skip (mkdir /a))", "(if (dne /a/b) (create /a/b \"x\") skip)"}, {{0, 1}}),
            context());
  ASSERT_TRUE(c.check_determinism().holds());
  EXPECT_EQ(c.check_idempotence().kind, Verdict::Kind::Idempotent);
}

TEST(Checker, Invariant) {
  Checker c(graph_of({"(if (file? /a) (seq (rm /a) (create /a \"x\")) (if (dne /a) (create /a \"x\") error))"}, {}),
            context());
  ASSERT_TRUE(c.check_determinism().holds());
  EXPECT_EQ(c.check_invariant_file(fs::Path::parse("/a"), fs::ContentId{"x"}).kind, Verdict::Kind::InvariantHolds);
  Verdict v = c.check_invariant_file(fs::Path::parse("/a"), fs::ContentId{"y"});
  EXPECT_EQ(v.kind, Verdict::Kind::InvariantViolated);
}

TEST(Checker, BudgetIsEnforced) {
  std::vector<const char*> exprs(7, "(if (dne /a) (create /a \"x\") (rm /a))");
  CheckOptions opts;
  opts.branch_budget = 5;
  Checker c(graph_of(exprs, {}), context(), opts);
  EXPECT_THROW(c.check_determinism(), BudgetExceeded);
}

TEST(Checker, AllTopologicalOrders) {
  CompiledGraph g = graph_of({"skip", "skip", "skip"}, {{0, 1}});
  EXPECT_EQ(all_topological_orders(g).size(), 3u);
}

// Verdicts agree with brute force over every ordering and input, with each
// reduction switched off in turn.
TEST(Checker, MatchesBruteForceOnRandomGraphs) {
  testgen::GraphGen gen(11);
  const std::vector<std::pair<const char*, CheckOptions>> configs = {
      {"default", {}},
      {"no-por", [] { CheckOptions o; o.por = false; return o; }()},
      {"no-prune", [] { CheckOptions o; o.prune = false; return o; }()},
      {"no-elim", [] { CheckOptions o; o.elim = false; return o; }()},
  };
  for (int i = 0; i < 150; ++i) {
    CompiledGraph g = gen.graph();
    bool expected = !brute_force_determinism(g).has_value();
    for (const auto& [name, opts] : configs) {
      Checker c(g, context(), opts);
      Verdict v = c.check_determinism();
      ASSERT_EQ(v.holds(), expected) << "iteration " << i << " config " << name;
    }
  }
}

}  // namespace
}  // namespace ppv::check
