#include "ppverify/smt/equiv.hpp"

#include <array>

#include "ppverify/error.hpp"
#include "ppverify/fs/oracle.hpp"
#include "ppverify/smt/dom.hpp"

namespace ppv::smt {

fs::FileSystem decode_model(const Encoder& encoder, const CheckOutcome& model) {
  return encoder.decode_input(model);
}

std::optional<Inequivalence> check_equiv(const fs::Expr& e1, const fs::Expr& e2, SmtContext& ctx,
                                         const std::string& label) {
  std::array<fs::Expr, 2> both{e1, e2};
  fs::ContentSet named;
  fs::collect_contents(e1, named);
  fs::collect_contents(e2, named);
  Encoder enc(dom_bound(both), named, fs::anonymous_contents_needed({e1, e2}));
  LogicalState in = enc.input();
  LogicalState s1 = enc.step(e1, in);
  LogicalState s2 = enc.step(e2, in);
  enc.assert_(enc.differ(s1, s2));
  CheckOutcome out = ctx.check(label, enc.script(), enc.input_names());
  if (out.result == SatResult::Unsat) return std::nullopt;
  if (out.result == SatResult::Unknown) throw SolverFailure("solver answered 'unknown' for an equivalence query");
  fs::FileSystem input = decode_model(enc, out);
  fs::EvalResult r1 = fs::eval(e1, input);
  fs::EvalResult r2 = fs::eval(e2, input);
  if (r1 == r2) throw InternalError("solver witness does not reproduce under eval: " + input.str());
  return Inequivalence{std::move(input), std::move(r1), std::move(r2)};
}

bool equivalent(const fs::Expr& e1, const fs::Expr& e2, SmtContext& ctx, const std::string& label) {
  return !check_equiv(e1, e2, ctx, label).has_value();
}

}  // namespace ppv::smt
