#pragma once

#include <optional>
#include <string>

#include "ppverify/fs/eval.hpp"
#include "ppverify/smt/encoder.hpp"
#include "ppverify/smt/solver.hpp"

namespace ppv::smt {

struct Inequivalence {
  fs::FileSystem input;
  fs::EvalResult first;   // eval(e1, input)
  fs::EvalResult second;  // eval(e2, input)
};

// e1 ≐ e2 over all inputs: nullopt when equivalent, otherwise a concrete
// input on which they differ. The witness is re-checked with the concrete
// evaluator; a witness that does not reproduce raises InternalError.
// Throws SolverFailure if the solver fails or answers "unknown".
std::optional<Inequivalence> check_equiv(const fs::Expr& e1, const fs::Expr& e2, SmtContext& ctx,
                                         const std::string& label = "equiv");

// Convenience: true iff e1 ≐ e2.
bool equivalent(const fs::Expr& e1, const fs::Expr& e2, SmtContext& ctx, const std::string& label = "equiv");

// The concrete input filesystem of a satisfying model (see
// Encoder::decode_input).
fs::FileSystem decode_model(const Encoder& encoder, const CheckOutcome& model);

}  // namespace ppv::smt
