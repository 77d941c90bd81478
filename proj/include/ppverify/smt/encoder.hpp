#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ppverify/fs/expr.hpp"
#include "ppverify/fs/filesystem.hpp"
#include "ppverify/smt/solver.hpp"

namespace ppv::smt {

// A symbolic program state: an ok-formula and one FState term per domain
// path (indexed like Encoder::paths()). Terms are SMT-LIB text: literals
// (DNE, Dir, (File cK), true, false) or names of shared definitions.
struct LogicalState {
  std::string ok;
  std::vector<std::string> fs;
};

// Builds one SMT-LIB 2 query over a fixed, parent-closed path domain. Each
// path's state is a value of the datatype FState = DNE | Dir | File(Content),
// where Content enumerates the named contents plus `anonymous` unnamed ones.
// Every compound term becomes a hash-consed define-fun, so emitted text is
// linear in the program size and byte-identical for identical queries.
class Encoder {
 public:
  Encoder(fs::PathSet dom, fs::ContentSet named, std::size_t anonymous);

  const std::vector<fs::Path>& paths() const { return paths_; }
  const std::vector<fs::ContentId>& contents() const { return contents_; }
  // Throws InternalError when p is outside the domain.
  std::size_t index_of(const fs::Path& p) const;
  bool in_domain(const fs::Path& p) const { return index_.contains(p); }

  // The symbolic input: ok = true, each path an unconstrained variable
  // (tree-closure is asserted on it once, in script()).
  LogicalState input() const;
  const std::vector<std::string>& input_names() const { return inputs_; }

  // ok⟦·⟧ and the symbolic update of one program, in one pass.
  LogicalState step(const fs::Expr& e, const LogicalState& s);
  std::string pred(const fs::Pred& a, const LogicalState& s);
  // Final states differ: ok flags differ, or both ok and some path differs.
  std::string differ(const LogicalState& a, const LogicalState& b);

  // Term builders (with constant folding).
  std::string mk_true() const { return "true"; }
  std::string mk_false() const { return "false"; }
  std::string mk_and(std::vector<std::string> xs);
  std::string mk_or(std::vector<std::string> xs);
  std::string mk_not(const std::string& x);
  std::string mk_ite_bool(const std::string& c, const std::string& a, const std::string& b);
  std::string mk_ite_state(const std::string& c, const std::string& a, const std::string& b);
  std::string mk_state_eq(const std::string& a, const std::string& b);
  std::string is_dne(const std::string& t);
  std::string is_dir(const std::string& t);
  std::string is_file(const std::string& t);
  std::string file_literal(const fs::ContentId& c) const;

  // A define-fun name for a Bool term, so it can be asked for in get-value.
  std::string name_bool(const std::string& b);

  void assert_(const std::string& b);

  // Complete query text (without check-sat).
  std::string script() const;

  // The concrete input filesystem chosen by a model that includes values for
  // input_names(). Throws InternalError on a model that is not tree-closed.
  fs::FileSystem decode_input(const CheckOutcome& model) const;

  std::size_t definition_count() const { return defs_.size(); }

 private:
  enum class Known { Dne, Dir, File, Unknown };
  Known known(const std::string& t) const;
  std::string define(const char* prefix, const char* sort, const std::string& body);
  void step_into(const fs::Expr& e, LogicalState& s);
  std::string empty_dir(const fs::Path& p, const LogicalState& s);
  fs::FileContent decode_value(const SExp& v) const;

  std::vector<fs::Path> paths_;
  std::map<fs::Path, std::size_t> index_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<fs::ContentId> contents_;
  std::map<fs::ContentId, std::size_t> content_index_;
  std::vector<std::string> inputs_;
  std::vector<std::string> defs_;
  std::unordered_map<std::string, std::string> memo_;
  std::vector<std::string> asserts_;
  std::size_t next_name_ = 0;
};

}  // namespace ppv::smt
