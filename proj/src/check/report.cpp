#include "ppverify/check/report.hpp"

#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ppv::check {

namespace {

using nlohmann::ordered_json;

std::string state_of(const fs::FileContent* v) {
  if (v == nullptr) return "absent";
  if (v->is_dir()) return "dir";
  return "file(" + nlohmann::json(v->content().value).dump() + ")";
}

std::vector<std::string> name_order(const std::vector<std::size_t>& order, const std::vector<std::string>& labels) {
  std::vector<std::string> out;
  for (std::size_t v : order) out.push_back(v < labels.size() ? labels[v] : "#" + std::to_string(v));
  return out;
}

// Paths whose state differs between two successful results.
std::vector<fs::Path> differing_paths(const fs::FileSystem& a, const fs::FileSystem& b) {
  std::set<fs::Path> keys;
  for (const auto& [p, v] : a.entries()) keys.insert(p);
  for (const auto& [p, v] : b.entries()) keys.insert(p);
  std::vector<fs::Path> out;
  for (const fs::Path& p : keys) {
    const fs::FileContent* x = a.find(p);
    const fs::FileContent* y = b.find(p);
    if ((x == nullptr) != (y == nullptr) || (x != nullptr && *x != *y)) out.push_back(p);
  }
  return out;
}

ordered_json fs_json(const fs::FileSystem& f) {
  ordered_json out = ordered_json::object();
  for (const auto& [p, v] : f.entries()) out[p.str()] = state_of(&v);
  return out;
}

ordered_json result_json(const fs::EvalResult& r) {
  ordered_json out;
  out["ok"] = r.is_ok();
  if (r.is_ok()) out["fs"] = fs_json(r.fs());
  return out;
}

void text_fs(std::ostringstream& out, const fs::FileSystem& f, const std::string& indent) {
  if (f.empty()) {
    out << indent << "(empty: not even the root exists)\n";
    return;
  }
  for (const auto& [p, v] : f.entries()) out << indent << p.str() << "  " << state_of(&v) << "\n";
}

void text_verdict(std::ostringstream& out, const Verdict& v, const std::vector<std::string>& labels) {
  out << "verdict: " << verdict_name(v.kind) << "\n";
  if (v.holds() || !v.input) return;
  out << "counterexample input:\n";
  text_fs(out, *v.input, "  ");
  auto join = [](const std::vector<std::string>& xs) {
    std::string s;
    for (const std::string& x : xs) s += (s.empty() ? "" : " -> ") + x;
    return s.empty() ? std::string("(no resources)") : s;
  };
  switch (v.kind) {
    case Verdict::Kind::NonDeterministic: {
      out << "ordering A: " << join(name_order(v.order_a, labels)) << "\n";
      out << "ordering B: " << join(name_order(v.order_b, labels)) << "\n";
      const fs::EvalResult& a = *v.result_a;
      const fs::EvalResult& b = *v.result_b;
      if (a.is_ok() && b.is_ok()) {
        out << "both orderings succeed; differing paths (A vs B):\n";
        for (const fs::Path& p : differing_paths(a.fs(), b.fs())) {
          out << "  " << p.str() << "  " << state_of(a.fs().find(p)) << " vs " << state_of(b.fs().find(p)) << "\n";
        }
      } else {
        out << "ordering A " << (a.is_ok() ? "succeeds" : "fails") << "; ordering B "
            << (b.is_ok() ? "succeeds" : "fails") << "\n";
      }
      break;
    }
    case Verdict::Kind::NonIdempotent: {
      out << "ordering: " << join(name_order(v.order_a, labels)) << "\n";
      const fs::EvalResult& once = *v.result_a;
      const fs::EvalResult& twice = *v.result_b;
      if (once.is_ok() && twice.is_ok()) {
        out << "one run and two runs both succeed; differing paths (once vs twice):\n";
        for (const fs::Path& p : differing_paths(once.fs(), twice.fs())) {
          out << "  " << p.str() << "  " << state_of(once.fs().find(p)) << " vs " << state_of(twice.fs().find(p))
              << "\n";
        }
      } else {
        out << "one run " << (once.is_ok() ? "succeeds" : "fails") << "; two runs "
            << (twice.is_ok() ? "succeed" : "fail") << "\n";
      }
      break;
    }
    case Verdict::Kind::InvariantViolated:
      out << "ordering: " << join(name_order(v.order_a, labels)) << "\n";
      out << "result:\n";
      text_fs(out, v.result_a->fs(), "  ");
      break;
    default:
      break;
  }
}

}  // namespace

std::string render_result(const fs::EvalResult& r) { return r.str(); }

std::string render_text(const Report& r) {
  std::ostringstream out;
  out << r.command << " " << r.manifest << "\n";
  for (const Verdict& v : r.verdicts) text_verdict(out, v, r.labels);
  if (r.stats) {
    const CheckStats& s = *r.stats;
    out << "resources: " << s.resources << " (eliminated " << s.eliminated << ", explored " << s.explored_resources
        << "); orderings explored: " << s.branches << "; distinct final states: " << s.final_states << "\n";
    out << "pruned paths: " << s.pruned_paths << "; written paths: " << s.written_paths << " of "
        << s.written_paths_unpruned << "; domain: " << s.domain_size << " paths\n";
    out << "solver queries: " << s.solver_queries << " (" << std::fixed << std::setprecision(3) << s.solver_seconds
        << " s)\n";
  }
  out << "time: " << std::fixed << std::setprecision(3) << r.seconds << " s\n";
  return out.str();
}

std::string render_json(const Report& r) {
  ordered_json out;
  out["schema_version"] = kReportSchemaVersion;
  out["command"] = r.command;
  out["manifest"] = r.manifest;
  out["resources"] = r.labels;
  ordered_json verdicts = ordered_json::array();
  for (const Verdict& v : r.verdicts) {
    ordered_json j;
    j["verdict"] = verdict_name(v.kind);
    if (!v.holds() && v.input) {
      ordered_json cex;
      cex["input"] = fs_json(*v.input);
      ordered_json orders = ordered_json::array();
      orders.push_back(name_order(v.order_a, r.labels));
      if (v.kind == Verdict::Kind::NonDeterministic) orders.push_back(name_order(v.order_b, r.labels));
      cex["orderings"] = orders;
      ordered_json results = ordered_json::array();
      if (v.result_a) results.push_back(result_json(*v.result_a));
      if (v.result_b) results.push_back(result_json(*v.result_b));
      cex["results"] = results;
      j["counterexample"] = cex;
    }
    verdicts.push_back(j);
  }
  out["verdicts"] = verdicts;
  if (r.stats) {
    const CheckStats& s = *r.stats;
    out["stats"] = {{"resources", s.resources},
                    {"eliminated", s.eliminated},
                    {"explored_resources", s.explored_resources},
                    {"branches", s.branches},
                    {"final_states", s.final_states},
                    {"pruned_paths", s.pruned_paths},
                    {"written_paths", s.written_paths},
                    {"written_paths_unpruned", s.written_paths_unpruned},
                    {"domain_size", s.domain_size},
                    {"solver_queries", s.solver_queries},
                    {"solver_seconds", s.solver_seconds}};
  }
  out["timing"] = {{"seconds", r.seconds}};
  return out.dump(2) + "\n";
}

std::string render_error_json(const std::string& command, const std::string& kind, const std::string& message) {
  ordered_json out;
  out["schema_version"] = kReportSchemaVersion;
  out["command"] = command;
  out["error"] = {{"kind", kind}, {"message", message}};
  return out.dump(2) + "\n";
}

}  // namespace ppv::check
