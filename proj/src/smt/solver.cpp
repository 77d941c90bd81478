#include "ppverify/smt/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "ppverify/error.hpp"

namespace ppv::smt {

std::vector<std::string> solver_arguments(const SolverConfig& config) {
  if (!config.args.empty()) return config.args;
  std::string base = std::filesystem::path(config.path).filename().string();
  if (base.find("cvc5") != std::string::npos || base.find("cvc4") != std::string::npos) {
    return {"--lang=smt2", "--incremental", "--produce-models"};
  }
  return {"-in", "-smt2"};
}

SolverSession::SolverSession(SolverConfig config) : config_(std::move(config)) {
  // A dead solver must surface as SolverFailure, not kill us on write().
  ::signal(SIGPIPE, SIG_IGN);
}

SolverSession::~SolverSession() { stop(); }

void SolverSession::start() {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw SolverFailure(std::string("pipe: ") + std::strerror(errno));
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw SolverFailure(std::string("pipe: ") + std::strerror(errno));
  }
  std::vector<std::string> args = solver_arguments(config_);
  std::vector<char*> argv;
  argv.push_back(const_cast<char*>(config_.path.c_str()));
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = ::fork();
  if (pid < 0) throw SolverFailure(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    int devnull = ::open("/dev/null", O_WRONLY);
    if (devnull >= 0) ::dup2(devnull, STDERR_FILENO);
    ::execvp(argv[0], argv.data());
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  buffer_.clear();
}

void SolverSession::stop() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    ::kill(pid_, SIGKILL);
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
  pid_ = -1;
  buffer_.clear();
}

void SolverSession::fail(const std::string& what) {
  stop();
  throw SolverFailure("solver '" + config_.path + "': " + what);
}

namespace {

int remaining_ms(std::chrono::steady_clock::time_point deadline) {
  auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
  return left.count() <= 0 ? 0 : static_cast<int>(std::min<long long>(left.count(), 1 << 30));
}

}  // namespace

void SolverSession::send(const std::string& text, std::chrono::steady_clock::time_point deadline) {
  std::size_t off = 0;
  while (off < text.size()) {
    pollfd pfd{to_child_, POLLOUT, 0};
    int r = ::poll(&pfd, 1, remaining_ms(deadline));
    if (r == 0) fail("timed out after " + std::to_string(config_.timeout.count()) + "s");
    if (r < 0) {
      if (errno == EINTR) continue;
      fail(std::string("poll: ") + std::strerror(errno));
    }
    ssize_t n = ::write(to_child_, text.data() + off, text.size() - off);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      fail("process exited unexpectedly (could not start it, or it crashed)");
    }
    off += static_cast<std::size_t>(n);
  }
}

SExp SolverSession::receive(std::chrono::steady_clock::time_point deadline) {
  while (true) {
    std::size_t used = 0;
    if (auto v = parse_sexp(buffer_, used)) {
      buffer_.erase(0, used);
      return *v;
    }
    pollfd pfd{from_child_, POLLIN, 0};
    int r = ::poll(&pfd, 1, remaining_ms(deadline));
    if (r == 0) fail("timed out after " + std::to_string(config_.timeout.count()) + "s");
    if (r < 0) {
      if (errno == EINTR) continue;
      fail(std::string("poll: ") + std::strerror(errno));
    }
    char chunk[65536];
    ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      fail(std::string("read: ") + std::strerror(errno));
    }
    if (n == 0) fail("process exited unexpectedly (could not start it, or it crashed)");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

CheckOutcome SolverSession::check(const std::string& script, const std::vector<std::string>& terms) {
  if (pid_ < 0) start();
  auto deadline = std::chrono::steady_clock::now() + config_.timeout;
  send("(reset)\n" + script + "(check-sat)\n", deadline);

  SExp answer = receive(deadline);
  if (!answer.is_atom) {
    std::string what = answer.str();
    stop();
    throw SolverFailure("solver reported " + what);
  }
  CheckOutcome out;
  if (answer.atom == "sat") {
    out.result = SatResult::Sat;
  } else if (answer.atom == "unsat") {
    out.result = SatResult::Unsat;
  } else if (answer.atom == "unknown") {
    out.result = SatResult::Unknown;
  } else {
    fail("unexpected answer '" + answer.atom + "'");
  }
  if (out.result != SatResult::Sat || terms.empty()) return out;

  std::string request = "(get-value (";
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i != 0) request += ' ';
    request += terms[i];
  }
  request += "))\n";
  send(request, deadline);
  SExp values = receive(deadline);
  if (values.is_atom || (!values.list.empty() && values.list[0].is("error"))) {
    std::string what = values.str();
    stop();
    throw SolverFailure("solver reported " + what);
  }
  for (const SExp& pair : values.list) {
    if (pair.is_atom || pair.list.size() != 2) fail("malformed get-value response: " + values.str());
    out.values.insert_or_assign(pair.list[0].str(), pair.list[1]);
  }
  for (const auto& t : terms) {
    if (!out.values.contains(t)) fail("get-value response lacks '" + t + "'");
  }
  return out;
}

SmtContext::SmtContext(SolverConfig config, std::optional<std::filesystem::path> emit_dir)
    : session_(std::move(config)), emit_dir_(std::move(emit_dir)) {
  if (emit_dir_) std::filesystem::create_directories(*emit_dir_);
}

CheckOutcome SmtContext::check(const std::string& label, const std::string& script,
                               const std::vector<std::string>& terms) {
  ++counter_;
  if (emit_dir_) {
    char name[32];
    std::snprintf(name, sizeof name, "%04zu-", counter_);
    std::ofstream out(*emit_dir_ / (name + label + ".smt2"), std::ios::binary | std::ios::trunc);
    out << script << "(check-sat)\n";
    if (!terms.empty()) {
      out << "(get-value (";
      for (std::size_t i = 0; i < terms.size(); ++i) out << (i ? " " : "") << terms[i];
      out << "))\n";
    }
    if (!out) throw Error("cannot write SMT dump to " + emit_dir_->string());
  }
  auto start = std::chrono::steady_clock::now();
  CheckOutcome outcome = session_.check(script, terms);
  stats_.queries += 1;
  stats_.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return outcome;
}

}  // namespace ppv::smt
