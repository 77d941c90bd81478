#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "json.hpp"

namespace {

namespace stdfs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
};

// Runs the CLI with `args` (shell syntax), capturing stdout.
CliRun cli(const std::string& args) {
  std::string cmd = std::string("'") + PPV_CLI_PATH + "' " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string manifest(const char* name) { return std::string("'") + PPV_SOURCE_DIR + "/manifests/" + name + "'"; }

stdfs::path scratch(const char* name) {
  stdfs::path dir = stdfs::temp_directory_path() / ("ppv_cli_test_" + std::to_string(::getpid())) / name;
  stdfs::remove_all(dir);
  stdfs::create_directories(dir);
  return dir;
}

std::string slurp(const stdfs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write(const stdfs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

TEST(Cli, CheckExitCodes) {
  CliRun r = cli("check " + manifest("apache-config.pp"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("ordering A: "), std::string::npos);
  EXPECT_NE(r.out.find("ordering B: "), std::string::npos);
  EXPECT_EQ(cli("check " + manifest("apache-config-ordered.pp")).code, 0);
  EXPECT_EQ(cli("check /nonexistent/manifest.pp").code, 2);
  EXPECT_EQ(cli("check " + manifest("cpp-ocaml-modules.pp")).code, 2);
  EXPECT_EQ(cli("check").code, 2);
  EXPECT_EQ(cli("check " + manifest("apache-config.pp") + " --solver-path /nonexistent/z3").code, 3);
}

TEST(Cli, IdempotenceExitCodes) {
  EXPECT_EQ(cli("idempotence " + manifest("copy-then-remove.pp")).code, 1);
  EXPECT_EQ(cli("idempotence " + manifest("vim-carol-fixed.pp")).code, 0);
  EXPECT_EQ(cli("idempotence " + manifest("go-without-perl.pp")).code, 4);
}

TEST(Cli, Invariant) {
  stdfs::path dir = scratch("invariant");
  write(dir / "only.pp", "file{'/a': content => 'x' }\n");
  write(dir / "package.pp", "file{'/a': content => 'x' }\npackage{'p': }\nFile['/a'] -> Package['p']\n");
  write(dir / "db.json", "{\"packages\": {\"p\": {\"deps\": [], \"files\": [\"/a\"]}}, \"platform\": \"ubuntu-trusty\"}\n");
  std::string db = " --package-db '" + (dir / "db.json").string() + "'";
  EXPECT_EQ(cli("invariant '" + (dir / "only.pp").string() + "' --path /a --content x").code, 0);
  EXPECT_EQ(cli("invariant '" + (dir / "package.pp").string() + "' --path /a --content x" + db).code, 1);
  EXPECT_EQ(cli("invariant '" + (dir / "only.pp").string() + "' --path /b --content x").code, 1);
}

TEST(Cli, JsonReport) {
  CliRun r = cli("check " + manifest("go-without-perl.pp") + " --format json");
  ASSERT_EQ(r.code, 1);
  nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["verdicts"][0]["verdict"], "non-deterministic");
  const auto& cex = j["verdicts"][0]["counterexample"];
  EXPECT_EQ(cex["orderings"].size(), 2u);
  EXPECT_EQ(cex["orderings"][0].size(), 2u);
  EXPECT_TRUE(cex["results"][0]["ok"].get<bool>());
  EXPECT_TRUE(cex["results"][1]["ok"].get<bool>());
  EXPECT_TRUE(cex["input"].is_object());
  EXPECT_TRUE(j["timing"]["seconds"].is_number());

  CliRun err = cli("check " + manifest("cpp-ocaml-modules.pp") + " --format json");
  EXPECT_EQ(err.code, 2);
  EXPECT_EQ(nlohmann::json::parse(err.out)["error"]["kind"], "dependency-cycle");
}

TEST(Cli, GraphDotAndSmtDumps) {
  stdfs::path dir = scratch("dumps");
  CliRun r = cli("check " + manifest("vim-carol.pp") + " --graph-dot '" + (dir / "g.dot").string() + "' --emit-smt '" +
              (dir / "smt").string() + "'");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(slurp(dir / "g.dot").find("User[carol]"), std::string::npos);
  std::size_t dumps = 0;
  for (const auto& entry : stdfs::directory_iterator(dir / "smt")) {
    dumps += entry.path().extension() == ".smt2" ? 1 : 0;
  }
  EXPECT_GT(dumps, 0u);
}

TEST(Cli, ToggledAnalysesKeepVerdicts) {
  for (const char* flags : {"--no-por", "--no-prune", "--no-elim", "--no-por --no-prune --no-elim"}) {
    EXPECT_EQ(cli("check " + manifest("vim-carol.pp") + " " + flags).code, 1) << flags;
    EXPECT_EQ(cli("check " + manifest("myuser-define.pp") + " " + flags).code, 0) << flags;
  }
}

TEST(Cli, ImportPackages) {
  stdfs::path dir = scratch("import");
  write(dir / "listing.txt", "/usr/bin/go\n/usr/share/doc/golang/copyright\n");
  std::string db = " --package-db '" + dir.string() + "' --platform test";
  ASSERT_EQ(cli("import-packages golang '" + (dir / "listing.txt").string() + "'" + db + " --depends perl").code, 0);
  std::string first = slurp(dir / "test.json");
  nlohmann::json j = nlohmann::json::parse(first);
  EXPECT_EQ(j["packages"]["golang"]["files"].size(), 2u);
  EXPECT_EQ(j["packages"]["golang"]["deps"][0], "perl");
  ASSERT_EQ(cli("import-packages golang '" + (dir / "listing.txt").string() + "'" + db + " --depends perl").code, 0);
  EXPECT_EQ(slurp(dir / "test.json"), first);
  write(dir / "bad.txt", "/usr/bin/ok\nnot-a-path\n");
  EXPECT_EQ(cli("import-packages bad '" + (dir / "bad.txt").string() + "'" + db).code, 2);
  EXPECT_EQ(slurp(dir / "test.json"), first);
}

TEST(Cli, SyntheticBenchmark) {
  CliRun conflict = cli("bench-synthetic --from 2 --n 2 --mode conflict --runs 1 --format json");
  ASSERT_EQ(conflict.code, 0);
  EXPECT_EQ(nlohmann::json::parse(conflict.out)["results"][0]["verdict"], "non-deterministic");
  CliRun det = cli("bench-synthetic --from 3 --n 3 --mode deterministic --runs 1 --format json");
  ASSERT_EQ(det.code, 0);
  EXPECT_EQ(nlohmann::json::parse(det.out)["results"][0]["verdict"], "deterministic");
}

}  // namespace
