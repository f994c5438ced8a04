#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("cli convert emits annotated parallel markup") {
  RunResult r = run("convert '\\zeta(s)=0'");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("Q187235") != std::string::npos);
  CHECK(r.output.find("annotation-xml") != std::string::npos);
  CHECK(r.output.find("cd=\"wikidata\"") != std::string::npos);
}

TEST_CASE("cli convert rejects empty input with exit code 2") {
  RunResult r = run("convert ''");
  CHECK(r.exit_code == 2);
}

TEST_CASE("cli convert --no-content emits presentation only") {
  RunResult r = run("convert --no-content 'x'");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("<mi") != std::string::npos);
  CHECK(r.output.find("annotation-xml") == std::string::npos);
}

TEST_CASE("cli eval/report pipeline over the bundled gold file") {
  std::string dir = "/tmp/mathcvt_cli_test";
  REQUIRE(std::system(("mkdir -p " + dir).c_str()) == 0);
  RunResult ev = run("eval --gold " FIXTURE_DIR "/gold.jsonl --costs 1,1,0 --out " + dir +
                     "/results.jsonl");
  CHECK(ev.exit_code == 0);
  RunResult rep = run("report --results " + dir + "/results.jsonl --out-dir " + dir);
  CHECK(rep.exit_code == 0);
  std::ifstream summary(dir + "/report.csv");
  REQUIRE(summary.good());
  std::string header, row;
  std::getline(summary, header);
  std::getline(summary, row);
  CHECK(header.find("mean_presentation_distance") != std::string::npos);
  CHECK(row.find("internal,24,24,24,0.000000") == 0);
  CHECK(std::ifstream(dir + "/timing.csv").good());
  CHECK(std::ifstream(dir + "/plot.csv").good());
}

TEST_CASE("cli fixture verb regenerates the bundled files") {
  std::string dir = "/tmp/mathcvt_cli_fixture";
  REQUIRE(std::system(("rm -rf " + dir).c_str()) == 0);
  RunResult r = run("fixture --out " + dir);
  CHECK(r.exit_code == 0);
  int diff = std::system(("diff -r " + dir + " " FIXTURE_DIR " > /dev/null").c_str());
  CHECK(diff == 0);
}
