// End-to-end checks of the command-line surface: flags, exit codes, output
// schemas and byte-level reproducibility. The binary path arrives through
// the ENTROKL_CLI environment variable set by ctest.

#include <doctest.h>

#include <cstdio>
#include <string>

#include "test_support.hpp"

using test_support::cli_path;
using test_support::read_file;
using test_support::run_process;
using test_support::run_process_with_stderr;
using test_support::write_file;

namespace {

std::string tmp(const std::string& name) { return "/tmp/entrokl_cli_" + name; }

const std::string kGauss1d = R"({"family":"gaussian","mean":[0.0],"cov":[[1.0]]})";
const std::string kBox1d = R"({"family":"uniform_box","lower":[0.0],"upper":[1.0]})";

}  // namespace

TEST_CASE("estimate: two-point file reproduces the hand value") {
  REQUIRE(!cli_path().empty());
  write_file(tmp("two.csv"), "0\n1\n");
  const auto result = run_process(cli_path() + " estimate " + tmp("two.csv"));
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("\"h_n\":1.2703628454614782") != std::string::npos);
  CHECK(result.output.find("\"dim\":1") != std::string::npos);
  CHECK(result.output.find("\"method\":\"tree\"") != std::string::npos);
}

TEST_CASE("estimate: duplicates exit 3 and name the pair") {
  write_file(tmp("dup.csv"), "0\n0\n");
  const auto result = run_process_with_stderr(cli_path() + " estimate " + tmp("dup.csv"));
  CHECK(result.exit_code == 3);
  CHECK(result.output.find("(0,1)") != std::string::npos);

  // Jitter remediation makes the same file estimable.
  const auto jittered = run_process(
      cli_path() + " estimate " + tmp("dup.csv") + " --jitter 1e-9 --seed 4");
  CHECK(jittered.exit_code == 0);
  CHECK(jittered.output.find("\"duplicates_handled\":1") != std::string::npos);
}

TEST_CASE("estimate: header row is auto-detected") {
  write_file(tmp("header.csv"), "x,y\n0,0\n3,4\n0,1\n");
  const auto result = run_process(cli_path() + " estimate " + tmp("header.csv"));
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("\"dim\":2") != std::string::npos);
  CHECK(result.output.find("\"n\":3") != std::string::npos);
}

TEST_CASE("estimate: parse errors name the line and exit 2") {
  write_file(tmp("bad.csv"), "0\noops\n1\n");
  const auto result = run_process_with_stderr(cli_path() + " estimate " + tmp("bad.csv"));
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("line 2") != std::string::npos);

  const auto missing = run_process_with_stderr(cli_path() + " estimate /no/such/file.csv");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("estimate: brute and tree backends agree") {
  write_file(tmp("grid.csv"), "0\n0.5\n1.25\n3\n4.5\n");
  const auto tree = run_process(cli_path() + " estimate " + tmp("grid.csv") +
                                " --backend tree");
  const auto brute = run_process(cli_path() + " estimate " + tmp("grid.csv") +
                                 " --backend brute");
  CHECK(tree.exit_code == 0);
  CHECK(brute.exit_code == 0);
  const auto value_of = [](const std::string& s) {
    const auto at = s.find("\"h_n\":");
    return s.substr(at, s.find(',', at) - at);
  };
  CHECK(value_of(tree.output) == value_of(brute.output));
}

TEST_CASE("sample: deterministic bytes, validation exits 2") {
  write_file(tmp("gauss2.json"),
             R"({"family":"gaussian","mean":[0.0,0.0],"cov":[[1.0,0.0],[0.0,1.0]]})");
  const std::string cmd = cli_path() + " sample " + tmp("gauss2.json") +
                          " --n 100 --seed 12 --out ";
  REQUIRE(run_process(cmd + tmp("a.csv")).exit_code == 0);
  REQUIRE(run_process(cmd + tmp("b.csv")).exit_code == 0);
  CHECK(read_file(tmp("a.csv")) == read_file(tmp("b.csv")));
  CHECK(!read_file(tmp("a.csv")).empty());
  write_file(tmp("gauss.json"), kGauss1d);

  const auto too_few = run_process_with_stderr(
      cli_path() + " sample " + tmp("gauss.json") + " --n 1 --out " + tmp("c.csv"));
  CHECK(too_few.exit_code == 2);

  write_file(tmp("bad_rate.json"), R"({"family":"exponential","rate":-1.0})");
  const auto bad_rate = run_process_with_stderr(
      cli_path() + " sample " + tmp("bad_rate.json") + " --n 10 --out " + tmp("d.csv"));
  CHECK(bad_rate.exit_code == 2);
  CHECK(bad_rate.output.find("rate") != std::string::npos);
}

TEST_CASE("sample then estimate round trip for all three families") {
  write_file(tmp("gauss.json"), kGauss1d);
  write_file(tmp("box.json"), kBox1d);
  write_file(tmp("expo.json"), R"({"family":"exponential","rate":1.0})");
  for (const std::string name : {"gauss", "box", "expo"}) {
    const auto sampled = run_process(cli_path() + " sample " + tmp(name + ".json") +
                                     " --n 1000 --seed 3 --out " + tmp(name + ".csv"));
    REQUIRE(sampled.exit_code == 0);
    const auto estimated = run_process(cli_path() + " estimate " + tmp(name + ".csv"));
    CHECK(estimated.exit_code == 0);
    CHECK(estimated.output.find("\"n\":1000") != std::string::npos);
  }
}

TEST_CASE("conditions: functional dispatch and validation") {
  write_file(tmp("gauss.json"), kGauss1d);

  const auto minorization = run_process(
      cli_path() + " conditions " + tmp("gauss.json") +
      " --functional minorization --r 1 --n-probes 20 --seed 2");
  CHECK(minorization.exit_code == 0);
  CHECK(minorization.output.find("\"all_ok\":true") != std::string::npos);

  const auto lemma = run_process(cli_path() + " conditions " + tmp("gauss.json") +
                                 " --functional lemmaG --rate 1");
  CHECK(lemma.exit_code == 0);
  CHECK(lemma.output.find("\"ok\":true") != std::string::npos);

  const auto bad_eps = run_process_with_stderr(
      cli_path() + " conditions " + tmp("gauss.json") + " --functional T --eps 1.5");
  CHECK(bad_eps.exit_code == 2);

  const auto q = run_process(cli_path() + " conditions " + tmp("gauss.json") +
                             " --functional Q --eps 1 --r 1 --n-outer 50 --seed 3");
  CHECK(q.exit_code == 0);
  CHECK(q.output.find("\"kind\":\"Q\"") != std::string::npos);

  const auto k = run_process(cli_path() + " conditions " + tmp("gauss.json") +
                             " --functional K --eps 0.5 --n-outer 200 --n-inner 200" +
                             " --seed 4");
  CHECK(k.exit_code == 0);
  CHECK(k.output.find("\"kind\":\"K\"") != std::string::npos);

  const auto unknown = run_process_with_stderr(
      cli_path() + " conditions " + tmp("gauss.json") + " --functional Z");
  CHECK(unknown.exit_code == 2);
}

TEST_CASE("diagnose: support validation and determinism") {
  write_file(tmp("box.json"), kBox1d);
  const auto outside = run_process_with_stderr(
      cli_path() + " diagnose " + tmp("box.json") + " --x 2 --n 32 --reps 64");
  CHECK(outside.exit_code == 2);

  write_file(tmp("gauss.json"), kGauss1d);
  const std::string cmd = cli_path() + " diagnose " + tmp("gauss.json") +
                          " --x 0 --n 64 --reps 256 --seed 5";
  const auto a = run_process(cmd);
  const auto b = run_process(cmd);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(a.output.find("\"seed\":5") != std::string::npos);

  const auto bad_dim = run_process_with_stderr(
      cli_path() + " diagnose " + tmp("gauss.json") + " --x 0,1 --n 32 --reps 64");
  CHECK(bad_dim.exit_code == 2);
}

TEST_CASE("converge: tiny run, bytes stable, csv written") {
  write_file(tmp("gauss.json"), kGauss1d);
  const std::string cmd = cli_path() + " converge " + tmp("gauss.json") +
                          " --n-grid 2 --reps 2 --seed 6 --out-json " + tmp("cv.json") +
                          " --out-csv " + tmp("cv.csv");
  REQUIRE(run_process(cmd).exit_code == 0);
  const std::string json_once = read_file(tmp("cv.json"));
  const std::string csv_once = read_file(tmp("cv.csv"));
  REQUIRE(run_process(cmd).exit_code == 0);
  CHECK(read_file(tmp("cv.json")) == json_once);
  CHECK(read_file(tmp("cv.csv")) == csv_once);
  CHECK(json_once.find("\"n_grid\":[2]") != std::string::npos);
  CHECK(csv_once.rfind("n,rep,h_n,seed\n", 0) == 0);

  const auto bad_grid = run_process_with_stderr(
      cli_path() + " converge " + tmp("gauss.json") + " --n-grid oops");
  CHECK(bad_grid.exit_code == 2);
}

TEST_CASE("thread cap does not change bytes") {
  write_file(tmp("gauss.json"), kGauss1d);
  const std::string base = cli_path() + " converge " + tmp("gauss.json") +
                           " --n-grid 64,128 --reps 6 --seed 8 --out-json ";
  REQUIRE(run_process(base + tmp("t1.json") + " --threads 1").exit_code == 0);
  REQUIRE(run_process(base + tmp("t4.json") + " --threads 4").exit_code == 0);
  CHECK(read_file(tmp("t1.json")) == read_file(tmp("t4.json")));

  // ENTROKL_THREADS is the fallback for --threads.
  REQUIRE(run_process("ENTROKL_THREADS=2 " + base + tmp("tenv.json")).exit_code == 0);
  CHECK(read_file(tmp("tenv.json")) == read_file(tmp("t1.json")));
}

TEST_CASE("estimate writes to --out files") {
  write_file(tmp("two.csv"), "0\n1\n");
  const auto result = run_process(cli_path() + " estimate " + tmp("two.csv") +
                                  " --out " + tmp("est.json"));
  CHECK(result.exit_code == 0);
  CHECK(read_file(tmp("est.json")).find("\"h_n\":1.2703628454614782") !=
        std::string::npos);
}

TEST_CASE("no subcommand or unknown flags exit 2") {
  CHECK(run_process_with_stderr(cli_path()).exit_code == 2);
  CHECK(run_process_with_stderr(cli_path() + " estimate --no-such-flag").exit_code == 2);
}
