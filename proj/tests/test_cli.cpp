#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "siep/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SIEP_CLI_PATH) + " " + args + " 2>&1";
  Run r{-1, {}};
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("siep_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("wsp-check") {
  const auto dir = scratch("wsp");
  write(dir / "a.coo", "3\n0 0 4\n0 2 1\n1 1 3\n2 2 2\n");
  write(dir / "b.coo", "3\n0 0 4\n0 1 1\n1 1 3\n1 2 1\n2 2 2\n");
  write(dir / "one.coo", "1\n0 0 7\n");
  CHECK(run("wsp-check " + q(dir / "a.coo")).code == 0);
  const auto b = run("wsp-check " + q(dir / "b.coo"));
  CHECK(b.code == 1);
  CHECK(b.out.find("kernel_dimension: 1") != std::string::npos);
  CHECK(b.out.find("witness:") != std::string::npos);
  CHECK(run("wsp-check " + q(dir / "one.coo")).code == 0);
  CHECK(run("wsp-check --exact " + q(dir / "a.coo")).code == 0);
  CHECK(run("wsp-check --exact " + q(dir / "b.coo")).code == 1);
  write(dir / "bad.coo", "2\n1 0 1\n");
  CHECK(run("wsp-check " + q(dir / "bad.coo")).code == 2);
}

TEST_CASE("solve and verify") {
  const auto dir = scratch("solve");
  write(dir / "p3.json", R"({"n": 3, "edges": [[0, 1], [1, 2]]})");
  write(dir / "ok.txt", "0\n1\n2\n");
  write(dir / "short.txt", "0 1\n");
  write(dir / "dup.txt", "0 1 1\n");

  const auto ok = run("solve --graph " + q(dir / "p3.json") + " --spectrum " + q(dir / "ok.txt") + " --out " +
                      q(dir / "out") + " --seed 42");
  CHECK(ok.code == 0);
  const auto a = siep::io::load_coo_sym(dir / "out" / "matrix.coo");
  CHECK(a(0, 1) != 0.0);
  CHECK(a(0, 2) == 0.0);
  CHECK(siep::io::load_text(dir / "out" / "solution.json").find("\"seed\": 42") != std::string::npos);

  CHECK(run("solve --graph " + q(dir / "p3.json") + " --spectrum " + q(dir / "short.txt") + " --out " +
            q(dir / "x")).code == 2);
  const auto dup = run("solve --graph " + q(dir / "p3.json") + " --spectrum " + q(dir / "dup.txt") + " --out " +
                       q(dir / "x"));
  CHECK(dup.code == 3);
  CHECK(dup.out.find("DuplicateEigenvalues") != std::string::npos);

  CHECK(run("verify " + q(dir / "out")).code == 0);

  // Same configuration, same bytes.
  CHECK(run("solve --graph " + q(dir / "p3.json") + " --spectrum " + q(dir / "ok.txt") + " --out " +
            q(dir / "again") + " --seed 42").code == 0);
  for (const char* f : {"solution.json", "matrix.coo", "graph.json", "levels/level_0003.coo"})
    CHECK(siep::io::load_text(dir / "out" / f) == siep::io::load_text(dir / "again" / f));

  // A non-edge entry made nonzero.
  std::string text = siep::io::load_text(dir / "again" / "matrix.coo");
  write(dir / "again" / "matrix.coo", text + "0 2 0.001\n");
  const auto bad = run("verify " + q(dir / "again"));
  CHECK(bad.code == 1);
  CHECK(bad.out.find("FAIL  pattern") != std::string::npos);
}

TEST_CASE("seed from the environment, overridden by the flag") {
  const auto dir = scratch("seed");
  const std::string env = "SIEP_SEED=7 ";
  const std::string cmd = std::string(SIEP_CLI_PATH);
  CHECK(std::system((env + cmd + " tower --graph random --p 0.5 --seq harmonic --levels 4 --out " + q(dir / "a") +
                     " > /dev/null").c_str()) == 0);
  CHECK(siep::io::load_text(dir / "a" / "tower.json").find("\"seed\": 7") != std::string::npos);
  CHECK(siep::io::load_text(dir / "a" / "graph.ladj").find("seed=7") != std::string::npos);
  CHECK(std::system((env + cmd + " --seed 9 tower --graph random --seq harmonic --levels 4 --out " + q(dir / "b") +
                     " > /dev/null").c_str()) == 0);
  CHECK(siep::io::load_text(dir / "b" / "tower.json").find("\"seed\": 9") != std::string::npos);
}

TEST_CASE("tower") {
  const auto dir = scratch("tower");
  const auto star = run("tower --graph star --seq harmonic --levels 12 --out " + q(dir / "star"));
  CHECK(star.code == 0);
  CHECK(star.out.find("11/11 budget checks pass") != std::string::npos);
  CHECK(fs::exists(dir / "star" / "level_0012.coo"));

  const auto empty = run("tower --graph empty --seq harmonic --levels 6 --out " + q(dir / "empty"));
  CHECK(empty.code == 0);
  CHECK(empty.out.find("5/5 budget checks pass") != std::string::npos);

  CHECK(run("tower --graph star --seq harmonic --levels 0 --out " + q(dir / "zero")).code == 2);
  CHECK(run("tower --graph wheel --seq harmonic --levels 3 --out " + q(dir / "zero")).code == 2);
  CHECK(run("tower --graph path --seq list:1,2,1,4 --levels 3 --out " + q(dir / "dup")).code == 3);

  const auto v = run("verify " + q(dir / "star") + " " + q(dir / "empty"));
  CHECK(v.code == 0);

  std::string text = siep::io::load_text(dir / "star" / "level_0007.coo");
  const auto pos = text.find("\n0 0 ");
  REQUIRE(pos != std::string::npos);
  text = text.substr(0, pos) + "\n0 0 0.75" + text.substr(text.find('\n', pos + 1));
  write(dir / "star" / "level_0007.coo", text);
  CHECK(run("verify " + q(dir / "star")).code == 1);
}

TEST_CASE("families and usage") {
  const auto f = run("families");
  CHECK(f.code == 0);
  CHECK(f.out.find("harmonic0") != std::string::npos);
  CHECK(run("").code == 2);
  CHECK(run("verify /nonexistent/path").code == 1);
}

}  // TEST_SUITE
