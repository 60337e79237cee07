#include <doctest.h>

#include <sys/stat.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "rkex/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = rkex::cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rkex_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string line_value(const std::string& text, const std::string& prefix) {
  const auto at = text.find(prefix);
  if (at == std::string::npos) return {};
  const auto end = text.find('\n', at);
  return text.substr(at + prefix.size(), end - at - prefix.size());
}

void write_text(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("estimate prints the rounded power") {
  const Run r = cli({"estimate", "--params", "2147483647,5,4,10"});
  CHECK(r.code == 0);
  CHECK(r.out.find("≈2^72") != std::string::npos);

  const Run all = cli({"--csv", "estimate"});
  CHECK(all.code == 0);
  CHECK(std::count(all.out.begin(), all.out.end(), '\n') == 17);
}

TEST_CASE("exchange prints identical keys") {
  const Run r = cli({"--insecure-test-rng", "--seed", "7", "exchange", "--params", "2147483647,20,19,10"});
  CHECK(r.code == 0);
  const std::string a = line_value(r.out, "alice key: ");
  const std::string b = line_value(r.out, "bob key:   ");
  CHECK(a.size() == 128);
  CHECK(a == b);
  CHECK(r.out.find("keys match") != std::string::npos);
  CHECK(r.err.find("insecure") != std::string::npos);

  const Run again = cli({"--insecure-test-rng", "--seed", "7", "exchange", "--params", "2147483647,20,19,10"});
  CHECK(line_value(again.out, "alice key: ") == a);
}

TEST_CASE("small dimensions warn but still run") {
  const Run r = cli({"exchange", "--params", "101,3,2,2"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning:") != std::string::npos);
}

TEST_CASE("attack at toy scale") {
  const Run r = cli({"--insecure-test-rng", "--seed", "3", "attack", "--params", "7,2,1,1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("candidates tried: 256") != std::string::npos);
  CHECK(r.out.find("true component recovered") != std::string::npos);

  const Run refused = cli({"--budget", "100", "attack", "--params", "7,2,1,1"});
  CHECK(refused.code == 1);
  CHECK(refused.err.find("256") != std::string::npos);
}

TEST_CASE("audit and bench") {
  const Run a = cli({"--csv", "audit", "--params", "101,6,3,2", "--sessions", "5"});
  CHECK(a.code == 0);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 11);
  const Run b = cli({"--csv", "bench", "--params", "2147483647,5,4,10", "--reps", "2"});
  CHECK(b.code == 0);
  CHECK(b.out.rfind("rowsA,columnsA,cycles,complexity_bits,mean_ms,stddev_ms\n5,4,10,", 0) == 0);
}

TEST_CASE("state files drive encrypt, decrypt, seal and verify") {
  TempDir dir;
  const Run ex = cli({"exchange", "--params", "2147483647,6,5,4", "--state-a", dir / "a.state", "--state-b",
                      dir / "b.state"});
  REQUIRE(ex.code == 0);

  struct stat st{};
  REQUIRE(::stat((dir / "a.state").c_str(), &st) == 0);
  CHECK((st.st_mode & 0777) == 0600);

  CHECK(cli({"encrypt", "--state", dir / "a.state", "--message", "meet at noon", "--out", dir / "c.bin"}).code == 0);
  const Run dec = cli({"decrypt", "--state", dir / "b.state", "--in", dir / "c.bin"});
  CHECK(dec.code == 0);
  CHECK(dec.out.rfind("meet at noon   ", 0) == 0);
  // Wrong party's secret yields something else.
  const Run self = cli({"decrypt", "--state", dir / "a.state", "--in", dir / "c.bin"});
  CHECK(self.out.rfind("meet at noon", 0) != 0);

  write_text(dir / "doc.txt", std::string(3000, 'q'));
  CHECK(cli({"seal", "--state", dir / "a.state", "--in", dir / "doc.txt", "--out", dir / "doc.env"}).code == 0);
  const Run ok = cli({"verify", "--state", dir / "b.state", "--in", dir / "doc.env", "--out", dir / "doc.out"});
  CHECK(ok.code == 0);
  CHECK(ok.out.rfind("accept (3000 bytes", 0) == 0);
  CHECK(read_text(dir / "doc.out") == std::string(3000, 'q'));

  std::string env = read_text(dir / "doc.env");
  env[10] ^= 1;
  write_text(dir / "bad.env", env);
  const Run bad = cli({"verify", "--state", dir / "b.state", "--in", dir / "bad.env"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("reject") != std::string::npos);

  write_text(dir / "junk.env", "xyz");
  CHECK(cli({"verify", "--state", dir / "b.state", "--in", dir / "junk.env"}).out == "reject: malformed\n");

  write_text(dir / "long.txt", std::string(65, 'x'));
  CHECK(cli({"encrypt", "--state", dir / "a.state", "--in", dir / "long.txt", "--out", dir / "x"}).code == 2);
  CHECK(cli({"decrypt", "--state", dir / "missing.state", "--in", dir / "c.bin"}).code == 1);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"exchange"}).code == 2);
  CHECK(cli({"exchange", "--params", "8,3,2,1"}).code == 2);
  CHECK(cli({"exchange", "--params", "7,2,2,1"}).code == 2);
  CHECK(cli({"exchange", "--params", "banana"}).code == 2);
  CHECK(cli({"--seed", "5", "exchange", "--params", "7,2,1,1"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}
