#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = bdlab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_CASE("hk prints a headed coefficient table") {
  const Result r = run({"hk", "--k", "2", "--n", "1024"});
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 1025);
  CHECK(l[0] == "index,value");
  CHECK(l[1] == "0,-0.6931471805599453");
}

TEST_CASE("verify --all passes") {
  const Result r = run({"verify", "--all", "--N", "4096", "--seed", "0", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["reports"].size() == 17);
  for (const auto& rep : j["reports"]) CHECK(rep["pass"] == true);
}

TEST_CASE("moebius table decreases") {
  const Result r = run({"moebius", "--n", "10,100,1000", "--N", "65536"});
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 4);
  CHECK(l[0] == "n,N,residual_norm,phi_bound,M1,M2");
  double prev = 1e9;
  for (std::size_t i = 1; i < 4; ++i) {
    std::istringstream row(l[i]);
    std::string n, N, res;
    std::getline(row, n, ',');
    std::getline(row, N, ',');
    std::getline(row, res, ',');
    CHECK(N == "65536");
    CHECK(std::stod(res) < prev);
    prev = std::stod(res);
  }
}

TEST_CASE("outputs are deterministic across runs and thread counts") {
  const std::vector<std::string> base{"distance", "--K", "2,8,16", "--N", "4096"};
  auto one = base, four = base;
  four.insert(four.end(), {"--threads", "4"});
  const Result a = run(one), b = run(one), c = run(four);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  const Result v1 = run({"verify", "--all", "--N", "2048", "--seed", "5"});
  const Result v2 = run({"verify", "--all", "--N", "2048", "--seed", "5", "--threads", "3"});
  CHECK(v1.out == v2.out);
}

TEST_CASE("other commands run") {
  CHECK(run({"dirichlet", "--k", "2,3", "--N", "4096"}).code == 0);
  const Result g = run({"dirichlet", "--golden", "10000"});
  CHECK(g.code == 0);
  CHECK(g.out.find("PASS") != std::string::npos);
  CHECK(run({"pointwise", "--n", "10,100", "--z", "0,0.5,0.5i,-0.25+0.5i", "--N", "4096"}).code == 0);
  const Result s = run({"pdcp", "--mode", "samples", "--grid", "16", "--Ns", "64"});
  CHECK(s.code == 0);
  CHECK(lines(s.out)[0] == "x,value");
  CHECK(run({"pdcp", "--mode", "span", "--Ns", "512", "--n-max", "4,8"}).code == 0);
  CHECK(run({"pdcp", "--mode", "witness", "--N", "4096", "--format", "json"}).code == 0);
  CHECK(run({"hk", "--k", "3", "--c", "6", "--lengths", "1024,2048"}).code == 0);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"hk"}).code == 2);
  CHECK(run({"hk", "--k", "2", "--N", "8"}).code == 2);
  CHECK(run({"hk", "--k", "2", "--format", "xml"}).code == 2);
  CHECK(run({"pointwise", "--z", "1.5"}).code == 2);
  CHECK(run({"pointwise", "--z", "abc"}).code == 2);
  CHECK(run({"verify"}).code == 2);
  const Result help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("moebius") != std::string::npos);
}

TEST_CASE("numerical failures exit 3") {
  const Result r = run({"distance", "--K", "10000", "--N", "1048576"});
  CHECK(r.code == 3);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("files, sidecar and I/O errors") {
  const auto dir = std::filesystem::temp_directory_path() / "bdlab_cli_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto out = (dir / "h.csv").string();
  REQUIRE(run({"hk", "--k", "2", "--n", "16", "--out", out}).code == 0);
  std::ifstream meta(out + ".meta.json");
  REQUIRE(meta);
  const auto j = nlohmann::json::parse(meta);
  CHECK(j.contains("version"));
  CHECK(j["N"] == 65536);
  CHECK(j.contains("tolerances"));
  CHECK(run({"hk", "--k", "2", "--out", (dir / "missing" / "x.csv").string()}).code == 4);

  // the numtheory cache directory comes from the environment
  const auto cache = dir / "cache";
  setenv("BDLAB_CACHE_DIR", cache.c_str(), 1);
  CHECK(run({"moebius", "--n", "50", "--N", "1024"}).code == 0);
  CHECK(std::filesystem::exists(cache / "nttables_50.bin"));
  unsetenv("BDLAB_CACHE_DIR");
  std::filesystem::remove_all(dir);
}
