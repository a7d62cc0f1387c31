#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "neretin/cli.hpp"
#include "neretin/error.hpp"
#include "neretin/json_io.hpp"
#include "oracles.hpp"

using namespace neretin;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("neretin_cli_" + std::to_string(std::random_device{}()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const Json& j) const {
    const auto p = (path_ / name).string();
    std::ofstream(p) << j.dump();
    return p;
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::vector<Point> range_points(Point lo, Point hi) {
  std::vector<Point> out;
  for (Point i = lo; i < hi; ++i) out.push_back(i);
  return out;
}

Json symmetric_on(std::size_t degree, const std::vector<std::vector<Point>>& blocks) {
  std::vector<Permutation> gens;
  for (const auto& b : blocks) {
    const auto s = PermGroup::symmetric(degree, b);
    gens.insert(gens.end(), s.generators().begin(), s.generators().end());
  }
  return to_json(PermGroup(degree, gens));
}

Json parity_spec(int n) {
  std::vector<Point> even, odd;
  for (Point x = 0; x < (2u << n); ++x) (x % 2 ? odd : even).push_back(x);
  return Json{{"kind", "Alt2"}, {"d", 2}, {"n", n}, {"sets", {even, odd}}};
}

}  // namespace

TEST_CASE("json round trips") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = oracle::random_permutation(1 + rng() % 20, rng);
    CHECK(permutation_from_json(to_json(p)) == p);
    const auto g = random_tree_pair(2 + static_cast<int>(rng() % 2), rng() % 6, rng);
    const auto back = element_from_json(Json::parse(to_json(g).dump()));
    CHECK(back == g);
  }
  CHECK(permutation_from_json(Json("(0 1 2)(3 4)"), 5) == Permutation::parse_cycles("(0 1 2)(3 4)", 5));
  CHECK_THROWS_AS(permutation_from_json(Json("(0 1)")), ValidationError);
  CHECK_THROWS_AS(permutation_from_json(Json{{"degree", 3}, {"images", {0, 0, 1}}}), ValidationError);
  CHECK_THROWS_AS(permutation_from_json(Json{{"degree", 3}}), ValidationError);

  const Json spec_element = Json::parse(
      R"({"d":2, "domain":["L0","L1","R"], "range":["L","R0","R1"], "map":[[0,2],[1,0],[2,1]]})");
  const auto e = element_from_json(spec_element);
  CHECK(e.d() == 2);
  CHECK(e.leaf_count() == 3);
  CHECK_THROWS_AS(element_from_json(Json::parse(R"({"d":2,"domain":["L","R"],"range":["L","R"],"map":[[0,0],[1,0]]})")),
                  ValidationError);

  const auto g = group_from_json(Json{{"degree", 5}, {"generators", {"(0 1 2 3 4)", "(0 1)"}}});
  CHECK(g.order() == 120);
  CHECK(group_from_json(to_json(g)).order() == 120);

  Rational big(factorial(40), factorial(38) * 7 + 1);
  big.canonicalize();
  CHECK(rational_from_json(to_json(big)) == big);
  CHECK(to_json(Rational(315, 2)) == Json{{"num", "315"}, {"den", "2"}});
  CHECK_THROWS_AS(rational_from_json(Json{{"num", "1"}, {"den", "0"}}), ValidationError);

  const auto z = range_points(0, 12);
  const auto gamma = PermGroup::alternating(16, z);
  const auto cert = cocompact_obstruction(gamma, z, 3, 2, std::nullopt, 6);
  const auto j = to_json(cert);
  CHECK(j["kind"] == "Cocompact3");
  CHECK(j["truncation_L"] == 6);
  const auto back = certificate_from_json(Json::parse(j.dump()));
  CHECK(back.lift == cert.lift);
  CHECK(back.witness_perms == cert.witness_perms);
  CHECK(back.checks == cert.checks);
  CHECK(verify_certificate(back, gamma).passed());
}

TEST_CASE("analyze exit codes") {
  TempDir dir;
  auto r = cli({"analyze", dir.write("stab.json", symmetric_on(12, {range_points(0, 11)})), "--d", "2"});
  CHECK(r.code == kExitOk);
  CHECK(Json::parse(r.out)["verdict"]["tag"] == "Alt1");

  r = cli({"analyze", dir.write("s66.json", symmetric_on(12, {range_points(0, 6), range_points(6, 12)}))});
  CHECK(r.code == kExitOk);
  CHECK(Json::parse(r.out)["verdict"]["tag"] == "Alt2");

  r = cli({"analyze", dir.write("s444.json", symmetric_on(12, {range_points(0, 4), range_points(4, 8),
                                                                range_points(8, 12)}))});
  CHECK(r.code == kExitNegative);
  CHECK(Json::parse(r.out)["verdict"]["tag"] == "Unclassified");

  r = cli({"analyze", dir.write("trivial.json", Json{{"degree", 12}, {"generators", Json::array()}})});
  CHECK(r.code == kExitError);
  CHECK(r.err.find("index hypothesis fails") != std::string::npos);

  std::ofstream(dir.file("broken.json")) << "{\"degree\": 3,";
  CHECK(cli({"analyze", dir.file("broken.json")}).code == kExitError);
  CHECK(cli({"analyze", dir.file("missing.json")}).code == kExitError);
  CHECK(cli({"analyze", dir.file("stab.json"), "--alpha", "0.7"}).code == kExitError);
  CHECK(cli({"analyze", dir.file("stab.json"), "--format", "csv"}).code == kExitError);
  CHECK(cli({"nonsense"}).code == kExitError);
  CHECK(cli({}).code == kExitError);
}

TEST_CASE("covolume tables") {
  TempDir dir;
  const auto trivial = dir.write("trivial.json", Json{{"d", 2}, {"generators", Json::array()}});
  auto r = cli({"covolume", trivial, "--n-max", "2", "--format", "csv"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("\n1,4,8,1,3/1,3/1,true,true,true") != std::string::npos);
  CHECK(r.out.find("\n2,8,128,1,315/1,315/1,true,true,false") != std::string::npos);

  const Json swap{{"d", 2}, {"domain", {"L00", "L01", "L1", "R"}}, {"range", {"L00", "L01", "L1", "R"}},
                  {"map", {{0, 1}, {1, 0}, {2, 2}, {3, 3}}}};
  r = cli({"covolume", dir.write("swap.json", Json{{"d", 2}, {"generators", {swap}}}), "--n-max", "2"});
  CHECK(r.code == kExitOk);
  const auto doc = Json::parse(r.out);
  CHECK(doc["scan"]["n0"] == 2);
  CHECK(doc["levels"][1]["c_n"] == Json{{"num", "315"}, {"den", "2"}});

  const Json flip{{"d", 2}, {"domain", {"L", "R"}}, {"range", {"L", "R"}}, {"map", {{0, 1}, {1, 0}}}};
  r = cli({"covolume", dir.write("flip.json", Json{{"d", 2}, {"generators", {flip}}}), "--n-max", "1", "--format",
           "csv"});
  CHECK(r.out.find("\n1,4,8,2,3/2,") != std::string::npos);

  r = cli({"covolume", trivial, "--n-max", "6"});
  CHECK(r.code == kExitError);
  CHECK(r.err.find("cap") != std::string::npos);
}

TEST_CASE("obstruct and verify") {
  TempDir dir;
  const auto out = dir.file("cert.json");
  auto r = cli({"obstruct", dir.write("alt2.json", parity_spec(4)), "--alpha", "0.0625", "--out", out});
  CHECK(r.code == kExitOk);
  const auto doc = read_json_file(out);
  CHECK(doc["attempt"]["certificate"]["kind"] == "Alt2Case");
  CHECK(doc["attempt"]["certificate"]["m"] == 2);
  CHECK(doc["verification"]["passed"] == true);

  r = cli({"verify", out});
  CHECK(r.code == kExitOk);

  auto cert = doc["attempt"]["certificate"];
  cert["m"] = 3;
  const auto gamma = dir.write("gamma.json", doc["gamma_n"]);
  r = cli({"verify", dir.write("bad.json", cert), gamma});
  CHECK(r.code == kExitNegative);
  CHECK(Json::parse(r.out)["checks"]["in_U_m"] == false);
  CHECK(cli({"verify", dir.write("only.json", doc["attempt"]["certificate"])}).code == kExitError);

  r = cli({"obstruct", dir.write("alt2_n3.json", parity_spec(3)), "--alpha", "0.0625"});
  CHECK(r.code == kExitNegative);
  CHECK(Json::parse(r.out)["attempt"]["failure"].get<std::string>().find("threshold not met") != std::string::npos);

  const Json cocompact{{"kind", "Cocompact3"}, {"d", 2}, {"n", 3}, {"sets", {range_points(0, 12)}}};
  r = cli({"obstruct", dir.write("cc.json", cocompact), "--seed", "5"});
  CHECK(r.code == kExitOk);
  CHECK(Json::parse(r.out)["attempt"]["certificate"]["m"] == 2);
}

TEST_CASE("bounds, primes and selftest") {
  auto r = cli({"primes", "--k", "100"});
  CHECK(r.code == kExitOk);
  const auto doc = Json::parse(r.out);
  CHECK(doc["pairs"][0]["p"] == 89);
  CHECK(doc["pairs"][0]["q"] == 97);
  r = cli({"primes", "--k", "60", "--k-max", "62", "--format", "csv"});
  CHECK(r.out == "k,p,q,lo,hi\n60,53,59,18,60\n61,53,61,19,61\n62,53,61,19,62\n");

  r = cli({"bounds", "--d", "2", "--alpha", "0.24"});
  CHECK(r.code == kExitOk);
  const auto b = Json::parse(r.out);
  CHECK(b["constants"]["entropy"].get<double>() == doctest::Approx(1.3977).epsilon(1e-3));
  CHECK(b["block_bound"]["h_prime_decreasing"] == true);
  CHECK(cli({"bounds", "--format", "csv"}).out.rfind("n,two_transitive", 0) == 0);

  const auto first = cli({"selftest", "--seed", "3"});
  const auto second = cli({"selftest", "--seed", "3"});
  CHECK(first.code == kExitOk);
  CHECK(first.out == second.out);
  CHECK(Json::parse(first.out)["passed"] == true);
}
