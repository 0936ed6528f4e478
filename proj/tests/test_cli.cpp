#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "helpers.hpp"

namespace fs = std::filesystem;
using fiflab::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fiflab_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has_witness(const nlohmann::json& j, double y, double z) {
  for (const auto& w : j["witnesses"])
    if (w["y"] == y && w["z"] == z) return true;
  return false;
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(call({}).code == 2);
  CHECK(call({"bogus"}).code == 2);
  CHECK(call({"casestudy"}).code == 2);
  CHECK(call({"render", "--points", "0"}).code == 2);
  CHECK(call({"check", "--mode", "nope"}).code == 2);
  CHECK(call({"check", "--domain", "5:1"}).code == 2);
  CHECK(call({"build", "--alpha", "1.5"}).code == 2);
  CHECK(call({"build", "--alpha-list", "0.1,0.2"}).code == 2);
  CHECK(call({"build", "--depth", "3"}).code == 2);
  CHECK(call({"check", "--map", "expr", "--map-expr", "2 *"}).code == 2);
  CHECK(call({"check", "--phi", "expr", "--phi-expr", "t"}).code == 2);
  const auto help = call({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("if A <= y <= B") != std::string::npos);
}

TEST_CASE("check command") {
  const auto phi = call({"check", "--map", "t-continuous", "--phi", "half", "--mode", "phi",
                         "--domain", "0:12", "--delta", "0.25"});
  CHECK(phi.code == 3);
  const auto j = nlohmann::json::parse(phi.out);
  CHECK(j["mode"] == "phi");
  CHECK(j["verdict"] == "counterexamples-found");
  CHECK(has_witness(j, 4.0, 4.5));
  for (const char* k : {"mode", "verdict", "resolution", "sample_size", "witnesses"}) CHECK(j.contains(k));

  const auto disc = call({"check", "--map", "t-discrete", "--phi", "piecewise", "--mode", "phi"});
  CHECK(disc.code == 3);
  CHECK(has_witness(nlohmann::json::parse(disc.out), 5.0, 7.0));

  const auto clean = call({"check", "--map", "expr", "--map-expr", "y/2", "--phi", "half", "--mode",
                           "phi", "--domain", "0:1", "--delta", "0.01"});
  CHECK(clean.code == 0);
  CHECK(nlohmann::json::parse(clean.out)["verdict"] == "no-counterexample-found");

  // The Suzuki condition does fail for the continuous example.
  const auto suz = call({"check", "--mode", "suzuki", "--max-witnesses", "3"});
  CHECK(suz.code == 3);
  const auto js = nlohmann::json::parse(suz.out);
  CHECK(js["witness_count"] == 24515);
  CHECK(js["witnesses"].size() == 3);
}

TEST_CASE("build command") {
  const auto dir = scratch("build");
  const auto prefix = (dir / "s04").string();
  const auto r = call({"build", "--fixture", "spinach", "--alpha", "0.4", "--svg", "--out", prefix});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(prefix + ".samples.csv"));
  CHECK(fs::exists(prefix + ".meta.json"));
  CHECK(fs::exists(prefix + ".svg"));
  const auto meta = nlohmann::json::parse(slurp(prefix + ".meta.json"));
  CHECK(meta["depth"] == 10);
  CHECK(meta["converged"] == true);
  CHECK(meta["bound_holds"] == true);

  const auto again = call({"build", "--fixture", "spinach", "--alpha", "0.4", "--svg", "--out", prefix});
  CHECK(again.out == r.out);
  const std::string first_csv = slurp(prefix + ".samples.csv");
  CHECK(call({"build", "--fixture", "spinach", "--alpha", "0.4", "--svg", "--out", prefix}).code == 0);
  CHECK(slurp(prefix + ".samples.csv") == first_csv);

  const auto mixed = call({"build", "--alpha-list", "0.1,0.2,0.5,0.2,0.4,0.2,0.4,0.2,0.3,0.1",
                           "--out", (dir / "mix").string()});
  CHECK(mixed.code == 0);
  const auto zero = call({"build", "--alpha", "0.0", "--out", (dir / "zero").string()});
  CHECK(zero.code == 0);

  const auto fig = call({"build", "--fixture", "figure1", "--alpha", "0.5", "--out", (dir / "fig").string()});
  CHECK(fig.code == 0);
  CHECK(nlohmann::json::parse(fig.out)["base"] == "literal_square_base(t-continuous)");

  // Data validation failures.
  std::ofstream(dir / "bad.csv") << "label,min,max,avg\nA,1,2,3\nB,1,2,1\nC,1,2,1\n";
  CHECK(call({"build", "--data", (dir / "bad.csv").string(), "--out", (dir / "x").string()}).code == 4);
  CHECK(call({"build", "--data", (dir / "missing.csv").string()}).code == 4);
  std::ofstream(dir / "ok.csv") << "label,min,max,avg\nA,1,3,2\nB,1,5,4\nC,0,2,1\nD,1,3,3\n";
  CHECK(call({"build", "--data", (dir / "ok.csv").string(), "--alpha", "0.3", "--out",
              (dir / "ok").string()}).code == 0);
  CHECK(call({"build", "--data", (dir / "ok.csv").string(), "--fixture", "spinach"}).code == 2);
}

TEST_CASE("render command") {
  const auto dir = scratch("render");
  const auto p = (dir / "c").string();
  const auto a = call({"render", "--alpha", "0.6", "--method", "chaos", "--points", "5000", "--seed",
                       "42", "--out", p, "--svg"});
  REQUIRE(a.code == 0);
  const std::string csv = slurp(p + ".cloud.csv");
  CHECK(call({"render", "--alpha", "0.6", "--method", "chaos", "--points", "5000", "--seed", "42",
              "--out", p, "--svg"}).out == a.out);
  CHECK(slurp(p + ".cloud.csv") == csv);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5001);

  const auto d = call({"render", "--fixture", "figure1", "--alpha", "0.5", "--method",
                       "deterministic", "--out", (dir / "f").string()});
  CHECK(d.code == 0);
}

TEST_CASE("dim command") {
  const auto a = call({"dim", "--fixture", "spinach", "--alpha", "0.4"});
  REQUIRE(a.code == 0);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["analytic"]["value"].get<double>() == doctest::Approx(1.60206).epsilon(1e-5));
  CHECK_FALSE(j.contains("empirical"));

  const auto small = call({"dim", "--alpha", "0.05"});
  CHECK(nlohmann::json::parse(small.out)["analytic"]["value"] == 1.0);

  const auto e = call({"dim", "--alpha", "0.6", "--empirical", "--points", "20000"});
  REQUIRE(e.code == 0);
  const auto je = nlohmann::json::parse(e.out);
  CHECK(je["empirical"]["method"] == "boxcount");
  CHECK(je["empirical"]["scales"].size() == 7);
  CHECK(call({"dim", "--k-range", "3:4"}).code == 2);
}

TEST_CASE("casestudy command") {
  const auto dir = scratch("case");
  const auto r = call({"casestudy", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
  REQUIRE(j["dims"].size() == 3);
  CHECK(j["dims"][0].get<double>() == doctest::Approx(1.60206).epsilon(1e-5));
  CHECK(j["dims"][1].get<double>() == doctest::Approx(1.77815).epsilon(1e-5));
  CHECK(j["dims"][2].get<double>() == doctest::Approx(1.41497).epsilon(1e-5));
  bool classical = false;
  for (const auto& c : j["cases"])
    if (c["classical"] == true) classical = c["alpha"][0] == 0.0;
  CHECK(classical);
  for (const char* n : {"alpha_0.4", "alpha_0.6", "alpha_mixed", "alpha_0.0"})
    CHECK(fs::exists(dir / ("fif_" + std::string(n) + ".svg")));
  const std::string first = slurp(dir / "summary.json");
  CHECK(call({"casestudy", "--out", dir.string()}).code == 0);
  CHECK(slurp(dir / "summary.json") == first);
}
