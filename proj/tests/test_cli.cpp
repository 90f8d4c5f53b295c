#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + QRIGID_CLI_PATH + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string scratch(const std::string& name, const std::string& text) {
  auto dir = fs::temp_directory_path() / "qrigid-cli-test";
  fs::create_directories(dir);
  auto path = dir / name;
  std::ofstream(path) << text;
  return path.string();
}

nlohmann::json parse(const Run& r) { return nlohmann::json::parse(r.out); }

const char* kTorus3 =
    R"({"n":3,"vars":["q"],"pairs":[{"k":1,"l":2,"exp":[1]},{"k":1,"l":3,"exp":[-1]},{"k":2,"l":3,"exp":[1]}]})";

}  // namespace

TEST_CASE("saturation example") {
  auto f = scratch("z2.json", R"({"n":2,"vars":[],"torsion_order":2,"pairs":[{"k":1,"l":2,"exp":[1]}]})");
  auto r = run("torus saturated " + f);
  CHECK(r.code == 0);
  CHECK(r.out == "{\"saturated\":false,\"witness\":{\"f\":[1,0],\"n\":2}}\n");
}

TEST_CASE("degree vector example") {
  auto r = run("rootsys degvec --type A2 --word 1,2,1 --coweight 1,1");
  CHECK(r.code == 0);
  CHECK(r.out == "{\"d\":[2,2,1]}\n");
}

TEST_CASE("rigidity of phi_{f,c}") {
  auto t = scratch("t3.json", kTorus3);
  auto phi = run("auto phi-fc " + t + " --exp 1,0,0 --c 1/2 --cutoff 6");
  REQUIRE(phi.code == 0);
  auto f = scratch("phi.json", phi.out);
  auto r = run("auto rigidity " + f);
  CHECK(r.code == 0);
  CHECK(parse(r)["verdict"] == "NOT-BIFINITE-AT-CUTOFF");

  auto dec = run("auto decompose " + f + " --ray 1,0,0");
  CHECK(dec.code == 0);
  CHECK(parse(dec)["c"][0] == "1/2");
}

TEST_CASE("cutoff from the environment") {
  auto t = scratch("t3.json", kTorus3);
  CHECK(parse(run("auto phi-fc " + t + " --exp 1,0,0 --c 1"))["cutoff"] == 12);
  CHECK(parse(run("auto phi-fc " + t + " --exp 1,0,0 --c 1", "QRIGID_CUTOFF=5"))["cutoff"] == 5);
  CHECK(parse(run("auto phi-fc " + t + " --exp 1,0,0 --c 1 --cutoff 7", "QRIGID_CUTOFF=5"))["cutoff"] == 7);
  CHECK(run("auto phi-fc " + t + " --exp 1,0,0 --c 1", "QRIGID_CUTOFF=zero").code == 2);
  CHECK(run("--cutoff 0 auto phi-fc " + t + " --exp 1,0,0 --c 1").code == 2);
}

TEST_CASE("braiding violation exits 1") {
  auto bad = scratch("bad.json", std::string(R"({"torus":)") + kTorus3 +
                                     R"(,"degree_vector":[1,1,1],"cutoff":4,"tuple":[[{"exp":[0,1,0],"coef":"1"}],[],[]]})");
  auto r = run("auto build " + bad);
  CHECK(r.code == 1);
  CHECK(parse(r)["braiding_ok"] == false);
}

TEST_CASE("malformed input and unknown commands exit 2") {
  auto junk = scratch("junk.json", "{not json");
  CHECK(run("torus kernel " + junk).code == 2);
  CHECK(run("torus kernel " + scratch("shape.json", R"({"n":"two"})")).code == 2);
  CHECK(run("torus frobnicate").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("suite run --profile nope").code == 2);
  CHECK(run("suite run --profile \"\"").code == 2);
  CHECK(run("rootsys degvec --type A2 --word 1,1,2 --coweight 1,1").code == 2);
  CHECK(run("rootsys degvec --type Q7 --coweight 1,1").code == 2);
}

TEST_CASE("root system, U_q^- and Cauchon pipeline") {
  auto g = run("uq synthesize --type A2 --word 1,2,1 --twist r1");
  REQUIRE(g.code == 0);
  auto p = scratch("cgl.json", parse(g)["presentation"].dump());
  auto c = run("cauchon run " + p);
  CHECK(c.code == 0);
  CHECK(parse(c)["ok"] == true);
  auto d = run("cauchon delta-check --type B2 --word 2,1,2,1 --twist q*r1");
  CHECK(d.code == 0);
  CHECK(parse(d)["matching"] == nlohmann::json::array({"from-zero"}));
  CHECK(run("rootsys gp --type A3 --twist r1,r2,q").code == 0);
  CHECK(parse(run("uq classify-linear --type A2"))["matches"] == true);
  CHECK(run("uq dims --type B2 --height 4").code == 0);
}

TEST_CASE("reports are byte-identical across runs") {
  auto a = run("uq synthesize --type B2 --word 1,2,1,2");
  auto b = run("uq synthesize --type B2 --word 1,2,1,2");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("smoke suite passes") {
  auto out = scratch("suite.json", "");
  auto r = run("suite run --profile smoke --out " + out);
  CHECK(r.code == 0);
  std::ifstream in(out);
  auto j = nlohmann::json::parse(in);
  CHECK(j["all_pass"] == true);
  CHECK(j["criteria"].size() == 14);
}
