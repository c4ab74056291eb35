#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string &args) {
    std::string path = "/tmp/isolab_cli_test_out.json";
    std::remove(path.c_str());
    std::string cmd = std::string(ISOLAB_CLI_PATH) + " " + args + " --out " + path +
                      " 2> /dev/null";
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.code = WEXITSTATUS(rc);
    std::ifstream f(path, std::ios::binary);
    if (f)
        r.out.assign(std::istreambuf_iterator<char>(f), {});
    return r;
}

} // namespace

TEST_CASE("graph --disc -23 --m 2 produces the 3-cycle report") {
    auto r = run_cli("graph --disc -23 --m 2");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["graph"]["vertices"].size() == 3);
    CHECK(j["graph"]["degree"] == 2);
    CHECK(j["spectral"]["connected"] == true);
    CHECK(j["spectral"]["bipartite"] == false);
    CHECK(std::abs(j["spectral"]["k"].get<double>() - 2.0) < 1e-12);
    CHECK(std::abs(j["spectral"]["eigenvalues"][1].get<double>() + 1.0) < 1e-8);
    CHECK(std::abs(j["spectral"]["eigenvalues"][2].get<double>() + 1.0) < 1e-8);
}

TEST_CASE("graph --curve: the two models agree on a c_pi = 1 curve") {
    // find a small curve with c_pi = 1 via the CLI-facing path: q = 10007
    auto r = run_cli("graph --curve 10007,1,6 --m 30");
    REQUIRE((r.code == 0 || r.code == 3));
    auto j = nlohmann::json::parse(r.out);
    if (r.code == 0) {
        CHECK(j["models_isomorphic"] == true);
        CHECK(j["explicit_vertices"] == j["cayley_vertices"]);
    }
}

TEST_CASE("usage errors exit with code 2") {
    auto r1 = run_cli("graph --disc 23 --m 2"); // positive discriminant
    CHECK(r1.code != 0);
    std::string cmd = std::string(ISOLAB_CLI_PATH) + " walk > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(rc) == 2); // missing required options
    cmd = std::string(ISOLAB_CLI_PATH) + " nonsense > /dev/null 2>&1";
    rc = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(rc) == 2);
}

TEST_CASE("walk subcommand passes on the 3-cycle") {
    auto r = run_cli("walk --disc -23 --m 2 --fraction 0.34 --trials 10000 --seed 7");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["pass"] == true);
    CHECK(j["walk"]["h"] == 3);
    CHECK(j["walk"]["S_size"] == 1);
}

TEST_CASE("ss --p 13 --ell 2 emits the single-vertex graph") {
    auto r = run_cli("ss --p 13 --ell 2");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["vertices"] == 1);
    CHECK(j["ramanujan"] == true);
    CHECK(j["graph"]["adjacency"][0][0] == 3);
}

TEST_CASE("spectrum reads a stored graph report back") {
    auto g = run_cli("graph --disc -84 --m 20");
    REQUIRE(g.code == 0);
    std::ofstream tmp("/tmp/isolab_graph_for_spectrum.json", std::ios::binary);
    tmp << g.out;
    tmp.close();
    auto s = run_cli("spectrum --in /tmp/isolab_graph_for_spectrum.json");
    REQUIRE(s.code == 0);
    auto gj = nlohmann::json::parse(g.out);
    auto sj = nlohmann::json::parse(s.out);
    CHECK(gj["spectral"]["eigenvalues"] == sj["eigenvalues"]);
}

TEST_CASE("hecke sweep gates pass on a small range") {
    auto r = run_cli("hecke --dmax 250 --m 100,1000 --csv /tmp/isolab_hecke.csv");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["pass"] == true);
    CHECK(j["remainder_inequality_ok"] == true);
    CHECK(j["max_ratio"].get<double>() <= 4.0);
    std::ifstream csv("/tmp/isolab_hecke.csv");
    REQUIRE(bool(csv));
    std::string header;
    std::getline(csv, header);
    CHECK(header == "D,h,chi_index,m,Re_S,Im_S,abs_S,ratio,psi_abs,remainder_bound");
}

TEST_CASE("cpi-dist emits CSV with the documented schema") {
    auto r = run_cli("cpi-dist --qmin 10000 --qmax 50000 --samples 200 --seed 3 "
                     "--csv /tmp/isolab_cpi.csv");
    REQUIRE(r.code == 0);
    std::ifstream csv("/tmp/isolab_cpi.csv");
    REQUIRE(bool(csv));
    std::string header;
    std::getline(csv, header);
    CHECK(header == "q,a,b,t,d_pi,c_pi,P_c_pi,status");
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["samples"] == 200);
}

TEST_CASE("level probe reports directions") {
    auto r = run_cli("level --curve 10007,1,6 --ell 2");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.contains("depth_below"));
    CHECK(j.contains("neighbors"));
}

TEST_CASE("ISOLAB_SEED environment fallback") {
    std::string base = std::string(ISOLAB_CLI_PATH) +
                       " walk --disc -471 --m 20 --fraction 0.25 --trials 4000";
    std::string c1 = "ISOLAB_SEED=99 " + base + " --out /tmp/isolab_env1.json > /dev/null 2>&1";
    std::string c2 = base + " --seed 99 --out /tmp/isolab_env2.json > /dev/null 2>&1";
    REQUIRE(std::system(c1.c_str()) == 0);
    REQUIRE(std::system(c2.c_str()) == 0);
    std::ifstream f1("/tmp/isolab_env1.json"), f2("/tmp/isolab_env2.json");
    std::string s1(std::istreambuf_iterator<char>(f1), {});
    std::string s2(std::istreambuf_iterator<char>(f2), {});
    CHECK(s1 == s2);
    CHECK(!s1.empty());
}
