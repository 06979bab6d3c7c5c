#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "testutil.hpp"

namespace {

std::string cli() {
    const char* p = std::getenv("HYPUNI_CLI");
    REQUIRE_MESSAGE(p != nullptr, "HYPUNI_CLI must point at the hypuni binary");
    return p;
}

int run(const std::string& args, const std::string& log = "/dev/null") {
    const std::string cmd = cli() + " " + args + " >" + log + " 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string tp(const std::string& name) { return testutil::temp_path(name); }

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("gen: annulus and pants with echoed invariants") {
    const std::string log = tp("cli_gen.log");
    CHECK(run("gen annulus --T 3.14159 --ns 8 --nth 8 -o " + tp("cli_ann.mesh"), log) == 0);
    const std::string out = testutil::slurp(log);
    CHECK(out.find("chi=0") != std::string::npos);
    CHECK(out.find("k=2") != std::string::npos);

    CHECK(run("gen pants -o " + tp("cli_pants.mesh"), log) == 0);
    const std::string pout = testutil::slurp(log);
    CHECK(pout.find("chi=-1") != std::string::npos);
    CHECK(pout.find("k=3") != std::string::npos);

    // missing -o is a usage error
    CHECK(run("gen annulus --T 1.0") == 2);
    // infeasible pants parameters are a validation error
    CHECK(run("gen pants --a 2.9 -o " + tp("cli_bad.mesh")) == 2);
}

TEST_CASE("solve: exit codes for success, bad c, infeasible topology") {
    const std::string mesh = tp("cli_s.mesh");
    REQUIRE(run("gen annulus --T 3.14159265358979 --ns 16 --nth 16 -o " + mesh) == 0);
    const std::string log = tp("cli_solve.log");
    CHECK(run("solve " + mesh + " --c 0.5,0.5 -o " + tp("cli_solve_out"), log) == 0);
    CHECK(testutil::slurp(log).find("residual_norm") != std::string::npos);
    CHECK(std::filesystem::exists(tp("cli_solve_out_report.csv")));
    CHECK(std::filesystem::exists(tp("cli_solve_out_u.txt")));

    CHECK(run("solve " + mesh + " --c 1.2,0.5") == 2);
    CHECK(run("solve " + mesh + " --c 0,0") == 3);
    CHECK(run("solve " + mesh) == 2);  // --c required
    CHECK(run("solve missing.mesh --c 0.5,0.5") == 2);
}

TEST_CASE("tune and modulus") {
    const std::string mesh = tp("cli_t.mesh");
    REQUIRE(run("gen annulus --T 3.14159265358979 --ns 16 --nth 16 -o " + mesh) == 0);
    const std::string log = tp("cli_tune.log");
    CHECK(run("tune " + mesh + " --d 1.2092 -o " + tp("cli_tune_out"), log) == 0);
    CHECK(std::filesystem::exists(tp("cli_tune_out_iterates.csv")));

    CHECK(run("modulus " + mesh + " --loop 0", log) == 0);
    const std::string out = testutil::slurp(log);
    CHECK(out.find("modulus = 3.141") != std::string::npos);
}

TEST_CASE("sweep CSV is byte-identical across reruns") {
    const std::string c1 = tp("cli_sweep1.csv");
    const std::string c2 = tp("cli_sweep2.csv");
    const std::string args = "sweep annulus --T 6.283185307179586,12.566370614359172 "
                             "--d 1 --nth 12 --threads 2 -o ";
    REQUIRE(run(args + c1) == 0);
    REQUIRE(run(args + c2) == 0);
    const std::string s1 = testutil::slurp(c1);
    CHECK(!s1.empty());
    CHECK(s1 == testutil::slurp(c2));
    CHECK(s1.find("ell_type1") != std::string::npos);
}

TEST_CASE("verify is seed-reproducible and dumps the identity table") {
    const std::string c1 = tp("cli_ver1.csv");
    const std::string c2 = tp("cli_ver2.csv");
    REQUIRE(run("verify --quick --seed 7 --samples 40 --csv " + c1) == 0);
    REQUIRE(run("verify --quick --seed 7 --samples 40 --csv " + c2) == 0);
    CHECK(testutil::slurp(c1) == testutil::slurp(c2));
    REQUIRE(run("verify --quick --seed 8 --samples 40 --csv " + c2) == 0);
    CHECK(testutil::slurp(c1) != testutil::slurp(c2));
}

TEST_CASE("json-config round trip reproduces the run byte for byte") {
    const std::string cfg = tp("cli_cfg.json");
    const std::string mesh1 = tp("cli_rt1.mesh");
    REQUIRE(run("gen annulus --T 2.5 --ns 6 --nth 10 -o " + mesh1 +
                " --dump-config " + cfg) == 0);
    const std::string first = testutil::slurp(mesh1);
    std::filesystem::remove(mesh1);
    REQUIRE(run("--json-config " + cfg) == 0);
    CHECK(testutil::slurp(mesh1) == first);

    // unknown command in a config is a usage error
    const std::string bad = tp("cli_bad.json");
    {
        std::ofstream out(bad);
        out << "{\"command\": \"frobnicate\"}\n";
    }
    CHECK(run("--json-config " + bad) == 2);
}

TEST_SUITE_END();
