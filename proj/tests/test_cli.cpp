#include <sys/wait.h>

#include <cstdio>
#include <string>

#include "canht/real.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"

using canht::Real;
using testutil::close_2exp;
using testutil::series_log;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    RunResult r;
    std::string cmd = std::string(CANHT_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int rc = pclose(p);
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

Real parse_decimal(const std::string& s, mpfr_prec_t prec) {
    Real r(prec);
    REQUIRE(mpfr_set_str(r.raw(), s.c_str(), 10, MPFR_RNDN) == 0);
    return r;
}

}  // namespace

TEST_CASE("cli reports torsion points") {
    RunResult r = run_cli("compute --curve 0,0,0,0,1 --point 2,3 --digits 30");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "0.000000000000000000000000000000 (torsion, order 6)\n");
}

TEST_CASE("cli breakdown with empty finite part") {
    RunResult r = run_cli("compute --curve 0,0,1,-1,0 --point 0,0 --digits 20 --breakdown");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("psi_finite: 0 (empty)") != std::string::npos);
    CHECK(r.out.find("h_naive: 0.") != std::string::npos);
    CHECK(r.out.substr(0, 7) == "0.05111");  // 0.0511114082...
}

TEST_CASE("cli exit codes") {
    CHECK(run_cli("compute --curve 0,0,0,0,1 --point 7,0").exit_code == 3);
    CHECK(run_cli("compute --curve 0,0,0,0,0 --point 2,3").exit_code == 4);
    CHECK(run_cli("compute --curve 0,0,0,0,1 --point nonsense").exit_code == 2);
    CHECK(run_cli("compute --curve 0,0,0,1 --point 2,3").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("cli json output round-trips") {
    RunResult r = run_cli("compute --curve 0,0,0,0,1 --point 2,3 --digits 40 --json");
    REQUIRE(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);

    CHECK(j["curve"] == nlohmann::json({"0", "0", "0", "0", "1"}));
    CHECK(j["point"]["x"] == "2");
    CHECK(j["normalization"] == "CPS (twice Silverman-book)");
    CHECK(j["torsion_order"] == 6);
    CHECK(j["precision_bits"].get<unsigned long>() >= 100);

    // Re-evaluate the exact formal sum and compare with the printed value.
    Real acc(256);
    for (const auto& term : j["psi_finite"]["terms"]) {
        mpq_class mu(term["mu"].get<std::string>());
        mu.canonicalize();
        mpz_class q(term["q"].get<std::string>());
        acc += Real::of(mu, 256) * series_log(q, 256);
    }
    Real printed = parse_decimal(j["psi_finite"]["value"].get<std::string>(), 256);
    CHECK(close_2exp(acc, printed, -128));

    // h_canonical consistency between text and json modes.
    RunResult t = run_cli("compute --curve 0,0,0,0,1 --point 2,3 --digits 40");
    std::string text_h = t.out.substr(0, t.out.find(' '));
    CHECK(j["h_canonical"].get<std::string>() == text_h);

    // A non-torsion case: psi_infinity is present and the identity
    // h_canonical = h_naive - psi_infinity - psi_finite holds.
    RunResult r2 = run_cli("compute --curve 0,0,1,-1,0 --point 0,0 --digits 40 --json");
    REQUIRE(r2.exit_code == 0);
    nlohmann::json j2 = nlohmann::json::parse(r2.out);
    CHECK(j2["torsion_order"].is_null());
    Real h = parse_decimal(j2["h_canonical"].get<std::string>(), 256);
    Real hn = parse_decimal(j2["h_naive"].get<std::string>(), 256);
    Real pi = parse_decimal(j2["psi_infinity"].get<std::string>(), 256);
    Real pf = parse_decimal(j2["psi_finite"]["value"].get<std::string>(), 256);
    CHECK(close_2exp(h, hn - pi - pf, -120));
}

TEST_CASE("cli arch-method series agrees with the default") {
    RunResult agm = run_cli("compute --curve 0,0,1,-1,0 --point 0,0 --digits 25");
    RunResult ser = run_cli("compute --curve 0,0,1,-1,0 --point 0,0 --digits 25 --arch-method series");
    REQUIRE(agm.exit_code == 0);
    REQUIRE(ser.exit_code == 0);
    CHECK(agm.out == ser.out);
}

TEST_CASE("cli bench") {
    CHECK(run_cli("bench --reps 0").out.empty());
    RunResult r = run_cli("bench --size 25 --reps 1 --seed 7");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("median:") != std::string::npos);
}
