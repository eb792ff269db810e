#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "secrecy/harness.hpp"

// End-to-end tests driving the installed binary. CTest points SOPCLI_BIN at
// the freshly built executable and SOPCLI_RECIPE_DIR at the source recipes.

namespace {

struct CmdResult {
    int rc;
    std::string out;
};

CmdResult run_cli(const std::string& args, bool merge_stderr = true) {
    const char* bin = std::getenv("SOPCLI_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "SOPCLI_BIN must point at the sopcli binary");
    std::string cmd = std::string(bin) + " " + args;
    if (merge_stderr) cmd += " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> fields_of(const std::string& line) {
    return secrecy::split_csv_line(line);
}

std::string first_line(const std::string& s) {
    const auto pos = s.find('\n');
    return pos == std::string::npos ? s : s.substr(0, pos);
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    REQUIRE(bool(f));
    f << body;
}

}  // namespace

TEST_CASE("analytic subcommand reproduces a frozen reference value") {
    const auto r = run_cli(
        "analytic --k 3 --alpha 4 --d-bu 10 --radius 100 --rho-e 0.001 --beta 1 --format csv");
    REQUIRE(r.rc == 0);
    const auto f = fields_of(first_line(r.out));
    REQUIRE(f.size() == 3);
    CHECK(std::stod(f[0]) == doctest::Approx(0.21140117422711158).epsilon(1e-8));
    CHECK(f[1] == "Approximation");
    CHECK(f[2] == "LaplaceIntegral");
}

TEST_CASE("analytic human format names its fields") {
    const auto r = run_cli("analytic --rho-e 0.002");
    REQUIRE(r.rc == 0);
    CHECK(r.out.find("value=") != std::string::npos);
    CHECK(r.out.find("kind=") != std::string::npos);
    CHECK(r.out.find("method=") != std::string::npos);
}

TEST_CASE("analytic auxiliary evaluators are reachable") {
    const auto lb = run_cli("analytic --evaluator lower_bound --k 100 --rho-e 0.005 --format csv");
    REQUIRE(lb.rc == 0);
    const auto f = fields_of(first_line(lb.out));
    REQUIRE(f.size() == 3);
    CHECK(std::stod(f[0]) == doctest::Approx(0.031370375662429159).epsilon(1e-9));
    CHECK(f[2] == "LargeKBound");

    const auto ap = run_cli(
        "analytic --evaluator approx_alpha2 --duplex fd --ed colluding --pu-over-n0-db 30 "
        "--format csv");
    REQUIRE(ap.rc == 0);
    CHECK(fields_of(first_line(ap.out))[2] == "OmegaApprox");

    // evaluator/scenario mismatch is a usage error
    const auto bad = run_cli("analytic --evaluator lower_bound --duplex fd");
    CHECK(bad.rc == 2);
    CHECK(bad.out.find("fix:") != std::string::npos);
}

TEST_CASE("config file values load and explicit flags override them") {
    const std::string cfg = "/tmp/sopcli_test_cfg.json";
    // config alone would give the rho_e=0.005 value (0.67524...); the flag
    // must win and reproduce the rho_e=0.001 reference instead
    write_file(cfg, R"({"k_antennas": 3, "alpha": 4.0, "d_bu": 10.0, "radius": 100.0,
                        "rho_e": 0.005})");
    const auto r = run_cli("analytic --config " + cfg + " --rho-e 0.001 --format csv");
    REQUIRE(r.rc == 0);
    CHECK(std::stod(fields_of(first_line(r.out))[0]) ==
          doctest::Approx(0.21140117422711158).epsilon(1e-8));
    std::remove(cfg.c_str());
}

TEST_CASE("unknown config keys are rejected with exit code 2") {
    const std::string cfg = "/tmp/sopcli_test_badcfg.json";
    write_file(cfg, R"({"raduis": 60.0})");
    const auto r = run_cli("analytic --config " + cfg);
    CHECK(r.rc == 2);
    CHECK(r.out.find("raduis") != std::string::npos);
    std::remove(cfg.c_str());
}

TEST_CASE("invalid parameter values exit with code 1 and name the field") {
    const auto r = run_cli("analytic --radius -1");
    CHECK(r.rc == 1);
    CHECK(r.out.find("NonPositive") != std::string::npos);
    CHECK(r.out.find("radius") != std::string::npos);

    const auto mixed = run_cli("analytic --beta 2 --epsilon 0.3");
    CHECK(mixed.rc == 1);
    CHECK(mixed.out.find("InconsistentBetaEpsilon") != std::string::npos);

    // a lone --beta auto-fills the matching epsilon
    CHECK(run_cli("analytic --beta 2").rc == 0);
}

TEST_CASE("unknown flags and subcommands exit with code 2") {
    const auto flag = run_cli("analytic --nope 1");
    CHECK(flag.rc == 2);
    CHECK(flag.out.find("--nope") != std::string::npos);
    CHECK(flag.out.find("fix:") != std::string::npos);

    const auto sub = run_cli("frobnicate");
    CHECK(sub.rc == 2);

    CHECK(run_cli("").rc == 2);  // a subcommand is required
}

TEST_CASE("simulate is deterministic for a fixed seed") {
    const std::string args = "simulate --rho-e 0.002 --trials 5000 --seed 42 --format csv";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    REQUIRE(a.rc == 0);
    CHECK(a.out == b.out);
    CHECK(first_line(a.out) == "p_hat,ci_low,ci_high,n_trials,seed,outage_def");
    const auto c = run_cli("simulate --rho-e 0.002 --trials 5000 --seed 43 --format csv");
    CHECK(a.out != c.out);

    const auto human = run_cli("simulate --rho-e 0.002 --trials 2000 --seed 1");
    REQUIRE(human.rc == 0);
    CHECK(human.out.find("p_hat=") != std::string::npos);
    CHECK(human.out.find("ci=[") != std::string::npos);
}

TEST_CASE("sweep of a built-in recipe emits the full CSV grid") {
    const auto r = run_cli("sweep --recipe fig2 --trials 500 --seed 9", false);
    REQUIRE(r.rc == 0);
    CHECK(first_line(r.out) == secrecy::csv_header());
    const auto rows = secrecy::parse_csv(r.out);
    REQUIRE(rows.size() == 16);  // 4 values x 2 scenarios x 2 methods
    for (const auto& row : rows) {
        CHECK(row.axis_name == "rho_e");
        if (row.is_mc()) {
            CHECK(row.n_trials == 500);
            CHECK(row.seed == secrecy::mix_point_seed(9, row.axis_value, row.scenario));
        }
    }
}

TEST_CASE("sweep writes CSV and plot script files on request") {
    const std::string csv = "/tmp/sopcli_test_sweep.csv";
    const std::string plt = "/tmp/sopcli_test_sweep.gp";
    const auto r =
        run_cli("sweep --recipe fig6 --out " + csv + " --plot " + plt);
    REQUIRE(r.rc == 0);
    std::ifstream fc(csv);
    REQUIRE(bool(fc));
    std::string header;
    std::getline(fc, header);
    CHECK(header == secrecy::csv_header());
    std::ifstream fp(plt);
    REQUIRE(bool(fp));
    std::string script((std::istreambuf_iterator<char>(fp)), std::istreambuf_iterator<char>());
    CHECK(script.find("set datafile separator ','") != std::string::npos);
    CHECK(script.find(csv) != std::string::npos);
    std::remove(csv.c_str());
    std::remove(plt.c_str());
}

TEST_CASE("sweep checks declared trends and reports them") {
    const auto r = run_cli("sweep --recipe fig6 --check-trends --out /dev/null");
    REQUIRE(r.rc == 0);
    CHECK(r.out.find("trend:") != std::string::npos);
    CHECK(r.out.find("ok") != std::string::npos);
}

TEST_CASE("sweep accepts a spec file and rejects ambiguous sources") {
    const std::string spec = "/tmp/sopcli_test_spec.json";
    write_file(spec, R"({
        "name": "tiny",
        "base": {"rho_e": 0.002},
        "axis": "k_antennas",
        "values": [1, 2, 3],
        "scenarios": [{"duplex": "hd", "ed_model": "independent"}],
        "methods": ["analytic"]
    })");
    const auto ok = run_cli("sweep --spec " + spec, false);
    REQUIRE(ok.rc == 0);
    CHECK(secrecy::parse_csv(ok.out).size() == 3);

    const auto both = run_cli("sweep --recipe fig2 --spec " + spec);
    CHECK(both.rc == 2);

    const auto neither = run_cli("sweep");
    CHECK(neither.rc == 2);
    CHECK(neither.out.find("--recipe NAME or --spec FILE") != std::string::npos);
    std::remove(spec.c_str());
}

TEST_CASE("compare finds analytic and simulation in agreement") {
    const auto r = run_cli(
        "compare --axis rho_e --values 0.001,0.002 --trials 20000 --seed 5 --k 2");
    REQUIRE(r.rc == 0);
    CHECK(r.out.find("2/2 points agree") != std::string::npos);
    CHECK(r.out.find("MISMATCH") == std::string::npos);
}

TEST_CASE("validate runs the built-in checks and passes") {
    const auto r = run_cli("validate");
    REQUIRE(r.rc == 0);
    CHECK(r.out.find("checks passed") != std::string::npos);
    CHECK(r.out.find("PASS") != std::string::npos);
    CHECK(r.out.find("FAIL ") == std::string::npos);
}

TEST_CASE("recipes lists every built-in sweep") {
    const auto r = run_cli("recipes");
    REQUIRE(r.rc == 0);
    for (const char* name : {"fig2", "fig3", "fig4", "fig5a", "fig5b", "fig6"})
        CHECK(r.out.find(name) != std::string::npos);

    const auto missing = run_cli("recipes --recipe-dir /nonexistent_dir_42");
    CHECK(missing.rc == 1);
}

TEST_CASE("help text documents every parameter field with its unit") {
    const auto r = run_cli("analytic --help");
    REQUIRE(r.rc == 0);
    for (const char* field :
         {"k_antennas", "rho_e", "radius", "d_bu", "alpha", "beta", "epsilon", "pb_over_n0_db",
          "pu_over_n0_db", "lambda_uu_db", "duplex", "ed_model", "ed_noise"})
        CHECK_MESSAGE(r.out.find(field) != std::string::npos, field);
    CHECK(r.out.find("(dB)") != std::string::npos);
    CHECK(r.out.find("(m)") != std::string::npos);
    CHECK(run_cli("--help").rc == 0);
    CHECK(run_cli("simulate --help").rc == 0);
    CHECK(run_cli("sweep --help").rc == 0);
}
