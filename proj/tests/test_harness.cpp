#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "secrecy/harness.hpp"
#include "secrecy/recipes.hpp"

using namespace secrecy;

namespace {

constexpr Scenario kHdIe{Duplex::HalfDuplex, EdModel::Independent};
constexpr Scenario kHdCe{Duplex::HalfDuplex, EdModel::Colluding};
constexpr Scenario kFdIe{Duplex::FullDuplex, EdModel::Independent};
constexpr Scenario kFdCe{Duplex::FullDuplex, EdModel::Colluding};

SweepRow mc_row(double x, double value, double half, Scenario sc = kHdIe) {
    SweepRow r;
    r.axis_name = "rho_e";
    r.axis_value = x;
    r.scenario = sc;
    r.method = EvalMethod::MonteCarlo;
    r.kind = "Estimate";
    r.value = value;
    r.raw_value = value;
    r.ci_low = value - half;
    r.ci_high = value + half;
    r.n_trials = 1000;
    r.seed = 1;
    return r;
}

}  // namespace

TEST_CASE("set_axis reaches every sweepable field") {
    SystemParams p;
    set_axis(p, "k_antennas", 7.2);
    CHECK(p.k_antennas == 7);
    set_axis(p, "rho_e", 0.004);
    CHECK(p.rho_e == 0.004);
    set_axis(p, "radius", 80.0);
    CHECK(p.radius == 80.0);
    set_axis(p, "d_bu", 9.0);
    CHECK(p.d_bu == 9.0);
    set_axis(p, "alpha", 3.5);
    CHECK(p.alpha == 3.5);
    set_axis(p, "pb_over_n0_db", 42.0);
    CHECK(p.pb_over_n0_db == 42.0);
    set_axis(p, "pu_over_n0_db", 41.0);
    CHECK(p.pu_over_n0_db == 41.0);
    set_axis(p, "lambda_uu_db", -3.0);
    CHECK(p.lambda_uu_db == -3.0);
    // threshold fields stay mutually consistent
    set_axis(p, "beta", 4.0);
    CHECK(p.beta == 4.0);
    CHECK(p.epsilon == doctest::Approx(2.0).epsilon(1e-15));
    set_axis(p, "epsilon", 3.0);
    CHECK(p.beta == doctest::Approx(8.0).epsilon(1e-15));
    CHECK_THROWS_AS(set_axis(p, "raduis", 1.0), DomainError);
}

TEST_CASE("method and trend names parse both spellings") {
    CHECK(parse_eval_method("analytic") == EvalMethod::Analytic);
    CHECK(parse_eval_method("Bound") == EvalMethod::Bound);
    CHECK(parse_eval_method("approximation") == EvalMethod::Approximation);
    CHECK(parse_eval_method("monte_carlo") == EvalMethod::MonteCarlo);
    CHECK_THROWS_AS(parse_eval_method("exact"), DomainError);
    CHECK(parse_trend("increasing") == Trend::Increasing);
    CHECK(parse_trend("Decreasing") == Trend::Decreasing);
    CHECK(parse_trend("flat") == Trend::Flat);
    CHECK_THROWS_AS(parse_trend("rising"), DomainError);
}

TEST_CASE("per-point seeds depend on value and scenario but not grid shape") {
    const std::uint64_t a = mix_point_seed(1, 0.001, kHdIe);
    CHECK(a == mix_point_seed(1, 0.001, kHdIe));  // stable
    CHECK(a != mix_point_seed(1, 0.002, kHdIe));  // axis value matters
    CHECK(a != mix_point_seed(1, 0.001, kHdCe));  // model matters
    CHECK(a != mix_point_seed(1, 0.001, kFdIe));  // duplex matters
    CHECK(a != mix_point_seed(2, 0.001, kHdIe));  // base seed matters
}

TEST_CASE("run_sweep emits one row per grid cell") {
    SweepSpec spec;
    spec.base.rho_e = 0.002;
    spec.axis = "rho_e";
    spec.values = {0.001, 0.002, 0.004};
    spec.scenarios = {kHdIe, kHdCe};
    spec.methods = {EvalMethod::Analytic};
    const SweepResult res = run_sweep(spec);
    CHECK(res.failures.empty());
    REQUIRE(res.rows.size() == 6);
    for (const auto& r : res.rows) {
        CHECK(r.axis_name == "rho_e");
        CHECK_FALSE(r.kind.empty());
        CHECK(r.n_trials == 0);  // analytic rows carry no MC metadata
        CHECK(std::isnan(r.ci_low));
        CHECK(r.value >= 0.0);
        CHECK(r.value <= 1.0);
    }
    // value-major ordering with scenarios nested inside
    CHECK(res.rows[0].axis_value == 0.001);
    CHECK(res.rows[0].scenario == kHdIe);
    CHECK(res.rows[1].scenario == kHdCe);
    CHECK(res.rows[2].axis_value == 0.002);
}

TEST_CASE("run_sweep Monte Carlo rows carry their mixed seed and interval") {
    SweepSpec spec;
    spec.axis = "rho_e";
    spec.values = {0.001, 0.003};
    spec.scenarios = {kHdIe};
    spec.methods = {EvalMethod::MonteCarlo};
    spec.n_trials = 2000;
    spec.seed = 77;
    const SweepResult res = run_sweep(spec);
    REQUIRE(res.rows.size() == 2);
    for (const auto& r : res.rows) {
        CHECK(r.is_mc());
        CHECK(r.n_trials == 2000);
        CHECK(r.seed == mix_point_seed(77, r.axis_value, r.scenario));
        CHECK(r.ci_low <= r.value);
        CHECK(r.ci_high >= r.value);
    }
}

TEST_CASE("run_sweep rejects empty grids") {
    SweepSpec spec;
    spec.axis = "rho_e";
    spec.values = {0.001};
    spec.scenarios = {kHdIe};
    spec.methods = {EvalMethod::Analytic};
    SweepSpec s1 = spec;
    s1.values.clear();
    CHECK_THROWS_AS(run_sweep(s1), EmptyInput);
    SweepSpec s2 = spec;
    s2.scenarios.clear();
    CHECK_THROWS_AS(run_sweep(s2), EmptyInput);
    SweepSpec s3 = spec;
    s3.methods.clear();
    CHECK_THROWS_AS(run_sweep(s3), EmptyInput);
}

TEST_CASE("run_sweep records per-point failures without aborting") {
    SweepSpec spec;
    spec.axis = "rho_e";
    spec.values = {0.001, 0.002, 0.003};
    spec.scenarios = {kHdIe};  // no approximation exists for this scenario
    spec.methods = {EvalMethod::Analytic, EvalMethod::Approximation};
    const SweepResult res = run_sweep(spec);
    CHECK(res.rows.size() == 3);  // the analytic rows survive
    CHECK(res.failures.size() == 3);
    for (const auto& f : res.failures) CHECK(f.find("Approximation") != std::string::npos);
}

TEST_CASE("trend_check on analytic series is strict") {
    SweepSpec spec;
    spec.axis = "rho_e";
    spec.values = {0.001, 0.002, 0.004, 0.008};
    spec.scenarios = {kHdIe, kHdCe};
    spec.methods = {EvalMethod::Analytic};
    const SweepResult res = run_sweep(spec);
    const TrendReport up = trend_check(res, Trend::Increasing);
    CHECK(up.pass);
    CHECK(up.notes.size() == 2);  // one per scenario series
    for (const auto& n : up.notes) CHECK(n.find("ok") != std::string::npos);
    const TrendReport down = trend_check(res, Trend::Decreasing);
    CHECK_FALSE(down.pass);
    CHECK(down.notes.front().find("wrong way") != std::string::npos);
    const TrendReport flat = trend_check(res, Trend::Flat);
    CHECK_FALSE(flat.pass);
}

TEST_CASE("trend_check accepts an exactly flat analytic series") {
    // half-duplex outage does not involve the BS power at all
    SweepSpec spec;
    spec.axis = "pb_over_n0_db";
    spec.values = {30, 40, 50, 60};
    spec.scenarios = {kHdIe};
    spec.methods = {EvalMethod::Analytic};
    const SweepResult res = run_sweep(spec);
    CHECK(trend_check(res, Trend::Flat).pass);
    CHECK_FALSE(trend_check(res, Trend::Increasing).pass);
}

TEST_CASE("trend_check tolerates Monte Carlo noise inside the intervals") {
    SweepResult res;
    // noisy but not significantly contradictory: middle point dips within CI
    res.rows = {mc_row(1, 0.100, 0.02), mc_row(2, 0.095, 0.02), mc_row(3, 0.120, 0.02)};
    CHECK(trend_check(res, Trend::Increasing).pass);
    // a CI-separated drop is a real violation
    res.rows = {mc_row(1, 0.100, 0.005), mc_row(2, 0.050, 0.005), mc_row(3, 0.120, 0.005)};
    const TrendReport rep = trend_check(res, Trend::Increasing);
    CHECK_FALSE(rep.pass);
    CHECK(rep.notes.front().find("significantly") != std::string::npos);
    // flat: spread must stay within twice the widest half-interval
    res.rows = {mc_row(1, 0.100, 0.01), mc_row(2, 0.110, 0.01), mc_row(3, 0.095, 0.01)};
    CHECK(trend_check(res, Trend::Flat).pass);
    res.rows = {mc_row(1, 0.100, 0.01), mc_row(2, 0.160, 0.01), mc_row(3, 0.095, 0.01)};
    CHECK_FALSE(trend_check(res, Trend::Flat).pass);
}

TEST_CASE("trend_check needs at least three points per series") {
    SweepResult res;
    res.rows = {mc_row(1, 0.1, 0.01), mc_row(2, 0.2, 0.01)};
    CHECK_THROWS_AS(trend_check(res, Trend::Increasing), InsufficientPoints);
    SweepResult empty;
    CHECK_THROWS_AS(trend_check(empty, Trend::Increasing), InsufficientPoints);
}

TEST_CASE("crossover_search finds the self-interference break-even point") {
    // going full duplex pays off only while the residual self-interference is
    // small; past the crossover the jammer hurts the user more than the
    // eavesdroppers. With the bound standing in for the FD curve the analytic
    // crossover of this geometry sits near 1 dB.
    SystemParams base;
    base.k_antennas = 5;
    base.alpha = 4;
    base.d_bu = 10;
    base.radius = 50;
    base.rho_e = 0.001;
    base.beta = 1;
    base.epsilon = 0;
    base.pu_over_n0_db = 60;
    CrossoverOptions opt;
    opt.monte_carlo = false;
    opt.x_tol = 0.05;
    const double x = crossover_search(base, "lambda_uu_db", 0.0, 20.0, {kHdIe, kFdIe}, opt);
    CHECK(x > 0.8);
    CHECK(x < 1.2);
    // swapped pair flips the sign convention but finds the same point
    const double y = crossover_search(base, "lambda_uu_db", 0.0, 20.0, {kFdIe, kHdIe}, opt);
    CHECK(y == doctest::Approx(x).epsilon(0.1));
}

TEST_CASE("crossover_search guards") {
    SystemParams base;
    base.rho_e = 0.002;
    CrossoverOptions opt;
    opt.monte_carlo = false;
    CHECK_THROWS_AS(crossover_search(base, "rho_e", 0.5, 0.5, {kHdIe, kFdIe}, opt), DomainError);
    // identical scenarios never separate
    CHECK_THROWS_AS(crossover_search(base, "rho_e", 0.001, 0.005, {kHdIe, kHdIe}, opt),
                    NoSignChange);
    // both endpoints on the same side
    SystemParams b2;
    b2.k_antennas = 5;
    b2.alpha = 4;
    b2.d_bu = 10;
    b2.radius = 50;
    b2.rho_e = 0.001;
    b2.pu_over_n0_db = 60;
    CHECK_THROWS_AS(crossover_search(b2, "lambda_uu_db", 6.0, 16.0, {kHdIe, kFdIe}, opt),
                    NoSignChange);
}

TEST_CASE("CSV round trip preserves every field") {
    SweepSpec spec;
    spec.axis = "rho_e";
    spec.values = {0.001, 0.002, 0.003};
    spec.scenarios = {kHdIe, kFdCe};
    spec.methods = {EvalMethod::Analytic, EvalMethod::MonteCarlo};
    spec.n_trials = 1500;
    spec.seed = 3;
    const SweepResult res = run_sweep(spec);
    REQUIRE(res.rows.size() == 12);

    const std::string text = emit_csv_string(res);
    CHECK(text.compare(0, std::string(csv_header()).size(), csv_header()) == 0);
    // analytic rows leave the MC columns empty
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);  // header
    std::size_t blank_tails = 0;
    while (std::getline(is, line))
        if (line.size() >= 3 && line.compare(line.size() - 3, 3, ",,,") == 0) ++blank_tails;
    CHECK(blank_tails == 6);

    const std::vector<SweepRow> back = parse_csv(text);
    REQUIRE(back.size() == res.rows.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CAPTURE(i);
        const auto& a = res.rows[i];
        const auto& b = back[i];
        CHECK(a.axis_name == b.axis_name);
        CHECK(a.axis_value == b.axis_value);
        CHECK(a.scenario == b.scenario);
        CHECK(a.method == b.method);
        CHECK(a.kind == b.kind);
        CHECK(a.value == b.value);  // %.17g survives the round trip bit for bit
        CHECK(a.raw_value == b.raw_value);
        if (a.is_mc()) {
            CHECK(a.ci_low == b.ci_low);
            CHECK(a.ci_high == b.ci_high);
            CHECK(a.n_trials == b.n_trials);
            CHECK(a.seed == b.seed);
        } else {
            CHECK(std::isnan(b.ci_low));
            CHECK(b.n_trials == 0);
        }
    }
}

TEST_CASE("CSV parser rejects malformed input") {
    CHECK_THROWS_AS(parse_csv("value\n1\n"), DomainError);
    const std::string good_header = csv_header();
    CHECK_THROWS_AS(parse_csv(good_header + "\nrho_e,1,HalfDuplex\n"), DomainError);
    // empty body is fine
    CHECK(parse_csv(good_header + "\n").empty());
}

TEST_CASE("plot script references the data columns and filters") {
    SweepSpec spec;
    spec.axis = "rho_e";
    spec.values = {0.001, 0.002};
    spec.scenarios = {kHdIe, kHdCe};
    spec.methods = {EvalMethod::Analytic};
    const SweepResult res = run_sweep(spec);
    PlotLayout layout;
    layout.csv_path = "out.csv";
    layout.title = "density sweep";
    const std::string s = emit_plot_script(res, layout);
    CHECK(s.find("set datafile separator ','") != std::string::npos);
    CHECK(s.find("set logscale y") != std::string::npos);
    CHECK(s.find("'out.csv'") != std::string::npos);
    CHECK(s.find("stringcolumn(3) eq 'HalfDuplex'") != std::string::npos);
    CHECK(s.find("stringcolumn(4) eq 'Colluding'") != std::string::npos);
    CHECK(s.find("stringcolumn(5) eq 'Analytic'") != std::string::npos);
    CHECK(s.find("$7") != std::string::npos);
    CHECK(s.find("set xlabel 'rho_e'") != std::string::npos);
    PlotLayout lin = layout;
    lin.log_y = false;
    CHECK(emit_plot_script(res, lin).find("logscale") == std::string::npos);
}

TEST_CASE("recipe files load with their grids and expectations") {
    const std::string dir = SOPCLI_TEST_RECIPE_DIR;
    const auto files = list_recipe_files(dir);
    REQUIRE(files.size() == 6);
    CHECK(files.front().find("fig2.json") != std::string::npos);
    CHECK(files.back().find("fig6.json") != std::string::npos);

    const Recipe fig2 = load_recipe_file(dir + "/fig2.json");
    CHECK(fig2.name == "fig2");
    CHECK(fig2.spec.axis == "rho_e");
    CHECK(fig2.spec.values == std::vector<double>{0.0005, 0.001, 0.002, 0.005});
    REQUIRE(fig2.spec.scenarios.size() == 2);
    CHECK(fig2.spec.scenarios[0] == kHdIe);
    CHECK(fig2.spec.scenarios[1] == kHdCe);
    REQUIRE(fig2.spec.methods.size() == 2);
    CHECK(fig2.spec.methods[0] == EvalMethod::Analytic);
    CHECK(fig2.spec.methods[1] == EvalMethod::MonteCarlo);
    CHECK(fig2.spec.n_trials == 100000);
    CHECK(fig2.spec.seed == 1);
    CHECK(fig2.spec.base.alpha == 4.0);
    CHECK(fig2.spec.base.k_antennas == 5);
    REQUIRE(fig2.trends.size() == 1);
    CHECK(fig2.trends[0].expected == Trend::Increasing);
    CHECK_FALSE(fig2.trends[0].duplex.has_value());

    for (const auto& f : files) CHECK_NOTHROW(load_recipe_file(f));
}

TEST_CASE("recipe grids run end to end and satisfy their trends") {
    const std::string dir = SOPCLI_TEST_RECIPE_DIR;
    Recipe fig2 = load_recipe_file(dir + "/fig2.json");
    fig2.spec.n_trials = 20000;  // reduced budget; CI-aware checks absorb the noise
    const SweepResult res = run_sweep(fig2.spec);
    CHECK(res.failures.empty());
    CHECK(res.rows.size() == fig2.spec.values.size() * 4);
    const TrendReport rep = check_recipe_trends(fig2, res);
    CHECK(rep.pass);
    CHECK(rep.notes.size() == 4);  // 2 scenarios x 2 methods under one filter
}

TEST_CASE("recipe loader rejects unsorted grids and reports missing rows") {
    nlohmann::json j;
    j["name"] = "bad";
    j["base"] = nlohmann::json::object();
    j["axis"] = "rho_e";
    j["values"] = {0.002, 0.001};
    j["scenarios"] = nlohmann::json::array({{{"duplex", "hd"}, {"ed_model", "independent"}}});
    j["methods"] = {"analytic"};
    CHECK_THROWS_AS(load_recipe(j), DomainError);

    // a trend whose filter matches nothing must fail the merged report
    Recipe r;
    r.name = "empty-filter";
    RecipeTrend t;
    t.duplex = Duplex::FullDuplex;
    t.expected = Trend::Increasing;
    r.trends.push_back(t);
    SweepResult res;
    res.rows = {mc_row(1, 0.1, 0.01), mc_row(2, 0.2, 0.01), mc_row(3, 0.3, 0.01)};
    const TrendReport rep = check_recipe_trends(r, res);
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.notes.size() == 1);
    CHECK(rep.notes.front().find("matched no rows") != std::string::npos);
}
