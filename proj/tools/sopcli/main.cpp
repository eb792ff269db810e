#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "secrecy/harness.hpp"
#include "secrecy/params.hpp"
#include "secrecy/params_io.hpp"
#include "secrecy/recipes.hpp"
#include "secrecy/selftest.hpp"
#include "secrecy/simcore.hpp"

#ifndef SOPCLI_RECIPE_DIR
#define SOPCLI_RECIPE_DIR "recipes"
#endif

namespace {

using namespace secrecy;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Parameter flags shared by the computing subcommands. Resolution order:
// defaults, then --config file values, then explicit flags.
struct ParamOpts {
    SystemParams flags;
    std::string config_path, duplex_s, ed_s;
    CLI::App* cmd = nullptr;

    void attach(CLI::App* c) {
        cmd = c;
        c->add_option("--config", config_path,
                      "JSON file; keys mirror the parameter field names below, explicit flags override")
            ->check(CLI::ExistingFile);
        c->add_option("--k", flags.k_antennas, "k_antennas: transmit antennas available for selection (count)");
        c->add_option("--rho-e", flags.rho_e, "rho_e: eavesdropper density (per m^2)");
        c->add_option("--radius", flags.radius, "radius: eavesdropper region radius (m)");
        c->add_option("--d-bu", flags.d_bu, "d_bu: base-station-to-user distance (m)");
        c->add_option("--alpha", flags.alpha, "alpha: path-loss exponent (unitless)");
        c->add_option("--beta", flags.beta, "beta: outage threshold on the SNR ratio, equals 2^epsilon (unitless)");
        c->add_option("--epsilon", flags.epsilon, "epsilon: target secrecy rate (bit/s/Hz)");
        c->add_option("--pb-over-n0-db", flags.pb_over_n0_db, "pb_over_n0_db: base-station transmit power over noise (dB)");
        c->add_option("--pu-over-n0-db", flags.pu_over_n0_db, "pu_over_n0_db: user jamming power over noise (dB), full duplex");
        c->add_option("--lambda-uu-db", flags.lambda_uu_db, "lambda_uu_db: mean residual self-interference over noise (dB), full duplex");
        c->add_option("--duplex", duplex_s, "duplex: user terminal mode, hd or fd");
        c->add_option("--ed", ed_s, "ed_model: eavesdropper cooperation, independent or colluding");
        c->add_flag("--ed-noise,!--no-ed-noise", flags.ed_noise,
                    "ed_noise: eavesdroppers also see thermal noise (flag; default on)");
    }

    SystemParams resolve() const {
        SystemParams p{};
        if (cmd->count("--config") > 0) {
            std::ifstream f(config_path);
            if (!f) throw DomainError("--config: cannot open '" + config_path + "'");
            nlohmann::json j;
            try {
                f >> j;
            } catch (const nlohmann::json::exception& e) {
                throw DomainError("--config: '" + config_path + "' is not valid JSON: " + e.what());
            }
            p = params_from_json(j);
        }
        const auto on = [&](const char* name) { return cmd->count(name) > 0; };
        if (on("--k")) p.k_antennas = flags.k_antennas;
        if (on("--rho-e")) p.rho_e = flags.rho_e;
        if (on("--radius")) p.radius = flags.radius;
        if (on("--d-bu")) p.d_bu = flags.d_bu;
        if (on("--alpha")) p.alpha = flags.alpha;
        if (on("--pb-over-n0-db")) p.pb_over_n0_db = flags.pb_over_n0_db;
        if (on("--pu-over-n0-db")) p.pu_over_n0_db = flags.pu_over_n0_db;
        if (on("--lambda-uu-db")) p.lambda_uu_db = flags.lambda_uu_db;
        const bool bset = on("--beta"), eset = on("--epsilon");
        if (bset) p.beta = flags.beta;
        if (eset) p.epsilon = flags.epsilon;
        if (bset && !eset) p.epsilon = std::log2(p.beta);
        if (eset && !bset) p.beta = std::exp2(p.epsilon);
        if (on("--duplex")) p.duplex = parse_duplex(duplex_s);
        if (on("--ed")) p.ed_model = parse_ed_model(ed_s);
        if (on("--ed-noise")) p.ed_noise = flags.ed_noise;
        return p;
    }
};

std::string default_recipe_dir() {
    if (const char* env = std::getenv("SOPCLI_RECIPE_DIR")) return env;
    return SOPCLI_RECIPE_DIR;
}

OutageDef parse_outage(const std::string& s) {
    if (s == "exact-capacity") return OutageDef::ExactCapacity;
    if (s == "snr-ratio") return OutageDef::SnrRatio;
    throw DomainError("--outage: unknown value '" + s + "' (use exact-capacity or snr-ratio)");
}

int cmd_analytic(const ParamOpts& po, const std::string& evaluator, double varrho,
                 const std::string& format) {
    const ValidatedParams vp = validate(po.resolve());
    AnalyticResult r{};
    if (evaluator == "main")
        r = sop_analytic(vp);
    else if (evaluator == "lower_bound")
        r = sop_hd_independent_lower_bound(vp);
    else
        r = sop_fd_colluding_approx_alpha2(vp, varrho);  // approx_alpha2
    if (format == "csv") {
        std::printf("%s,%s,%s\n", fmt17(r.value).c_str(), to_string(r.kind), to_string(r.method));
    } else {
        std::printf("value=%s kind=%s method=%s", fmt17(r.value).c_str(), to_string(r.kind),
                    to_string(r.method));
        if (r.clamped) std::printf(" raw=%s (clamped)", fmt17(r.raw_value).c_str());
        std::printf("\n");
    }
    return 0;
}

int cmd_simulate(const ParamOpts& po, std::uint64_t trials, std::uint64_t seed,
                 const std::string& outage_s, int threads, const std::string& format) {
    const ValidatedParams vp = validate(po.resolve());
    const OutageDef def = parse_outage(outage_s);
    const SopEstimate e = estimate_sop(vp, vp.scenario(), trials, seed, def, threads);
    if (format == "csv") {
        std::printf("p_hat,ci_low,ci_high,n_trials,seed,outage_def\n");
        std::printf("%s,%s,%s,%llu,%llu,%s\n", fmt17(e.p_hat).c_str(), fmt17(e.ci_low).c_str(),
                    fmt17(e.ci_high).c_str(), static_cast<unsigned long long>(e.n_trials),
                    static_cast<unsigned long long>(e.seed), to_string(e.outage_def));
    } else {
        std::printf("p_hat=%s ci=[%s, %s] n_trials=%llu seed=%llu outage=%s\n",
                    fmt17(e.p_hat).c_str(), fmt17(e.ci_low).c_str(), fmt17(e.ci_high).c_str(),
                    static_cast<unsigned long long>(e.n_trials),
                    static_cast<unsigned long long>(e.seed), to_string(e.outage_def));
    }
    return 0;
}

int cmd_sweep(const std::string& recipe_name, const std::string& spec_path,
              const std::string& recipe_dir, const std::string& out_path,
              const std::string& plot_path, std::uint64_t trials_override, bool seed_set,
              std::uint64_t seed, int threads, bool check_trends) {
    Recipe rec = recipe_name.empty()
                     ? load_recipe_file(spec_path)
                     : load_recipe_file(recipe_dir + "/" + recipe_name + ".json");
    if (trials_override > 0) rec.spec.n_trials = trials_override;
    if (seed_set) rec.spec.seed = seed;
    rec.spec.threads = threads;
    const SweepResult res = run_sweep(rec.spec);
    for (const auto& f : res.failures) std::fprintf(stderr, "warning: %s\n", f.c_str());
    if (out_path == "-") {
        const std::string csv = emit_csv_string(res);
        std::fwrite(csv.data(), 1, csv.size(), stdout);
    } else {
        emit_csv(res, out_path);
    }
    if (!plot_path.empty()) {
        PlotLayout layout;
        layout.csv_path = out_path == "-" ? "sweep.csv" : out_path;
        layout.title = rec.name + ": " + rec.description;
        emit_plot_script_file(res, layout, plot_path);
    }
    int rc = 0;
    if (res.rows.empty()) {
        std::fprintf(stderr, "error: sweep produced no rows\n");
        rc = 1;
    }
    if (check_trends) {
        if (rec.trends.empty()) std::fprintf(stderr, "trend: recipe declares no expectations\n");
        const TrendReport rep = check_recipe_trends(rec, res);
        for (const auto& n : rep.notes) std::fprintf(stderr, "trend: %s\n", n.c_str());
        if (!rep.pass) rc = 1;
    }
    return rc;
}

int cmd_compare(const ParamOpts& po, const std::string& axis, const std::vector<double>& values,
                std::uint64_t trials, std::uint64_t seed, const std::string& outage_s,
                int threads, double abs_tol) {
    const SystemParams base = po.resolve();
    const OutageDef def = parse_outage(outage_s);
    std::size_t n_ok = 0;
    for (double v : values) {
        SystemParams p = base;
        set_axis(p, axis, v);
        const ValidatedParams vp = validate(p);
        const AnalyticResult a = sop_analytic(vp);
        const SopEstimate e = estimate_sop(vp, vp.scenario(), trials,
                                           mix_point_seed(seed, v, vp.scenario()), def, threads);
        const bool in_ci = a.value >= e.ci_low && a.value <= e.ci_high;
        const bool close = std::abs(a.value - e.p_hat) <= abs_tol;
        const bool ok = in_ci || close;
        n_ok += ok;
        std::printf("%s=%-12g analytic=%-12.8f mc=%-12.8f ci=[%.8f, %.8f] diff=%-11.2e %s\n",
                    axis.c_str(), v, a.value, e.p_hat, e.ci_low, e.ci_high,
                    std::abs(a.value - e.p_hat), ok ? "ok" : "MISMATCH");
    }
    std::printf("compare: %zu/%zu points agree (CI or |diff| <= %g)\n", n_ok, values.size(),
                abs_tol);
    return n_ok == values.size() ? 0 : 1;
}

int cmd_validate() {
    const std::vector<CheckResult> checks = selftest_all();
    std::size_t n_ok = 0;
    for (const auto& c : checks) {
        std::printf("%s %s — %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
        n_ok += c.pass;
    }
    std::printf("validate: %zu/%zu checks passed\n", n_ok, checks.size());
    return n_ok == checks.size() ? 0 : 1;
}

int cmd_recipes(const std::string& recipe_dir) {
    const std::vector<std::string> files = list_recipe_files(recipe_dir);
    if (files.empty()) {
        std::fprintf(stderr, "error: no recipes found in '%s'\n", recipe_dir.c_str());
        return 1;
    }
    for (const auto& f : files) {
        try {
            const Recipe r = load_recipe_file(f);
            std::printf("%-8s sweep %s over %zu values, %zu scenario(s) — %s\n", r.name.c_str(),
                        r.spec.axis.c_str(), r.spec.values.size(), r.spec.scenarios.size(),
                        r.description.c_str());
        } catch (const std::exception& e) {
            std::fprintf(stderr, "warning: skipping '%s': %s\n", f.c_str(), e.what());
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "secrecy outage toolkit: analytic evaluators and a Monte Carlo simulator for a "
        "multi-antenna downlink with randomly located eavesdroppers"};
    app.require_subcommand(1);

    // --- analytic ---
    auto* an = app.add_subcommand("analytic", "evaluate a closed-form/integral expression");
    ParamOpts an_po;
    an_po.attach(an);
    std::string an_eval = "main", an_format = "human";
    double an_varrho = 1.0;
    an->add_option("--evaluator", an_eval,
                   "main: principal evaluator for the scenario; lower_bound: large-array lower "
                   "bound (hd independent); approx_alpha2: closed-form approximation (fd "
                   "colluding, alpha=2)")
        ->check(CLI::IsMember({"main", "lower_bound", "approx_alpha2"}));
    an->add_option("--varrho", an_varrho, "inner split radius for approx_alpha2 (m), in (0, min(radius, d_bu))");
    an->add_option("--format", an_format, "human or csv")->check(CLI::IsMember({"human", "csv"}));

    // --- simulate ---
    auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of the outage probability");
    ParamOpts sim_po;
    sim_po.attach(sim);
    std::uint64_t sim_trials = 100000, sim_seed = 1;
    int sim_threads = 0;
    std::string sim_outage = "exact-capacity", sim_format = "human";
    sim->add_option("--trials", sim_trials, "number of Monte Carlo trials")->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_seed, "RNG seed; all randomness derives from it");
    sim->add_option("--outage", sim_outage, "outage definition: exact-capacity or snr-ratio")
        ->check(CLI::IsMember({"exact-capacity", "snr-ratio"}));
    sim->add_option("--threads", sim_threads, "worker threads (0 = all available; result is thread-count independent)");
    sim->add_option("--format", sim_format, "human or csv")->check(CLI::IsMember({"human", "csv"}));

    // --- sweep ---
    auto* sw = app.add_subcommand("sweep", "run a parameter sweep from a recipe or spec file");
    std::string sw_recipe, sw_spec, sw_dir = default_recipe_dir(), sw_out = "-", sw_plot;
    std::uint64_t sw_trials = 0, sw_seed = 1;
    int sw_threads = 0;
    bool sw_check = false;
    auto* sw_recipe_opt = sw->add_option("--recipe", sw_recipe, "built-in recipe name (see the recipes subcommand)");
    auto* sw_spec_opt = sw->add_option("--spec", sw_spec, "path to a sweep spec JSON file")
                            ->check(CLI::ExistingFile);
    sw_recipe_opt->excludes(sw_spec_opt);
    sw->add_option("--recipe-dir", sw_dir, "directory with recipe JSON files (env SOPCLI_RECIPE_DIR overrides the built-in default)");
    sw->add_option("--out", sw_out, "output CSV path, '-' for stdout");
    sw->add_option("--plot", sw_plot, "also write a gnuplot script to this path");
    sw->add_option("--trials", sw_trials, "override the recipe's Monte Carlo trial count (0 keeps it)");
    auto* sw_seed_opt = sw->add_option("--seed", sw_seed, "override the recipe's seed");
    sw->add_option("--threads", sw_threads, "worker threads (0 = all available)");
    sw->add_flag("--check-trends", sw_check, "verify the recipe's expected trends; nonzero exit on violation");

    // --- compare ---
    auto* cp = app.add_subcommand("compare", "analytic vs Monte Carlo, point by point");
    ParamOpts cp_po;
    cp_po.attach(cp);
    std::string cp_axis, cp_outage = "exact-capacity";
    std::vector<double> cp_values;
    std::uint64_t cp_trials = 100000, cp_seed = 1;
    int cp_threads = 0;
    double cp_tol = 0.02;
    cp->add_option("--axis", cp_axis, "parameter to vary (numeric field name, e.g. rho_e)")->required();
    cp->add_option("--values", cp_values, "comma-separated axis values")->required()->delimiter(',');
    cp->add_option("--trials", cp_trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
    cp->add_option("--seed", cp_seed, "base seed; per-point seeds derive from it");
    cp->add_option("--outage", cp_outage, "outage definition: exact-capacity or snr-ratio")
        ->check(CLI::IsMember({"exact-capacity", "snr-ratio"}));
    cp->add_option("--threads", cp_threads, "worker threads (0 = all available)");
    cp->add_option("--abs-tol", cp_tol, "accept a point when |analytic - estimate| <= this, even outside the CI");

    // --- validate ---
    auto* va = app.add_subcommand("validate", "run the built-in reference-value and sampler checks");

    // --- recipes ---
    auto* re = app.add_subcommand("recipes", "list the built-in sweep recipes");
    std::string re_dir = default_recipe_dir();
    re->add_option("--recipe-dir", re_dir, "directory with recipe JSON files");

    int rc = 0;
    an->callback([&] { rc = cmd_analytic(an_po, an_eval, an_varrho, an_format); });
    sim->callback([&] { rc = cmd_simulate(sim_po, sim_trials, sim_seed, sim_outage, sim_threads, sim_format); });
    sw->callback([&] {
        if (sw_recipe.empty() && sw_spec.empty())
            throw DomainError("sweep needs --recipe NAME or --spec FILE");
        rc = cmd_sweep(sw_recipe, sw_spec, sw_dir, sw_out, sw_plot, sw_trials,
                       sw_seed_opt->count() > 0, sw_seed, sw_threads, sw_check);
    });
    cp->callback([&] { rc = cmd_compare(cp_po, cp_axis, cp_values, cp_trials, cp_seed, cp_outage, cp_threads, cp_tol); });
    va->callback([&] { rc = cmd_validate(); });
    re->callback([&] { rc = cmd_recipes(re_dir); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {  // --help / --version
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the offending flag
        std::fprintf(stderr, "fix: run '%s [subcommand] --help' for valid flags and value formats\n",
                     argv[0]);
        return 2;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\nfix: adjust the flag named above; --help lists accepted values\n",
                     e.what());
        return 2;
    } catch (const EmptyInput& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return rc;
}
