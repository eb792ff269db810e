#pragma once
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "secrecy/analytic.hpp"
#include "secrecy/errors.hpp"
#include "secrecy/params.hpp"
#include "secrecy/rng.hpp"
#include "secrecy/simcore.hpp"

namespace secrecy {

enum class EvalMethod { Analytic, Bound, Approximation, MonteCarlo };
enum class Trend { Increasing, Decreasing, Flat };

inline const char* to_string(EvalMethod m) {
    switch (m) {
        case EvalMethod::Analytic: return "Analytic";
        case EvalMethod::Bound: return "Bound";
        case EvalMethod::Approximation: return "Approximation";
        case EvalMethod::MonteCarlo: return "MonteCarlo";
    }
    return "?";
}

inline const char* to_string(Trend t) {
    switch (t) {
        case Trend::Increasing: return "Increasing";
        case Trend::Decreasing: return "Decreasing";
        case Trend::Flat: return "Flat";
    }
    return "?";
}

inline EvalMethod parse_eval_method(const std::string& s) {
    if (s == "analytic" || s == "Analytic") return EvalMethod::Analytic;
    if (s == "bound" || s == "Bound") return EvalMethod::Bound;
    if (s == "approximation" || s == "Approximation") return EvalMethod::Approximation;
    if (s == "monte_carlo" || s == "MonteCarlo") return EvalMethod::MonteCarlo;
    throw DomainError("unknown method '" + s +
                      "' (expected analytic, bound, approximation or monte_carlo)");
}

inline Trend parse_trend(const std::string& s) {
    if (s == "increasing" || s == "Increasing") return Trend::Increasing;
    if (s == "decreasing" || s == "Decreasing") return Trend::Decreasing;
    if (s == "flat" || s == "Flat") return Trend::Flat;
    throw DomainError("unknown trend '" + s + "' (expected increasing, decreasing or flat)");
}

// sweepable numeric fields; beta and epsilon are kept mutually consistent
inline void set_axis(SystemParams& p, const std::string& axis, double v) {
    if (axis == "k_antennas") {
        p.k_antennas = static_cast<int>(std::llround(v));
    } else if (axis == "rho_e") {
        p.rho_e = v;
    } else if (axis == "radius") {
        p.radius = v;
    } else if (axis == "d_bu") {
        p.d_bu = v;
    } else if (axis == "alpha") {
        p.alpha = v;
    } else if (axis == "beta") {
        p.beta = v;
        p.epsilon = std::log2(v);
    } else if (axis == "epsilon") {
        p.epsilon = v;
        p.beta = std::exp2(v);
    } else if (axis == "pb_over_n0_db") {
        p.pb_over_n0_db = v;
    } else if (axis == "pu_over_n0_db") {
        p.pu_over_n0_db = v;
    } else if (axis == "lambda_uu_db") {
        p.lambda_uu_db = v;
    } else {
        throw DomainError("unknown sweep axis '" + axis +
                          "' (numeric SystemParams field name expected)");
    }
}

// Per-point seed: mixing the axis value and scenario into the base seed means
// adding or removing grid points never perturbs existing estimates.
inline std::uint64_t mix_point_seed(std::uint64_t seed, double axis_value, Scenario sc) {
    std::uint64_t x = std::bit_cast<std::uint64_t>(axis_value);
    x ^= static_cast<std::uint64_t>(sc.duplex) << 32;
    x ^= static_cast<std::uint64_t>(sc.ed_model) << 33;
    return splitmix64(seed ^ splitmix64(x));
}

struct SweepSpec {
    SystemParams base;
    std::string axis;
    std::vector<double> values;
    std::vector<Scenario> scenarios;
    std::vector<EvalMethod> methods;
    std::uint64_t n_trials = 100000;
    std::uint64_t seed = 1;
    OutageDef outage_def = OutageDef::ExactCapacity;
    int threads = 0;
    double varrho = 1.0;  // split radius for the Approximation method
};

struct SweepRow {
    std::string axis_name;
    double axis_value = 0.0;
    Scenario scenario;
    EvalMethod method = EvalMethod::Analytic;
    std::string kind;  // analytic Kind name, or "Estimate" for MC rows
    double value = 0.0;
    double raw_value = 0.0;
    double ci_low = std::numeric_limits<double>::quiet_NaN();   // MC rows only
    double ci_high = std::numeric_limits<double>::quiet_NaN();  // MC rows only
    std::uint64_t n_trials = 0;                                 // 0 on analytic rows
    std::uint64_t seed = 0;
    bool is_mc() const { return method == EvalMethod::MonteCarlo; }
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::string> failures;  // per-point failure notes; sweep never aborts
};

namespace detail {

inline AnalyticResult analytic_for(const ValidatedParams& vp, EvalMethod method, double varrho) {
    const Scenario sc = vp.scenario();
    switch (method) {
        case EvalMethod::Analytic:
            return sop_analytic(vp);
        case EvalMethod::Bound:
            if (sc.duplex == Duplex::HalfDuplex && sc.ed_model == EdModel::Independent)
                return sop_hd_independent_lower_bound(vp);
            if (sc.duplex == Duplex::FullDuplex) return sop_analytic(vp);  // FD curves are bounds
            throw DomainError("no auxiliary bound evaluator for " + to_string(sc));
        case EvalMethod::Approximation:
            if (sc.duplex == Duplex::FullDuplex && sc.ed_model == EdModel::Colluding)
                return sop_fd_colluding_approx_alpha2(vp, varrho);
            throw DomainError("no approximation evaluator for " + to_string(sc));
        case EvalMethod::MonteCarlo:
            break;
    }
    throw DomainError("analytic_for cannot dispatch MonteCarlo");
}

}  // namespace detail

inline SweepResult run_sweep(const SweepSpec& spec) {
    if (spec.values.empty()) throw EmptyInput("sweep needs at least one axis value");
    if (spec.scenarios.empty()) throw EmptyInput("sweep needs at least one scenario");
    if (spec.methods.empty()) throw EmptyInput("sweep needs at least one method");
    SweepResult out;
    for (double v : spec.values) {
        for (const Scenario sc : spec.scenarios) {
            SystemParams p = spec.base;
            std::string note_prefix;
            {
                std::ostringstream os;
                os << spec.axis << "=" << v << " " << to_string(sc) << " ";
                note_prefix = os.str();
            }
            try {
                set_axis(p, spec.axis, v);
                p.duplex = sc.duplex;
                p.ed_model = sc.ed_model;
            } catch (const std::exception& e) {
                out.failures.push_back(note_prefix + e.what());
                continue;
            }
            for (const EvalMethod m : spec.methods) {
                SweepRow row;
                row.axis_name = spec.axis;
                row.axis_value = v;
                row.scenario = sc;
                row.method = m;
                try {
                    const ValidatedParams vp = validate(p);
                    if (m == EvalMethod::MonteCarlo) {
                        const std::uint64_t ds = mix_point_seed(spec.seed, v, sc);
                        const SopEstimate e = estimate_sop(vp, sc, spec.n_trials, ds,
                                                           spec.outage_def, spec.threads);
                        row.kind = "Estimate";
                        row.value = e.p_hat;
                        row.raw_value = e.p_hat;
                        row.ci_low = e.ci_low;
                        row.ci_high = e.ci_high;
                        row.n_trials = e.n_trials;
                        row.seed = e.seed;
                    } else {
                        const AnalyticResult r = detail::analytic_for(vp, m, spec.varrho);
                        row.kind = to_string(r.kind);
                        row.value = r.value;
                        row.raw_value = r.raw_value;
                    }
                    out.rows.push_back(std::move(row));
                } catch (const std::exception& e) {
                    out.failures.push_back(note_prefix + std::string(to_string(m)) + ": " +
                                           e.what());
                }
            }
        }
    }
    return out;
}

struct TrendReport {
    bool pass = true;
    std::vector<std::string> notes;  // one line per (scenario, method) series
};

// Verifies the expected direction for every (scenario, method) series in the
// result. Analytic series are held to strict ordering; MC series only fail on
// violations their confidence intervals cannot explain.
inline TrendReport trend_check(const SweepResult& result, Trend expected) {
    struct Key {
        Scenario sc;
        EvalMethod m;
        bool operator<(const Key& o) const {
            if (sc.duplex != o.sc.duplex) return sc.duplex < o.sc.duplex;
            if (sc.ed_model != o.sc.ed_model) return sc.ed_model < o.sc.ed_model;
            return m < o.m;
        }
    };
    std::map<Key, std::vector<const SweepRow*>> series;
    for (const auto& r : result.rows) series[{r.scenario, r.method}].push_back(&r);
    if (series.empty()) throw InsufficientPoints("trend_check on empty result");
    TrendReport rep;
    for (auto& [key, rows] : series) {
        if (rows.size() < 3)
            throw InsufficientPoints("series " + to_string(key.sc) + " " + to_string(key.m) +
                                     " has fewer than 3 points");
        std::ostringstream note;
        note << to_string(key.sc) << " " << to_string(key.m) << " expected "
             << to_string(expected) << ": ";
        bool ok = true;
        const bool mc = key.m == EvalMethod::MonteCarlo;
        const int dir = expected == Trend::Increasing ? +1 : -1;
        if (expected == Trend::Flat) {
            double lo = rows[0]->value, hi = rows[0]->value, max_half = 0.0;
            for (const auto* r : rows) {
                lo = std::min(lo, r->value);
                hi = std::max(hi, r->value);
                if (mc) max_half = std::max(max_half, 0.5 * (r->ci_high - r->ci_low));
            }
            ok = mc ? (hi - lo) <= 2.0 * max_half : (hi - lo) <= 1e-12;
            if (!ok) note << "spread " << (hi - lo) << " too large";
        } else if (!mc) {
            // strict: every step in the right direction (or equal), endpoints strict
            for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
                const double diff = dir * (rows[i + 1]->value - rows[i]->value);
                if (diff < 0.0) {
                    ok = false;
                    note << "step " << i << " moves the wrong way (" << rows[i]->value << " -> "
                         << rows[i + 1]->value << ")";
                    break;
                }
            }
            if (ok && dir * (rows.back()->value - rows.front()->value) <= 0.0) {
                ok = false;
                note << "endpoints not strictly ordered";
            }
        } else {
            // CI-aware: only a CI-separated step in the wrong direction fails
            for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
                const bool wrong = dir > 0 ? rows[i + 1]->ci_high < rows[i]->ci_low
                                           : rows[i + 1]->ci_low > rows[i]->ci_high;
                if (wrong) {
                    ok = false;
                    note << "step " << i << " significantly violates the trend ("
                         << rows[i]->value << " -> " << rows[i + 1]->value << ")";
                    break;
                }
            }
        }
        if (ok) note << "ok";
        rep.pass = rep.pass && ok;
        rep.notes.push_back(note.str());
    }
    return rep;
}

struct CrossoverOptions {
    std::uint64_t n_trials = 200000;
    std::uint64_t seed = 1;
    double x_tol = 0.5;       // axis resolution of the bisection
    bool monte_carlo = true;  // false: compare analytic evaluators instead
    OutageDef outage_def = OutageDef::ExactCapacity;
    int threads = 0;
};

// Bisection for the axis value where the SOP curves of two scenarios cross.
// In MC mode each probe must be CI-separated to count as a sign; a probe
// inside joint noise terminates the search at that point.
inline double crossover_search(const SystemParams& base, const std::string& axis, double lo,
                               double hi, std::pair<Scenario, Scenario> scenario_pair,
                               const CrossoverOptions& opt = {}) {
    if (!(lo < hi)) throw DomainError("crossover_search requires lo < hi");
    auto value_at = [&](double x, Scenario sc) -> SopEstimate {
        SystemParams p = base;
        set_axis(p, axis, x);
        p.duplex = sc.duplex;
        p.ed_model = sc.ed_model;
        const ValidatedParams vp = validate(p);
        if (opt.monte_carlo)
            return estimate_sop(vp, sc, opt.n_trials, mix_point_seed(opt.seed, x, sc),
                                opt.outage_def, opt.threads);
        const AnalyticResult r = sop_analytic(vp);
        return {r.value, r.value, r.value, 0, 0, opt.outage_def};
    };
    auto sign_at = [&](double x) -> int {
        const SopEstimate a = value_at(x, scenario_pair.first);
        const SopEstimate b = value_at(x, scenario_pair.second);
        if (a.ci_low > b.ci_high) return +1;
        if (a.ci_high < b.ci_low) return -1;
        if (!opt.monte_carlo && a.p_hat != b.p_hat) return a.p_hat > b.p_hat ? +1 : -1;
        return 0;
    };
    const int s_lo = sign_at(lo);
    const int s_hi = sign_at(hi);
    if (s_lo == 0 || s_hi == 0 || s_lo == s_hi)
        throw NoSignChange("no significant sign change of the SOP difference over [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
    int side = s_lo;
    while (hi - lo > opt.x_tol) {
        const double mid = 0.5 * (lo + hi);
        const int s = sign_at(mid);
        if (s == 0) return mid;  // statistically indistinguishable: the crossing region
        if (s == side)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// CSV and plot-script emission
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline const char* csv_header() {
    return "axis_name,axis_value,duplex,ed_model,method,kind,value,raw_value,ci_low,ci_high,"
           "n_trials,seed";
}

inline std::string emit_csv_string(const SweepResult& result) {
    std::ostringstream os;
    os << csv_header() << "\n";
    for (const auto& r : result.rows) {
        os << r.axis_name << ',' << detail::fmt_g17(r.axis_value) << ','
           << to_string(r.scenario.duplex) << ',' << to_string(r.scenario.ed_model) << ','
           << to_string(r.method) << ',' << r.kind << ',' << detail::fmt_g17(r.value) << ','
           << detail::fmt_g17(r.raw_value) << ',';
        if (r.is_mc())
            os << detail::fmt_g17(r.ci_low) << ',' << detail::fmt_g17(r.ci_high) << ','
               << r.n_trials << ',' << r.seed;
        else
            os << ",,,";
        os << "\n";
    }
    return os.str();
}

inline void emit_csv(const SweepResult& result, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << emit_csv_string(result);
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::vector<SweepRow> parse_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::vector<SweepRow> rows;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line != csv_header()) throw DomainError("unexpected CSV header: " + line);
            continue;
        }
        auto f = split_csv_line(line);
        if (f.size() != 12) throw DomainError("expected 12 CSV fields, got line: " + line);
        SweepRow r;
        r.axis_name = f[0];
        r.axis_value = std::stod(f[1]);
        r.scenario.duplex = parse_duplex(f[2]);
        r.scenario.ed_model = parse_ed_model(f[3]);
        r.method = parse_eval_method(f[4]);
        r.kind = f[5];
        r.value = std::stod(f[6]);
        r.raw_value = std::stod(f[7]);
        if (!f[8].empty()) r.ci_low = std::stod(f[8]);
        if (!f[9].empty()) r.ci_high = std::stod(f[9]);
        if (!f[10].empty()) r.n_trials = std::stoull(f[10]);
        if (!f[11].empty()) r.seed = std::stoull(f[11]);
        rows.push_back(std::move(r));
    }
    return rows;
}

struct PlotLayout {
    std::string csv_path = "sweep.csv";
    std::string title;
    bool log_y = true;
};

// self-contained gnuplot script; one series per (scenario, method) in the data
inline std::string emit_plot_script(const SweepResult& result, const PlotLayout& layout) {
    std::vector<std::pair<Scenario, EvalMethod>> series;
    for (const auto& r : result.rows) {
        std::pair<Scenario, EvalMethod> key{r.scenario, r.method};
        bool seen = false;
        for (const auto& s : series)
            if (s.first == key.first && s.second == key.second) seen = true;
        if (!seen) series.push_back(key);
    }
    const std::string axis = result.rows.empty() ? "axis" : result.rows.front().axis_name;
    std::ostringstream os;
    os << "# generated plot script; expects the accompanying sweep CSV\n";
    os << "set datafile separator ','\n";
    os << "set key outside right\n";
    os << "set xlabel '" << axis << "'\n";
    os << "set ylabel 'secrecy outage probability'\n";
    if (layout.log_y) os << "set logscale y\n";
    if (!layout.title.empty()) os << "set title '" << layout.title << "'\n";
    os << "set grid\n";
    os << "plot \\\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& [sc, m] = series[i];
        os << "  '" << layout.csv_path << "' using 2:(stringcolumn(3) eq '"
           << to_string(sc.duplex) << "' && stringcolumn(4) eq '" << to_string(sc.ed_model)
           << "' && stringcolumn(5) eq '" << to_string(m) << "' ? $7 : 1/0) with linespoints title '"
           << to_string(sc.duplex) << "/" << to_string(sc.ed_model) << " " << to_string(m) << "'";
        os << (i + 1 < series.size() ? ", \\\n" : "\n");
    }
    return os.str();
}

inline void emit_plot_script_file(const SweepResult& result, const PlotLayout& layout,
                                  const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << emit_plot_script(result, layout);
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace secrecy
