#pragma once
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "secrecy/harness.hpp"
#include "secrecy/params_io.hpp"

namespace secrecy {

// a trend expectation, optionally restricted to a duplex / ED model / method
struct RecipeTrend {
    std::optional<Duplex> duplex;
    std::optional<EdModel> ed_model;
    std::optional<EvalMethod> method;
    Trend expected = Trend::Increasing;
};

struct Recipe {
    std::string name;
    std::string description;
    SweepSpec spec;
    std::vector<RecipeTrend> trends;
};

inline Recipe load_recipe(const nlohmann::json& j) {
    Recipe r;
    r.name = j.at("name").get<std::string>();
    r.description = j.value("description", std::string{});
    r.spec.base = params_from_json(j.at("base"));
    r.spec.axis = j.at("axis").get<std::string>();
    r.spec.values = j.at("values").get<std::vector<double>>();
    if (!std::is_sorted(r.spec.values.begin(), r.spec.values.end()))
        throw DomainError("recipe '" + r.name + "': axis values must be sorted");
    for (const auto& s : j.at("scenarios"))
        r.spec.scenarios.push_back({parse_duplex(s.at("duplex").get<std::string>()),
                                    parse_ed_model(s.at("ed_model").get<std::string>())});
    for (const auto& m : j.at("methods"))
        r.spec.methods.push_back(parse_eval_method(m.get<std::string>()));
    r.spec.n_trials = j.value("n_trials", std::uint64_t{100000});
    r.spec.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("varrho")) r.spec.varrho = j.at("varrho").get<double>();
    if (j.contains("trends")) {
        for (const auto& t : j.at("trends")) {
            RecipeTrend rt;
            if (t.contains("duplex")) rt.duplex = parse_duplex(t.at("duplex").get<std::string>());
            if (t.contains("ed_model"))
                rt.ed_model = parse_ed_model(t.at("ed_model").get<std::string>());
            if (t.contains("method"))
                rt.method = parse_eval_method(t.at("method").get<std::string>());
            rt.expected = parse_trend(t.at("expected").get<std::string>());
            r.trends.push_back(rt);
        }
    }
    return r;
}

inline Recipe load_recipe_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open recipe '" + path + "'");
    nlohmann::json j;
    f >> j;
    return load_recipe(j);
}

inline std::vector<std::string> list_recipe_files(const std::string& dir) {
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json")
            out.push_back(e.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

inline TrendReport check_recipe_trends(const Recipe& recipe, const SweepResult& result) {
    TrendReport merged;
    for (const auto& t : recipe.trends) {
        SweepResult sub;
        for (const auto& row : result.rows) {
            if (t.duplex && row.scenario.duplex != *t.duplex) continue;
            if (t.ed_model && row.scenario.ed_model != *t.ed_model) continue;
            if (t.method && row.method != *t.method) continue;
            sub.rows.push_back(row);
        }
        if (sub.rows.empty()) {
            merged.pass = false;
            merged.notes.push_back("trend filter matched no rows in recipe '" + recipe.name + "'");
            continue;
        }
        const TrendReport rep = trend_check(sub, t.expected);
        merged.pass = merged.pass && rep.pass;
        merged.notes.insert(merged.notes.end(), rep.notes.begin(), rep.notes.end());
    }
    return merged;
}

}  // namespace secrecy
