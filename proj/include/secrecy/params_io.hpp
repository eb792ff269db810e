#pragma once
#include <json.hpp>

#include <set>
#include <string>

#include "secrecy/params.hpp"

namespace secrecy {

inline nlohmann::json to_json(const SystemParams& p) {
    return nlohmann::json{
        {"k_antennas", p.k_antennas},
        {"rho_e", p.rho_e},
        {"radius", p.radius},
        {"d_bu", p.d_bu},
        {"alpha", p.alpha},
        {"beta", p.beta},
        {"epsilon", p.epsilon},
        {"pb_over_n0_db", p.pb_over_n0_db},
        {"pu_over_n0_db", p.pu_over_n0_db},
        {"lambda_uu_db", p.lambda_uu_db},
        {"duplex", p.duplex == Duplex::HalfDuplex ? "hd" : "fd"},
        {"ed_model", p.ed_model == EdModel::Independent ? "independent" : "colluding"},
        {"ed_noise", p.ed_noise},
    };
}

// Missing keys keep defaults from `base`; unknown keys are an error so that a
// typo in a config file cannot silently fall back to a default.
inline SystemParams params_from_json(const nlohmann::json& j, SystemParams base = {}) {
    static const std::set<std::string> known = {
        "k_antennas", "rho_e", "radius", "d_bu", "alpha", "beta", "epsilon",
        "pb_over_n0_db", "pu_over_n0_db", "lambda_uu_db", "duplex", "ed_model", "ed_noise"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw DomainError("unknown parameter key '" + it.key() + "' in config");
    SystemParams p = base;
    if (j.contains("k_antennas")) p.k_antennas = j.at("k_antennas").get<int>();
    if (j.contains("rho_e")) p.rho_e = j.at("rho_e").get<double>();
    if (j.contains("radius")) p.radius = j.at("radius").get<double>();
    if (j.contains("d_bu")) p.d_bu = j.at("d_bu").get<double>();
    if (j.contains("alpha")) p.alpha = j.at("alpha").get<double>();
    if (j.contains("beta")) {
        p.beta = j.at("beta").get<double>();
        if (!j.contains("epsilon")) p.epsilon = std::log2(p.beta);  // keep the pair consistent
    }
    if (j.contains("epsilon")) {
        p.epsilon = j.at("epsilon").get<double>();
        if (!j.contains("beta")) p.beta = std::exp2(p.epsilon);
    }
    if (j.contains("pb_over_n0_db")) p.pb_over_n0_db = j.at("pb_over_n0_db").get<double>();
    if (j.contains("pu_over_n0_db")) p.pu_over_n0_db = j.at("pu_over_n0_db").get<double>();
    if (j.contains("lambda_uu_db")) p.lambda_uu_db = j.at("lambda_uu_db").get<double>();
    if (j.contains("duplex")) p.duplex = parse_duplex(j.at("duplex").get<std::string>());
    if (j.contains("ed_model")) p.ed_model = parse_ed_model(j.at("ed_model").get<std::string>());
    if (j.contains("ed_noise")) p.ed_noise = j.at("ed_noise").get<bool>();
    return p;
}

}  // namespace secrecy
