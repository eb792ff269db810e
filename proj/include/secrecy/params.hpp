#pragma once
#include <cmath>
#include <cstdint>

#include "secrecy/errors.hpp"
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace secrecy {

enum class Duplex { HalfDuplex, FullDuplex };
enum class EdModel { Independent, Colluding };

inline const char* to_string(Duplex d) {
    return d == Duplex::HalfDuplex ? "HalfDuplex" : "FullDuplex";
}
inline const char* to_string(EdModel m) {
    return m == EdModel::Independent ? "Independent" : "Colluding";
}

struct Scenario {
    Duplex duplex = Duplex::HalfDuplex;
    EdModel ed_model = EdModel::Independent;
    friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline std::string to_string(Scenario s) {
    return std::string(to_string(s.duplex)) + "/" + to_string(s.ed_model);
}

inline Duplex parse_duplex(const std::string& s) {
    if (s == "hd" || s == "HalfDuplex") return Duplex::HalfDuplex;
    if (s == "fd" || s == "FullDuplex") return Duplex::FullDuplex;
    throw DomainError("unknown duplex mode '" + s + "' (expected hd or fd)");
}

inline EdModel parse_ed_model(const std::string& s) {
    if (s == "independent" || s == "Independent") return EdModel::Independent;
    if (s == "colluding" || s == "Colluding") return EdModel::Colluding;
    throw DomainError("unknown eavesdropper model '" + s + "' (expected independent or colluding)");
}

// dB -> linear power ratio
inline double linear_power(double db) { return std::pow(10.0, db / 10.0); }

// All noise powers are normalized to 1, so pb/pu/lambda are ratios to noise.
struct SystemParams {
    int k_antennas = 1;           // transmit antennas available for selection
    double rho_e = 0.001;         // eavesdropper intensity [1/m^2]
    double radius = 50.0;         // eavesdropper region radius [m]
    double d_bu = 5.0;            // base-station-to-user distance [m]
    double alpha = 2.0;           // path-loss exponent
    double beta = 1.0;            // SNR-ratio outage threshold, beta = 2^epsilon
    double epsilon = 0.0;         // target secrecy rate [bit/s/Hz]
    double pb_over_n0_db = 50.0;  // BS transmit power over noise [dB]
    double pu_over_n0_db = 50.0;  // user jamming power over noise [dB], full-duplex only
    double lambda_uu_db = 0.0;    // mean residual self-interference over noise [dB]
    Duplex duplex = Duplex::HalfDuplex;
    EdModel ed_model = EdModel::Independent;
    bool ed_noise = true;         // eavesdroppers see thermal noise in addition to jamming

    Scenario scenario() const { return {duplex, ed_model}; }
    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

struct ParamError {
    std::string code;     // NonPositive, InconsistentBetaEpsilon, GeometryInvalid, ...
    std::string field;    // offending field name, empty when cross-field
    std::string message;  // human-readable detail
};

class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(std::vector<ParamError> errs)
        : std::runtime_error(render(errs)), errors_(std::move(errs)) {}
    const std::vector<ParamError>& errors() const { return errors_; }

  private:
    static std::string render(const std::vector<ParamError>& errs) {
        std::ostringstream os;
        os << "invalid parameters (" << errs.size() << " problem" << (errs.size() == 1 ? "" : "s")
           << "):";
        for (const auto& e : errs) os << "\n  [" << e.code << "] " << e.field << ": " << e.message;
        return os.str();
    }
    std::vector<ParamError> errors_;
};

// Collects every violation instead of stopping at the first one.
inline std::vector<ParamError> check(const SystemParams& p) {
    std::vector<ParamError> errs;
    auto bad = [&](const char* code, const char* field, const std::string& msg) {
        errs.push_back({code, field, msg});
    };
    auto num = [](double v) {
        std::ostringstream os;
        os.precision(17);
        os << v;
        return os.str();
    };
    if (p.k_antennas < 1) bad("NonPositive", "k_antennas", "need at least 1 antenna, got " + std::to_string(p.k_antennas));
    if (!(p.rho_e >= 0) || !std::isfinite(p.rho_e)) bad("NonPositive", "rho_e", "intensity must be finite and >= 0, got " + num(p.rho_e));
    if (!(p.radius > 0) || !std::isfinite(p.radius)) bad("NonPositive", "radius", "region radius must be finite and > 0, got " + num(p.radius));
    if (!(p.d_bu > 0) || !std::isfinite(p.d_bu)) bad("NonPositive", "d_bu", "link distance must be finite and > 0, got " + num(p.d_bu));
    if (!(p.alpha > 0) || !std::isfinite(p.alpha)) bad("NonPositive", "alpha", "path-loss exponent must be finite and > 0, got " + num(p.alpha));
    if (!(p.beta >= 1) || !std::isfinite(p.beta)) bad("NonPositive", "beta", "threshold must be finite and >= 1, got " + num(p.beta));
    if (!(p.epsilon >= 0) || !std::isfinite(p.epsilon)) bad("NonPositive", "epsilon", "secrecy rate must be finite and >= 0, got " + num(p.epsilon));
    if (!std::isfinite(p.pb_over_n0_db)) bad("NonPositive", "pb_over_n0_db", "must be finite, got " + num(p.pb_over_n0_db));
    if (!std::isfinite(p.pu_over_n0_db)) bad("NonPositive", "pu_over_n0_db", "must be finite, got " + num(p.pu_over_n0_db));
    if (!std::isfinite(p.lambda_uu_db)) bad("NonPositive", "lambda_uu_db", "must be finite, got " + num(p.lambda_uu_db));
    // beta and epsilon describe the same threshold; both are stored, so they must agree
    if (p.beta >= 1 && p.epsilon >= 0 && std::isfinite(p.beta) && std::isfinite(p.epsilon)) {
        double implied = std::exp2(p.epsilon);
        if (std::abs(p.beta - implied) > 1e-12 * std::max(1.0, std::abs(p.beta)))
            errs.push_back({"InconsistentBetaEpsilon", "beta",
                            "beta=" + num(p.beta) + " but 2^epsilon=" + num(implied)});
    }
    if (p.d_bu > 0 && p.radius > 0 && !(p.d_bu < p.radius))
        errs.push_back({"GeometryInvalid", "d_bu",
                        "user at d_bu=" + num(p.d_bu) + " must lie inside the eavesdropper region radius=" + num(p.radius)});
    return errs;
}

// Immutable view over parameters that passed check(); carries linear-scale powers.
class ValidatedParams {
  public:
    const SystemParams& raw() const { return p_; }
    const SystemParams* operator->() const { return &p_; }
    double pb_lin() const { return pb_lin_; }
    double pu_lin() const { return pu_lin_; }
    double lambda_lin() const { return lambda_lin_; }
    Scenario scenario() const { return p_.scenario(); }

  private:
    friend ValidatedParams validate(const SystemParams&);
    explicit ValidatedParams(const SystemParams& p)
        : p_(p),
          pb_lin_(linear_power(p.pb_over_n0_db)),
          pu_lin_(linear_power(p.pu_over_n0_db)),
          lambda_lin_(linear_power(p.lambda_uu_db)) {}
    SystemParams p_;
    double pb_lin_, pu_lin_, lambda_lin_;
};

inline ValidatedParams validate(const SystemParams& p) {
    auto errs = check(p);
    if (!errs.empty()) throw ValidationError(std::move(errs));
    return ValidatedParams(p);
}

// Reduced rational p/q with q <= 100 matching alpha to 1e-12 relative;
// some closed-form pathways only exist for rational exponents.
inline std::optional<std::pair<int, int>> alpha_rational(double alpha, int max_den = 100) {
    if (!(alpha > 0) || !std::isfinite(alpha)) return std::nullopt;
    for (int q = 1; q <= max_den; ++q) {
        double pd = alpha * q;
        if (pd > 1e9) return std::nullopt;
        int p = static_cast<int>(std::llround(pd));
        if (p < 1) continue;
        if (std::abs(alpha - double(p) / q) <= 1e-12 * std::max(1.0, alpha)) {
            int g = std::gcd(p, q);
            return std::make_pair(p / g, q / g);
        }
    }
    return std::nullopt;
}

}  // namespace secrecy
