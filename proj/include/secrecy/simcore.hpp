#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include "secrecy/errors.hpp"
#include "secrecy/params.hpp"
#include "secrecy/rng.hpp"
#include "secrecy/special.hpp"

namespace secrecy {

enum class OutageDef { ExactCapacity, SnrRatio };

inline const char* to_string(OutageDef d) {
    return d == OutageDef::ExactCapacity ? "ExactCapacity" : "SnrRatio";
}

struct PolarPoint {
    double r, theta;  // relative to the base station at the origin
};

struct EdRealization {
    std::vector<PolarPoint> points;
};

struct TrialDraw {
    std::vector<double> ue_gains;     // K fades on the BS->UE links
    std::vector<double> ed_bs_gains;  // per-ED fade on the BS->ED link
    std::vector<double> ed_ue_gains;  // per-ED fade on the UE->ED jamming link (FD)
    double self_interference = 0.0;   // residual self-interference to noise (FD)
};

struct SopEstimate {
    double p_hat;
    double ci_low, ci_high;  // 95% Wilson interval
    std::uint64_t n_trials;
    std::uint64_t seed;
    OutageDef outage_def;
};

inline constexpr double kZ95 = 1.959963984540054;  // two-sided 95% normal quantile

struct WilsonInterval {
    double p_hat, low, high;
};

inline WilsonInterval wilson_ci(std::uint64_t successes, std::uint64_t n) {
    if (n == 0) throw EmptyInput("wilson_ci needs n >= 1");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = kZ95 * kZ95;
    const double den = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / den;
    const double half = kZ95 * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / den;
    return {p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

// N ~ Poisson(rho pi R^2), then i.i.d. uniform positions on the disk
inline EdRealization sample_ppp_disk(double rho_e, double R, const TrialRng& rng) {
    if (!(rho_e >= 0) || !(R > 0)) throw DomainError("sample_ppp_disk requires rho_e >= 0, R > 0");
    EdRealization out;
    if (rho_e == 0.0) return out;
    RngStream count = rng.stream(kCountStream);
    const int n = poisson_draw(count, rho_e * kPi * R * R);
    out.points.reserve(static_cast<std::size_t>(n));
    RngStream pos = rng.stream(kPositionStream);
    for (int i = 0; i < n; ++i) {
        const double u = pos.next_uniform01();
        const double v = pos.next_uniform01();
        out.points.push_back({R * std::sqrt(u), 2.0 * kPi * v});
    }
    return out;
}

struct TasChoice {
    int index;
    double max_gain;
};

// argmax of the UE-link fades; ties (a probability-zero event) take the lowest index
inline TasChoice tas_select(const std::vector<double>& ue_gains) {
    if (ue_gains.empty()) throw EmptyInput("tas_select needs at least one gain");
    int best = 0;
    for (int i = 1; i < static_cast<int>(ue_gains.size()); ++i)
        if (ue_gains[i] > ue_gains[best]) best = i;
    return {best, ue_gains[best]};
}

inline TrialDraw make_trial_draw(int k_antennas, std::size_t n_eds, bool full_duplex,
                                 double lambda_lin, const TrialRng& rng) {
    TrialDraw d;
    RngStream ue = rng.stream(kUeGainStream);
    d.ue_gains.resize(static_cast<std::size_t>(k_antennas));
    for (auto& g : d.ue_gains) g = ue.next_exponential(1.0);
    RngStream eb = rng.stream(kEdBsGainStream);
    d.ed_bs_gains.resize(n_eds);
    for (auto& g : d.ed_bs_gains) g = eb.next_exponential(1.0);
    if (full_duplex) {
        RngStream eu = rng.stream(kEdUeGainStream);
        d.ed_ue_gains.resize(n_eds);
        for (auto& g : d.ed_ue_gains) g = eu.next_exponential(1.0);
        RngStream si = rng.stream(kSelfInterferenceStream);
        d.self_interference = si.next_exponential(lambda_lin);
    }
    return d;
}

// One outage indicator. lambda_uu parameterizes the residual self-interference
// to noise ratio directly (cancellation quality), so the user SINR denominator
// is S + sigma^2 with S ~ Exp(lambda_uu); the jamming power P_U appears only on
// the eavesdropper side.
inline bool trial_outage(const ValidatedParams& vp, const EdRealization& eds,
                         const TrialDraw& draw, OutageDef def) {
    const bool fd = vp->duplex == Duplex::FullDuplex;
    const double alpha = vp->alpha, d = vp->d_bu;
    const double pb = vp.pb_lin();
    const TasChoice tas = tas_select(draw.ue_gains);
    const double gamma_u = pb * tas.max_gain * std::pow(d, -alpha) /
                           (fd ? draw.self_interference + 1.0 : 1.0);
    const double sigma_e = vp->ed_noise ? 1.0 : 0.0;
    const double pu = vp.pu_lin();
    double gamma_star = 0.0;
    for (std::size_t i = 0; i < eds.points.size(); ++i) {
        const double r = eds.points[i].r, th = eds.points[i].theta;
        double denom = sigma_e;
        if (fd) {
            const double s = std::sin(0.5 * th);
            const double due2 = (r - d) * (r - d) + 4.0 * r * d * s * s;  // law of cosines
            denom += pu * draw.ed_ue_gains[i] * std::pow(due2, -0.5 * alpha);
        }
        const double sinr = pb * draw.ed_bs_gains[i] * std::pow(r, -alpha) / denom;
        if (vp->ed_model == EdModel::Independent)
            gamma_star = std::max(gamma_star, sinr);
        else
            gamma_star += sinr;
    }
    if (def == OutageDef::SnrRatio) {
        if (gamma_star == 0.0) return false;  // ratio is +inf
        return gamma_u < vp->beta * gamma_star;
    }
    // capacity difference below target rate: log2(1+gu) - log2(1+g*) < eps,
    // evaluated as (1+gu) < beta (1+g*) since beta = 2^eps
    return 1.0 + gamma_u < vp->beta * (1.0 + gamma_star);
}

namespace detail {

// single trial with reusable buffers; the only code path used by estimate_sop
inline bool run_trial(const ValidatedParams& vp, std::uint64_t seed, std::uint64_t trial,
                      OutageDef def, EdRealization& eds, TrialDraw& draw) {
    const TrialRng rng(seed, trial);
    eds = sample_ppp_disk(vp->rho_e, vp->radius, rng);
    draw = make_trial_draw(vp->k_antennas, eds.points.size(),
                           vp->duplex == Duplex::FullDuplex, vp.lambda_lin(), rng);
    return trial_outage(vp, eds, draw, def);
}

}  // namespace detail

// Monte Carlo SOP estimate. The scenario argument overrides the duplex and
// eavesdropper-model fields of params. Counter-based per-trial streams plus an
// order-independent integer tally make the result identical under any
// worker count.
inline SopEstimate estimate_sop(const ValidatedParams& vp, Scenario scenario,
                                std::uint64_t n_trials, std::uint64_t seed,
                                OutageDef def = OutageDef::ExactCapacity, int threads = 0) {
    if (n_trials < 1) throw DomainError("estimate_sop requires n_trials >= 1");
    SystemParams p = vp.raw();
    p.duplex = scenario.duplex;
    p.ed_model = scenario.ed_model;
    const ValidatedParams run = validate(p);

    if (threads <= 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        threads = hc ? static_cast<int>(hc) : 1;
    }
    const std::uint64_t want = std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), n_trials);
    const int n_workers = static_cast<int>(want);

    std::vector<std::uint64_t> tallies(static_cast<std::size_t>(n_workers), 0);
    auto work = [&](int w) {
        const std::uint64_t lo = n_trials * w / n_workers;
        const std::uint64_t hi = n_trials * (w + 1) / n_workers;
        EdRealization eds;
        TrialDraw draw;
        std::uint64_t count = 0;
        for (std::uint64_t t = lo; t < hi; ++t)
            if (detail::run_trial(run, seed, t, def, eds, draw)) ++count;
        tallies[static_cast<std::size_t>(w)] = count;
    };
    if (n_workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    std::uint64_t outages = 0;
    for (auto t : tallies) outages += t;  // fixed summation order
    const WilsonInterval ci = wilson_ci(outages, n_trials);
    return {ci.p_hat, ci.low, ci.high, n_trials, seed, def};
}

}  // namespace secrecy
