#pragma once
#include <cmath>
#include <string>

#include "secrecy/errors.hpp"
#include "secrecy/params.hpp"
#include "secrecy/psi.hpp"
#include "secrecy/quadrature.hpp"
#include "secrecy/special.hpp"

namespace secrecy {

enum class Kind { Exact, Approximation, UpperBound, LowerBound };
enum class Method {
    LaplaceIntegral,
    BesselAlpha2,
    Hyp2F1,
    ClosedAlpha2,
    ClosedAlpha4,
    PsiBound,
    E1Bound,
    OmegaApprox,
    LargeKBound,
};

inline const char* to_string(Kind k) {
    switch (k) {
        case Kind::Exact: return "Exact";
        case Kind::Approximation: return "Approximation";
        case Kind::UpperBound: return "UpperBound";
        case Kind::LowerBound: return "LowerBound";
    }
    return "?";
}

inline const char* to_string(Method m) {
    switch (m) {
        case Method::LaplaceIntegral: return "LaplaceIntegral";
        case Method::BesselAlpha2: return "BesselAlpha2";
        case Method::Hyp2F1: return "Hyp2F1";
        case Method::ClosedAlpha2: return "ClosedAlpha2";
        case Method::ClosedAlpha4: return "ClosedAlpha4";
        case Method::PsiBound: return "PsiBound";
        case Method::E1Bound: return "E1Bound";
        case Method::OmegaApprox: return "OmegaApprox";
        case Method::LargeKBound: return "LargeKBound";
    }
    return "?";
}

struct AnalyticResult {
    double value;      // clamped into [0,1]
    double raw_value;  // as computed; bounds/approximations may leave [0,1]
    bool clamped;
    Kind kind;
    Method method;
};

namespace detail {

inline AnalyticResult finish(double raw, Kind kind, Method method) {
    double v = raw;
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    return {v, raw, v != raw, kind, method};
}

// exact up to C(64,32); every intermediate product is itself a binomial
inline long double binom_ld(int n, int k) {
    if (k < 0 || k > n) return 0.0L;
    if (k > n - k) k = n - k;
    long double r = 1.0L;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline void require_scenario(const ValidatedParams& vp, Duplex d, EdModel m, const char* fn) {
    if (vp->duplex != d || vp->ed_model != m)
        throw DomainError(std::string(fn) + " requires scenario " + to_string(Scenario{d, m}) +
                          ", got " + to_string(vp.scenario()));
}

inline void require_sum_k(int k) {
    if (k > 64)
        throw DomainError("alternating-sum evaluator limited to k_antennas <= 64; "
                          "larger arrays lose all precision to cancellation");
}

// Kahan-compensated alternating sum accumulator in extended precision
struct CompensatedSum {
    long double sum = 0.0L, comp = 0.0L;
    void add(long double x) {
        const long double y = x - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    double value() const { return static_cast<double>(sum); }
};

}  // namespace detail

// J(B, c) = int_0^inf exp(-s - B s^-c) ds
inline double laplace_j(double B, double c, const QuadratureSpec& spec = {}) {
    if (!(B >= 0) || !(c > 0)) throw DomainError("laplace_j requires B >= 0, c > 0");
    if (B == 0.0) return 1.0;
    auto f = [B, c](double s) { return std::exp(-s - B / std::pow(s, c)); };
    return integrate_semi_infinite(f, spec).value;
}

// ---------------------------------------------------------------------------
// half-duplex, independent eavesdroppers (large-region approximation)
// ---------------------------------------------------------------------------
inline AnalyticResult sop_hd_independent(const ValidatedParams& vp,
                                         const QuadratureSpec& spec = {}) {
    detail::require_scenario(vp, Duplex::HalfDuplex, EdModel::Independent, "sop_hd_independent");
    const int K = vp->k_antennas;
    const double c = 2.0 / vp->alpha;
    const double b = kPi * vp->rho_e * gamma_fn(1.0 + c) * std::pow(vp->beta, c);
    const double B1 = b * vp->d_bu * vp->d_bu;
    // small arrays: alternating binomial sum over per-antenna integrals
    if (K <= 30) {
        const Method method = (vp->alpha == 2.0) ? Method::BesselAlpha2 : Method::LaplaceIntegral;
        if (vp->rho_e == 0.0) return detail::finish(0.0, Kind::Approximation, method);
        detail::CompensatedSum acc;
        for (int k = 1; k <= K; ++k) {
            const double Bk = B1 * std::pow(double(k), c);
            double jk;
            if (vp->alpha == 2.0) {
                const double rt = 2.0 * std::sqrt(Bk);
                jk = rt * bessel_k1(rt);
            } else {
                jk = laplace_j(Bk, c, spec);
            }
            const long double term = detail::binom_ld(K, k) * static_cast<long double>(jk);
            acc.add((k % 2 == 1) ? term : -term);
        }
        return detail::finish(1.0 - acc.value(), Kind::Approximation, method);
    }
    // large arrays: integrate against the max-gain density directly, which has
    // no alternating terms and therefore no cancellation
    if (vp->rho_e == 0.0) return detail::finish(0.0, Kind::Approximation, Method::LaplaceIntegral);
    auto f = [K, B1, c](double s) {
        const double x = -std::expm1(-s);  // 1 - e^{-s} without rounding loss
        return K * std::exp(-s) * std::pow(x, K - 1) * std::exp(-B1 / std::pow(s, c));
    };
    const double cov = integrate_semi_infinite(f, spec).value;
    return detail::finish(1.0 - cov, Kind::Approximation, Method::LaplaceIntegral);
}

// large-K leading-order lower bound for the same scenario
inline AnalyticResult sop_hd_independent_lower_bound(const ValidatedParams& vp) {
    detail::require_scenario(vp, Duplex::HalfDuplex, EdModel::Independent,
                             "sop_hd_independent_lower_bound");
    const int K = vp->k_antennas;
    if (K < 2) throw DomainError("lower bound needs k_antennas >= 2 (ln K must be positive)");
    const double c = 2.0 / vp->alpha;
    const double raw = kPi * vp->rho_e * vp->d_bu * vp->d_bu * std::pow(vp->beta, c) *
                       gamma_fn(1.0 + c) /
                       (2.71828182845904523536 * std::pow(std::log(double(K)), c));
    return detail::finish(raw, Kind::LowerBound, Method::LargeKBound);
}

// ---------------------------------------------------------------------------
// half-duplex, colluding eavesdroppers (exact)
// ---------------------------------------------------------------------------
inline AnalyticResult sop_hd_colluding(const ValidatedParams& vp) {
    detail::require_scenario(vp, Duplex::HalfDuplex, EdModel::Colluding, "sop_hd_colluding");
    detail::require_sum_k(vp->k_antennas);
    const double alpha = vp->alpha, d = vp->d_bu, R = vp->radius;
    if (alpha < 2.0)
        throw DomainError("sop_hd_colluding requires alpha >= 2 (hypergeometric parameter)");
    Method method = Method::Hyp2F1;
    if (alpha == 2.0) method = Method::ClosedAlpha2;
    if (alpha == 4.0) method = Method::ClosedAlpha4;
    detail::CompensatedSum acc;
    for (int k = 1; k <= vp->k_antennas; ++k) {
        double tk;
        if (alpha == 2.0) {
            const double z = R * R / (k * vp->beta * d * d);
            tk = std::exp(-kPi * vp->rho_e * vp->beta * d * d * k * std::log1p(z));
        } else if (alpha == 4.0) {
            const double m = d * d * std::sqrt(vp->beta * k);
            tk = std::exp(-kPi * vp->rho_e * m * std::atan(R * R / m));
        } else {
            const double z = std::pow(R, alpha) / (k * vp->beta * std::pow(d, alpha));
            const double F = hyp2f1_special(2.0 / alpha, z);
            tk = std::exp(-kPi * R * R * vp->rho_e * F);
        }
        const long double term = detail::binom_ld(vp->k_antennas, k) * static_cast<long double>(tk);
        acc.add((k % 2 == 1) ? term : -term);
    }
    return detail::finish(1.0 - acc.value(), Kind::Exact, method);
}

// ---------------------------------------------------------------------------
// full-duplex, independent eavesdroppers (upper bound)
// ---------------------------------------------------------------------------
inline AnalyticResult sop_fd_independent_bound(const ValidatedParams& vp,
                                               const QuadratureSpec& spec = {}) {
    detail::require_scenario(vp, Duplex::FullDuplex, EdModel::Independent,
                             "sop_fd_independent_bound");
    detail::require_sum_k(vp->k_antennas);
    const int K = vp->k_antennas;
    const double alpha = vp->alpha, d = vp->d_bu, R = vp->radius;
    const double rho = vp->rho_e, beta = vp->beta;
    const double lam = vp.lambda_lin();
    const double Q = vp.pu_lin() / std::pow(d, alpha);
    const double delta = d / R;

    auto sum_with = [&](auto&& psi_of_y) {
        detail::CompensatedSum acc;
        for (int k = 1; k <= K; ++k) {
            auto f = [&, k](double s) {
                const double y = Q * s / (k * beta);
                const double w = (1.0 + lam * (1.0 + s)) / ((1.0 + s * lam) * (1.0 + s * lam));
                return w * std::exp(rho * R * R * (psi_of_y(y) - kPi) - s);
            };
            const double tk = integrate_semi_infinite(f, spec).value;
            const long double term = detail::binom_ld(K, k) * static_cast<long double>(tk);
            acc.add((k % 2 == 1) ? term : -term);
        }
        return 1.0 - acc.value();
    };

    double raw;
    if (alpha == 2.0) {
        raw = sum_with([delta](double y) { return psi_alpha2_closed(y, delta); });
    } else {
        // tabulate the kernel over the integrand's effective support and refine
        // the grid until the result stops moving
        const double y_hi = Q * 60.0 / beta;          // beyond s=60 the e^{-s} weight is dust
        const double y_lo = Q * 1e-5 / (K * beta);    // below this the linear ramp is exact enough
        int n = 64;
        PsiCache cache(alpha, delta, y_lo, y_hi, n, spec);
        raw = sum_with([&cache](double y) { return cache(y); });
        while (n < 512) {
            n *= 2;
            PsiCache finer(alpha, delta, y_lo, y_hi, n, spec);
            const double refined = sum_with([&finer](double y) { return finer(y); });
            const bool settled = std::abs(refined - raw) <= std::max(1e-9, 1e-8 * std::abs(refined));
            raw = refined;
            if (settled) break;
        }
    }
    return detail::finish(raw, Kind::UpperBound, Method::PsiBound);
}

// ---------------------------------------------------------------------------
// full-duplex, colluding eavesdroppers (upper bound)
// ---------------------------------------------------------------------------
namespace detail {

// int_0^R int_0^2pi A_k e^{A_k} E1(A_k) r dtheta dr for one term of the bound
inline double fd_ce_ring_integral(const ValidatedParams& vp, int k, const QuadratureSpec& spec) {
    const double alpha = vp->alpha, d = vp->d_bu;
    const double coef = ((1.0 + vp.lambda_lin()) * k * vp->beta / vp.pu_lin()) * std::pow(d, alpha);
    auto f = [&](double r, double th) {
        const double s = std::sin(0.5 * th);
        const double due2 = (r - d) * (r - d) + 4.0 * r * d * s * s;
        const double a = coef * std::pow(due2 / (r * r), 0.5 * alpha);
        if (!(a < 1e12)) return r;  // a*e^a*E1(a) -> 1 (also covers r -> 0)
        if (a < 1e-14) return (a > 0 ? a * (-std::log(a) - kEulerGamma) : 0.0) * r;
        return a * exp_scaled_e1(a) * r;
    };
    return integrate_2d_polar(f, 0.0, vp->radius, spec).value;
}

}  // namespace detail

inline AnalyticResult sop_fd_colluding_bound(const ValidatedParams& vp,
                                             const QuadratureSpec& spec = {}) {
    detail::require_scenario(vp, Duplex::FullDuplex, EdModel::Colluding, "sop_fd_colluding_bound");
    detail::require_sum_k(vp->k_antennas);
    detail::CompensatedSum acc;
    for (int k = 1; k <= vp->k_antennas; ++k) {
        const double ik = detail::fd_ce_ring_integral(vp, k, spec);
        const long double term =
            detail::binom_ld(vp->k_antennas, k) * static_cast<long double>(std::exp(-vp->rho_e * ik));
        acc.add((k % 2 == 1) ? -term : term);  // (-1)^k
    }
    return detail::finish(1.0 + acc.value(), Kind::UpperBound, Method::E1Bound);
}

// ---------------------------------------------------------------------------
// full-duplex colluding closed-form approximation (alpha = 2 only)
// ---------------------------------------------------------------------------

// Closed form of the outer-annulus integral
//   int_varrho^R int_0^{2pi} A (A+1) (A - ln A - kappa) r dtheta dr,
//   A = a0 * d_ue^2 / r^2,  d_ue^2 = r^2 + d^2 - 2 r d cos(theta),
// obtained by integrating the theta-moments term by term. The grouping below
// keeps every coefficient auditable against that derivation. beta is part of
// the interface but enters only through a0.
inline double omega_term(double beta, double d_bu, double R, double a0, double varrho) {
    (void)beta;
    if (!(a0 > 0) || !(d_bu > 0) || !(R > 0)) throw DomainError("omega_term requires positive a0, d_bu, R");
    if (!(varrho > 0) || !(varrho < R)) throw DomainError("omega_term requires 0 < varrho < R");
    const double kap = kEulerGamma;
    const double d = d_bu, vr = varrho;
    const double d2 = d * d, d4 = d2 * d2, d6 = d4 * d2;
    const double v2 = vr * vr, v4 = v2 * v2;
    const double R2 = R * R, R4 = R2 * R2;
    const double a2 = a0 * a0, a3 = a2 * a0;
    const double LR = std::log(R), Ld = std::log(d), Lv = std::log(vr), LA = std::log(a0);

    double out = -2.0 * kPi * a0 * d2 * (4.0 * a0 + 1.0) * (LA * (LR - Lv) + (Ld - Lv) * (Ld - Lv));
    out += LR * (2.0 * kPi * a0 * d2 * (9.0 * a2 - 4.0 * a0 * kap - kap - 2.0));
    out += Ld * (2.0 * kPi * a0 * (-a0 * d4 + a0 * v4 + 2.0 * d2 * v2 + v4) / v2);
    out += Lv * (2.0 * kPi * a0 *
                 (-9.0 * a2 * d2 * v2 + a0 * d4 + 4.0 * a0 * d2 * kap * v2 - a0 * v4 +
                  d2 * kap * v2 - v4) /
                 v2);
    out += LA * (-kPi * a0 * (R2 - v2) * (a0 * R2 * v2 + a0 * d4 + R2 * v2) / (R2 * v2));
    out += kPi * a3 * R2 + kPi * a3 * d6 / (2.0 * v4) + 9.0 * kPi * a3 * d4 / v2 - kPi * a3 * v2 -
           9.0 * kPi * a3 * d4 / R2 - kPi * a3 * d6 / (2.0 * R4) - kPi * a2 * R2 * kap +
           kPi * a2 * R2 - kPi * a2 * d4 * kap / v2 + 2.0 * kPi * a2 * d4 / v2 -
           8.0 * kPi * a2 * d2 + kPi * a2 * kap * v2 + 3.0 * kPi * a2 * v2 +
           kPi * a2 * d4 * kap / R2 + 2.0 * kPi * a2 * d4 / R2 - kPi * a0 * R2 * kap -
           3.0 * kPi * a0 * d2 + kPi * a0 * kap * v2 + 3.0 * kPi * a0 * v2;
    return out;
}

inline AnalyticResult sop_fd_colluding_approx_alpha2(const ValidatedParams& vp,
                                                     double varrho = 1.0) {
    detail::require_scenario(vp, Duplex::FullDuplex, EdModel::Colluding,
                             "sop_fd_colluding_approx_alpha2");
    detail::require_sum_k(vp->k_antennas);
    if (vp->alpha != 2.0) throw DomainError("sop_fd_colluding_approx_alpha2 requires alpha = 2");
    if (!(varrho > 0) || varrho >= vp->d_bu || varrho >= vp->radius)
        throw DomainError("varrho must lie in (0, min(radius, d_bu))");
    const double d = vp->d_bu, R = vp->radius;
    const double lam = vp.lambda_lin(), pu = vp.pu_lin();
    const double x2 = (varrho / d) * (varrho / d);
    detail::CompensatedSum acc;
    for (int k = 1; k <= vp->k_antennas; ++k) {
        const double a0 = (1.0 + lam) * k * vp->beta * d * d / pu;
        // inner disk, exact at alpha=2: pi*vr^2 - (pi d^2/a0)(-ln(1-x^2) - x^2)
        const double inner =
            kPi * varrho * varrho - (kPi * d * d / a0) * (-std::log1p(-x2) - x2);
        const double om = omega_term(vp->beta, d, R, a0, varrho);
        const long double term = detail::binom_ld(vp->k_antennas, k) *
                                 static_cast<long double>(std::exp(-vp->rho_e * (inner + om)));
        acc.add((k % 2 == 1) ? -term : term);  // (-1)^k
    }
    return detail::finish(1.0 + acc.value(), Kind::Approximation, Method::OmegaApprox);
}

// principal evaluator for each scenario (exact/approximate for HD, upper bound for FD)
inline AnalyticResult sop_analytic(const ValidatedParams& vp, const QuadratureSpec& spec = {}) {
    if (vp->duplex == Duplex::HalfDuplex)
        return vp->ed_model == EdModel::Independent ? sop_hd_independent(vp, spec)
                                                    : sop_hd_colluding(vp);
    return vp->ed_model == EdModel::Independent ? sop_fd_independent_bound(vp, spec)
                                                : sop_fd_colluding_bound(vp, spec);
}

}  // namespace secrecy
