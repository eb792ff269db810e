#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "secrecy/errors.hpp"

namespace secrecy {

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
};

struct IntegralEstimate {
    double value = 0.0;
    double error = 0.0;  // conservative bound on |value - true integral|
};

namespace detail {

// 15-point Kronrod nodes/weights with embedded 7-point Gauss rule
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double value, error;
};

// One Gauss-Kronrod pass; error model follows the classic QUADPACK scaling,
// which deliberately overestimates so the reported bound stays trustworthy.
template <class F>
Panel gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double f1[7], f2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        f1[j] = f(c - dx);
        f2[j] = f(c + dx);
        resk += kWgk[j] * (f1[j] + f2[j]);
        if (j % 2 == 1) resg += kWg[(j - 1) / 2] * (f1[j] + f2[j]);
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));
    resasc *= std::abs(h);
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    return {resk * h, err};
}

struct Segment {
    double a, b, value, error;
};

}  // namespace detail

template <class F>
IntegralEstimate integrate_1d(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    if (a == b) return {0.0, 0.0};
    std::vector<detail::Segment> segs;
    segs.reserve(64);
    auto first = detail::gk15(f, a, b);
    segs.push_back({a, b, first.value, first.error});
    double total_v = first.value, total_e = first.error;
    int used = 1;
    if (!std::isfinite(total_v))
        throw NoConvergence("integrand produced non-finite values", total_v, total_e);
    while (total_e > std::max(spec.abs_tol, spec.rel_tol * std::abs(total_v))) {
        if (used >= spec.max_subdivisions)
            throw NoConvergence("quadrature hit subdivision budget before tolerance", total_v,
                                total_e);
        std::size_t wi = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].error > segs[wi].error) wi = i;
        const detail::Segment s = segs[wi];
        const double m = 0.5 * (s.a + s.b);
        if (m == s.a || m == s.b)
            throw NoConvergence("interval shrank to machine precision", total_v, total_e);
        auto left = detail::gk15(f, s.a, m);
        auto right = detail::gk15(f, m, s.b);
        if (!std::isfinite(left.value) || !std::isfinite(right.value))
            throw NoConvergence("integrand produced non-finite values", total_v, total_e);
        total_v += left.value + right.value - s.value;
        total_e += left.error + right.error - s.error;
        segs[wi] = {s.a, m, left.value, left.error};
        segs.push_back({m, s.b, right.value, right.error});
        ++used;
    }
    // re-sum in deterministic segment order to shed incremental rounding drift
    total_v = 0.0;
    total_e = 0.0;
    for (const auto& s : segs) {
        total_v += s.value;
        total_e += s.error;
    }
    return {total_v, total_e};
}

// integral over [0, inf) via x = t/(1-t); integrand must decay at infinity
template <class F>
IntegralEstimate integrate_semi_infinite(F&& f, const QuadratureSpec& spec = {}) {
    auto g = [&f](double t) {
        const double om = 1.0 - t;
        return f(t / om) / (om * om);
    };
    return integrate_1d(g, 0.0, 1.0, spec);
}

// iterated integral of f(r, theta) dr dtheta over [r_lo, r_hi] x [0, 2*pi];
// the caller supplies any Jacobian factor inside f
template <class F2>
IntegralEstimate integrate_2d_polar(F2&& f, double r_lo, double r_hi,
                                    const QuadratureSpec& spec = {}) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    QuadratureSpec inner = spec;
    inner.rel_tol = spec.rel_tol * 0.5;
    inner.abs_tol = spec.abs_tol * 0.5;
    double worst_inner = 0.0;
    auto outer = [&](double r) {
        auto in = integrate_1d([&](double th) { return f(r, th); }, 0.0, two_pi, inner);
        worst_inner = std::max(worst_inner, in.error);
        return in.value;
    };
    auto out = integrate_1d(outer, r_lo, r_hi, spec);
    return {out.value, out.error + worst_inner * (r_hi - r_lo)};
}

}  // namespace secrecy
