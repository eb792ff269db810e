#pragma once
#include <cmath>
#include <limits>

#include "secrecy/errors.hpp"
#include "secrecy/quadrature.hpp"

namespace secrecy {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240;
inline constexpr double kPi = 3.14159265358979323846264338327950;

// Gamma(s), s > 0
inline double gamma_fn(double s) {
    if (!(s > 0) || !std::isfinite(s)) throw DomainError("gamma_fn requires s > 0");
    return std::tgamma(s);
}

// upper incomplete gamma Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt, s > 0, x >= 0.
// Series for the lower tail when x < s+1, Lentz continued fraction otherwise.
inline double gamma_upper_inc(double s, double x) {
    if (!(s > 0) || !std::isfinite(s)) throw DomainError("gamma_upper_inc requires s > 0");
    if (!(x >= 0) || !std::isfinite(x)) throw DomainError("gamma_upper_inc requires x >= 0");
    if (x == 0.0) return std::tgamma(s);
    if (x < s + 1.0) {
        double ap = s, sum = 1.0 / s, del = sum;
        for (int n = 0; n < 1000; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-17) break;
        }
        const double reg_lower = sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
        return std::tgamma(s) * (1.0 - reg_lower);
    }
    double b = x + 1.0 - s, c = 1.0 / 1e-300, d = 1.0 / b, h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -double(i) * (double(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + s * std::log(x)) * h;
}

// modified Bessel K_1; tiny arguments go straight to the 1/x limit because the
// library implementation loses its footing below ~1e-7
inline double bessel_k1(double x) {
    if (!(x > 0) || !std::isfinite(x)) throw DomainError("bessel_k1 requires x > 0");
    if (x < 1e-7) return 1.0 / x;
    if (x > 705.0) return 0.0;  // below double underflow anyway
    return std::cyl_bessel_k(1.0, x);
}

// e^x E_1(x); the product stays O(1/x) for large x where E_1 alone underflows
inline double exp_scaled_e1(double x) {
    if (!(x > 0) || !std::isfinite(x)) throw DomainError("exp_scaled_e1 requires x > 0");
    if (x >= 1.0) {
        // Lentz on the continued fraction e^x E_1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...)))
        double b = x + 1.0, c = 1e300, d = 1.0 / b, h = d;
        for (int i = 1; i <= 400; ++i) {
            const double an = -double(i) * double(i);
            b += 2.0;
            d = an * d + b;
            if (std::abs(d) < 1e-300) d = 1e-300;
            c = b + an / c;
            if (std::abs(c) < 1e-300) c = 1e-300;
            d = 1.0 / d;
            const double del = d * c;
            h *= del;
            if (std::abs(del - 1.0) < 1e-16) break;
        }
        return h;
    }
    // ascending series for E_1, then scale
    double sum = 0.0, term = 1.0;
    for (int k = 1; k <= 80; ++k) {
        term *= x / k;
        const double add = ((k & 1) ? term : -term) / k;
        sum += add;
        if (std::abs(add) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return std::exp(x) * (-kEulerGamma - std::log(x) + sum);
}

// Gauss hypergeometric F(1, b; 1+b; -z) for 0 < b <= 1, z >= 0, via the
// integral b*int_0^1 t^{b-1}/(1+z t) dt after t = u^{1/b} removes the endpoint
// singularity exactly
inline double hyp2f1_special(double b, double z) {
    if (!(b > 0) || !(b <= 1) || !std::isfinite(b))
        throw DomainError("hyp2f1_special requires 0 < b <= 1");
    if (!(z >= 0) || !std::isfinite(z)) throw DomainError("hyp2f1_special requires z >= 0");
    if (z == 0.0) return 1.0;
    const double inv_b = 1.0 / b;
    QuadratureSpec tight{1e-13, 1e-16, 4000};
    auto f = [z, inv_b](double u) { return 1.0 / (1.0 + z * std::pow(u, inv_b)); };
    return integrate_1d(f, 0.0, 1.0, tight).value;
}

}  // namespace secrecy
