#pragma once
#include <algorithm>
#include <cmath>
#include <vector>

#include "secrecy/errors.hpp"
#include "secrecy/quadrature.hpp"
#include "secrecy/special.hpp"

namespace secrecy {

// Interference-coupling angle integral over the unit disk:
//   Psi(y; alpha, delta) = int_0^{2pi} int_0^1 y z^{alpha+1} /
//                          (y z^alpha + dist(z, theta; delta)^alpha) dz dtheta
// with dist the distance between (z, theta) and the point (delta, 0).
// Always in [0, pi]; increasing in y; Psi -> pi as y -> inf.

// closed form for alpha = 2, arranged so no difference of near-equal terms appears
inline double psi_alpha2_closed(double y, double delta) {
    if (!(delta > 0) || !std::isfinite(delta)) throw DomainError("psi_alpha2_closed requires delta > 0");
    if (!(y >= 0) || !std::isfinite(y)) throw DomainError("psi_alpha2_closed requires y >= 0");
    if (y == 0.0) return 0.0;
    const double d2 = delta * delta;
    const double psi = std::sqrt((d2 + y - 1.0) * (d2 + y - 1.0) + 4.0 * y);
    const double psi_minus_d2 = (2.0 * d2 * (y - 1.0) + (y + 1.0) * (y + 1.0)) / (psi + d2);
    const double log_arg = 2.0 * d2 * y / (d2 * (y - 1.0) + (y + 1.0) * (psi + y + 1.0));
    const double yp1 = y + 1.0;
    return kPi * y / (yp1 * yp1 * yp1) *
           (yp1 * psi_minus_d2 + d2 * (y - 1.0) * std::log(log_arg));
}

// direct quadrature for general alpha; the distance is computed through
// (z-delta)^2 + 4 z delta sin^2(theta/2), which cannot round negative
inline double psi_kernel(double y, double alpha, double delta, const QuadratureSpec& spec = {}) {
    if (!(alpha > 0) || !std::isfinite(alpha)) throw DomainError("psi_kernel requires alpha > 0");
    if (!(delta > 0) || !std::isfinite(delta)) throw DomainError("psi_kernel requires delta > 0");
    if (!(y >= 0) || !std::isfinite(y)) throw DomainError("psi_kernel requires y >= 0");
    if (y == 0.0) return 0.0;
    QuadratureSpec inner = spec;
    inner.rel_tol = spec.rel_tol * 0.5;
    inner.abs_tol = spec.abs_tol * 0.5;
    const double half_alpha = 0.5 * alpha;
    auto z_integrand = [&](double z, double theta) {
        const double s = std::sin(0.5 * theta);
        const double dist2 = (z - delta) * (z - delta) + 4.0 * z * delta * s * s;
        const double za = std::pow(z, alpha);
        return y * za * z / (y * za + std::pow(dist2, half_alpha));
    };
    auto theta_integrand = [&](double theta) {
        double acc = 0.0;
        if (delta < 1.0) {  // split at the field point's radius to tame the kink
            acc += integrate_1d([&](double z) { return z_integrand(z, theta); }, 0.0, delta, inner).value;
            acc += integrate_1d([&](double z) { return z_integrand(z, theta); }, delta, 1.0, inner).value;
        } else {
            acc += integrate_1d([&](double z) { return z_integrand(z, theta); }, 0.0, 1.0, inner).value;
        }
        return acc;
    };
    // integrand is even about theta = pi
    return 2.0 * integrate_1d(theta_integrand, 0.0, kPi, spec).value;
}

// Monotone-cubic table of Psi over a log-spaced y grid. Below the grid the
// exact small-y behavior Psi ~ c*y is used; above it the last value is held
// (grids are sized so that region carries negligible weight).
class PsiCache {
  public:
    PsiCache(double alpha, double delta, double y_lo, double y_hi, int n = 64,
             const QuadratureSpec& spec = {})
        : y_lo_(y_lo), y_hi_(y_hi) {
        if (!(y_lo > 0) || !(y_hi > y_lo)) throw DomainError("PsiCache requires 0 < y_lo < y_hi");
        if (n < 4) throw DomainError("PsiCache requires at least 4 nodes");
        ln_y_.resize(n);
        val_.resize(n);
        const double l0 = std::log(y_lo), l1 = std::log(y_hi);
        for (int i = 0; i < n; ++i) {
            ln_y_[i] = l0 + (l1 - l0) * i / (n - 1);
            val_[i] = psi_kernel(std::exp(ln_y_[i]), alpha, delta, spec);
        }
        build_slopes();
    }

    double operator()(double y) const {
        if (!(y > 0)) return 0.0;
        if (y <= y_lo_) return val_.front() * (y / y_lo_);
        if (y >= y_hi_) return val_.back();
        const double x = std::log(y);
        auto it = std::upper_bound(ln_y_.begin(), ln_y_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - ln_y_.begin()) - 1;
        const double h = ln_y_[i + 1] - ln_y_[i];
        const double t = (x - ln_y_[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        return h00 * val_[i] + h10 * h * slope_[i] + h01 * val_[i + 1] + h11 * h * slope_[i + 1];
    }

    int size() const { return static_cast<int>(val_.size()); }
    double y_lo() const { return y_lo_; }
    double y_hi() const { return y_hi_; }

  private:
    // Fritsch-Carlson slopes: interpolation stays monotone like the data
    void build_slopes() {
        const std::size_t n = val_.size();
        std::vector<double> h(n - 1), d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = ln_y_[i + 1] - ln_y_[i];
            d[i] = (val_[i + 1] - val_[i]) / h[i];
        }
        slope_.assign(n, 0.0);
        slope_[0] = edge_slope(h[0], h[1], d[0], d[1]);
        slope_[n - 1] = edge_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0) {
                slope_[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                slope_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
    }

    static double edge_slope(double h0, double h1, double d0, double d1) {
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (m * d0 <= 0.0) return 0.0;
        if (d0 * d1 < 0.0 && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return m;
    }

    double y_lo_, y_hi_;
    std::vector<double> ln_y_, val_, slope_;
};

}  // namespace secrecy
