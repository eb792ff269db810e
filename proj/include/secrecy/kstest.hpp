#pragma once
#include <algorithm>
#include <cmath>
#include <vector>

#include "secrecy/errors.hpp"

namespace secrecy {

// asymptotic Kolmogorov tail Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2)
inline double kolmogorov_q(double lambda) {
    if (lambda <= 0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = std::exp(-2.0 * double(j) * double(j) * lambda * lambda);
        sum += sign * term;
        if (term < 1e-18) break;
        sign = -sign;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

struct KsResult {
    double statistic;  // sup-norm distance between empirical and model CDF
    double p_value;    // small-sample corrected asymptotic p
};

// one-sample Kolmogorov-Smirnov against a continuous CDF
template <class Cdf>
KsResult ks_test(std::vector<double> samples, Cdf&& cdf) {
    if (samples.empty()) throw EmptyInput("ks_test needs at least one sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - double(i) / n));
        d = std::max(d, std::abs(double(i + 1) / n - f));
    }
    const double sqrt_n = std::sqrt(n);
    const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    return {d, kolmogorov_q(lambda)};
}

}  // namespace secrecy
