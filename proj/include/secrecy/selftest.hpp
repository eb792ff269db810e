#pragma once
#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "secrecy/analytic.hpp"
#include "secrecy/kstest.hpp"
#include "secrecy/params.hpp"
#include "secrecy/psi.hpp"
#include "secrecy/rng.hpp"
#include "secrecy/simcore.hpp"
#include "secrecy/special.hpp"

// Built-in sanity suites behind `sopcli validate`: spot checks of the special
// functions and engines against independently computed high-precision values,
// generator known-answer tests, and distribution checks on the samplers.

namespace secrecy {

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

namespace detail {

inline void check_rel(std::vector<CheckResult>& out, const std::string& name, double got,
                      double want, double tol) {
    const double err = std::abs(got - want) / std::max(1.0, std::abs(want));
    std::ostringstream os;
    os.precision(17);
    os << "got " << got << ", want " << want << ", rel err " << err;
    out.push_back({name, err <= tol && std::isfinite(got), os.str()});
}

inline void check_true(std::vector<CheckResult>& out, const std::string& name, bool ok,
                       const std::string& detail) {
    out.push_back({name, ok, detail});
}

}  // namespace detail

inline std::vector<CheckResult> selftest_special() {
    using detail::check_rel;
    std::vector<CheckResult> out;
    check_rel(out, "gamma_upper_inc(0.5, 2)", gamma_upper_inc(0.5, 2.0), 0.080647117960317691, 1e-12);
    check_rel(out, "gamma_upper_inc(3, 0.5)", gamma_upper_inc(3.0, 0.5), 1.9712246440660586, 1e-12);
    check_rel(out, "bessel_k1(0.1)", bessel_k1(0.1), 9.853844780870606, 1e-12);
    check_rel(out, "bessel_k1(1)", bessel_k1(1.0), 0.60190723019723458, 1e-12);
    check_rel(out, "exp_scaled_e1(1)", exp_scaled_e1(1.0), 0.59634736232319407, 1e-12);
    check_rel(out, "exp_scaled_e1(50)", exp_scaled_e1(50.0), 0.019615109930114869, 1e-12);
    check_rel(out, "hyp2f1_special(0.5, 10)", hyp2f1_special(0.5, 10.0), 0.39987600505576615, 1e-10);
    check_rel(out, "hyp2f1_special(1, 1) = ln 2", hyp2f1_special(1.0, 1.0), 0.69314718055994529, 1e-10);
    check_rel(out, "kolmogorov_q(1.0)", kolmogorov_q(1.0), 0.2699996716773545, 1e-12);
    check_rel(out, "kolmogorov_q(1.36)", kolmogorov_q(1.36), 0.049485876755377876, 1e-12);
    return out;
}

inline std::vector<CheckResult> selftest_closed_forms() {
    using detail::check_rel;
    std::vector<CheckResult> out;

    // Laplace-type integral against its Bessel closed form at c = 1
    {
        const double B = 0.3;
        const double via_quad = laplace_j(B, 1.0);
        const double via_bessel = 2.0 * std::sqrt(B) * bessel_k1(2.0 * std::sqrt(B));
        check_rel(out, "laplace_j(0.3, 1) vs Bessel form", via_quad, via_bessel, 1e-9);
    }

    // angular coverage function: quadrature kernel vs closed form at alpha = 2
    check_rel(out, "psi_kernel(5, 2, 0.5) vs closed form", psi_kernel(5.0, 2.0, 0.5),
              psi_alpha2_closed(5.0, 0.5), 1e-7);
    check_rel(out, "psi_alpha2_closed(1, 0.1)", psi_alpha2_closed(1.0, 0.1),
              1.5629619799922903, 1e-12);

    // one anchor per evaluator path, all independently computed to 1e-12+
    auto params = [](int k, double alpha, double d, double R, double rho, double beta,
                     double pu, double lam, Duplex dup, EdModel ed) {
        SystemParams p;
        p.k_antennas = k;
        p.alpha = alpha;
        p.d_bu = d;
        p.radius = R;
        p.rho_e = rho;
        p.beta = beta;
        p.epsilon = std::log2(beta);
        p.pu_over_n0_db = pu;
        p.lambda_uu_db = lam;
        p.duplex = dup;
        p.ed_model = ed;
        return validate(p);
    };

    check_rel(out, "selection + strongest eavesdropper, k=3 alpha=4",
              sop_hd_independent(params(3, 4, 10, 100, 0.001, 1, 50, 0, Duplex::HalfDuplex,
                                        EdModel::Independent)).value,
              0.21140117422711158, 1e-9);
    check_rel(out, "strongest eavesdropper, large-k direct route (k=200)",
              sop_hd_independent(params(200, 2, 5, 50, 0.005, 1, 50, 0, Duplex::HalfDuplex,
                                        EdModel::Independent)).value,
              0.067245080234056981, 1e-9);
    check_rel(out, "summed eavesdroppers, alpha=2 closed form",
              sop_hd_colluding(params(2, 2, 10, 100, 0.001, 1.5, 50, 0, Duplex::HalfDuplex,
                                      EdModel::Colluding)).value,
              0.7612316716540799, 1e-9);
    check_rel(out, "summed eavesdroppers, alpha=4 closed form",
              sop_hd_colluding(params(2, 4, 10, 100, 0.001, 1.5, 50, 0, Duplex::HalfDuplex,
                                      EdModel::Colluding)).value,
              0.33144483356257359, 1e-9);
    check_rel(out, "summed eavesdroppers, general exponent (alpha=3)",
              sop_hd_colluding(params(3, 3, 7, 60, 0.0015, 1.8, 50, 0, Duplex::HalfDuplex,
                                      EdModel::Colluding)).value,
              0.29452998733956193, 1e-9);
    check_rel(out, "jamming bound, independent, alpha=2",
              sop_fd_independent_bound(params(2, 2, 5, 50, 0.002, 1.2, 45, 3,
                                              Duplex::FullDuplex, EdModel::Independent)).value,
              0.058268954807143003, 1e-8);
    check_rel(out, "jamming bound, colluding, alpha=2",
              sop_fd_colluding_bound(params(2, 2, 5, 50, 0.002, 1.2, 45, 0, Duplex::FullDuplex,
                                            EdModel::Colluding)).value,
              0.058979726941174038, 1e-8);
    check_rel(out, "annulus correction term",
              omega_term(1.0, 5.0, 50.0, 0.0005, 1.0), 29.078135529122626, 1e-9);
    check_rel(out, "selection lower bound, k=100",
              sop_hd_independent_lower_bound(params(100, 2, 5, 50, 0.005, 1, 50, 0,
                                                    Duplex::HalfDuplex, EdModel::Independent))
                  .value,
              0.031370375662429159, 1e-12);
    return out;
}

inline std::vector<CheckResult> selftest_samplers() {
    using detail::check_true;
    std::vector<CheckResult> out;

    // counter-based generator known answers (fixed (counter, key) blocks)
    {
        struct Kat {
            std::array<std::uint64_t, 4> ctr;
            std::array<std::uint64_t, 2> key;
            std::array<std::uint64_t, 4> want;
        };
        const Kat kats[] = {
            {{0, 0, 0, 0}, {0, 0},
             {0x16554d9eca36314cull, 0xdb20fe9d672d0fdcull, 0xd7e772cee186176bull,
              0x7e68b68aec7ba23bull}},
            {{1, 0, 0, 0}, {0, 0},
             {0x02f4ba6408e4d89bull, 0x3dd62b0b9ca8c5b2ull, 0x1c8667a55d902e79ull,
              0x907d7a052fd5b4dcull}},
            {{1, 0, 0, 0}, {0x13198A2E03707344ull, 0x243F6A8885A308D3ull},
             {0xc770278060b66b5eull, 0xa0b14bcbeb987a57ull, 0xea80ab39b0b05f70ull,
              0x94eeab91fc011862ull}},
        };
        bool ok = true;
        std::ostringstream os;
        for (const auto& kat : kats) {
            const auto got = philox::block(kat.ctr, kat.key);
            if (got != kat.want) {
                ok = false;
                os << "block(ctr[0]=" << kat.ctr[0] << ") mismatch; ";
            }
        }
        check_true(out, "counter-based generator known answers", ok,
                   ok ? "3 blocks match" : os.str());
    }

    // disk point process: count mean and radial law
    {
        const double rho = 0.005, R = 50.0;
        const double mu = rho * kPi * R * R;
        const int n_real = 4000;
        double count_sum = 0.0;
        std::vector<double> radii;
        radii.reserve(static_cast<std::size_t>(mu) * n_real);
        for (int t = 0; t < n_real; ++t) {
            const EdRealization eds = sample_ppp_disk(rho, R, TrialRng(777, t));
            count_sum += static_cast<double>(eds.points.size());
            for (const auto& pt : eds.points) radii.push_back(pt.r);
        }
        const double mean = count_sum / n_real;
        std::ostringstream os;
        os << "mean count " << mean << " vs " << mu;
        check_true(out, "disk process count mean", std::abs(mean - mu) < 0.5, os.str());

        radii.resize(20000);  // plenty for KS, keeps runtime flat
        const KsResult ks = ks_test(radii, [&](double r) { return r * r / (R * R); });
        std::ostringstream os2;
        os2 << "KS p = " << ks.p_value;
        check_true(out, "disk process radial law", ks.p_value > 0.005, os2.str());
    }

    // antenna selection: the selected gain must follow the max-of-k law
    {
        const int k = 4, n = 20000;
        std::vector<double> maxima(n);
        for (int t = 0; t < n; ++t) {
            RngStream s(888, t, kUeGainStream);
            double m = 0.0;
            for (int i = 0; i < k; ++i) m = std::max(m, s.next_exponential(1.0));
            maxima[t] = m;
        }
        const KsResult ks =
            ks_test(maxima, [&](double x) { return std::pow(-std::expm1(-x), k); });
        std::ostringstream os;
        os << "KS p = " << ks.p_value;
        detail::check_true(out, "selected-antenna gain law (k=4)", ks.p_value > 0.005, os.str());
    }
    return out;
}

inline std::vector<CheckResult> selftest_all() {
    std::vector<CheckResult> out = selftest_special();
    auto b = selftest_closed_forms();
    out.insert(out.end(), b.begin(), b.end());
    auto c = selftest_samplers();
    out.insert(out.end(), c.begin(), c.end());
    return out;
}

}  // namespace secrecy
