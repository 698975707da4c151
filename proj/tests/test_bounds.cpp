// SPDX-License-Identifier: Apache-2.0
//
// relaycap - capacity bounds for Gaussian relay channels with ISI and colored noise
// Copyright (C) 2026 relaycap contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "relaycap/bounds.hpp"
#include "relaycap/channel.hpp"
#include "relaycap/circulant.hpp"
#include "relaycap/constants.hpp"
#include "relaycap/errors.hpp"
#include "relaycap/oracle.hpp"
#include "relaycap/rng.hpp"

using namespace relaycap;

namespace
{

// Same colored test channel as the oracle suite: complex taps and short
// autocorrelations so every band sees distinct gains, phases, and noises.
CirculantChannel colored_channel(int n)
{
    CirculantChannel ch;
    ch.n = n;
    ch.h_sr.taps = {cplx(1.0, 0.2), cplx(-0.4, 0.1), cplx(0.2, 0.0)};
    ch.h_sd.taps = {cplx(0.8, -0.1), cplx(0.3, 0.3)};
    ch.h_rd.taps = {cplx(1.1, 0.0), cplx(0.0, -0.5)};
    ch.noise_r.lags = {1.2, 0.3};
    ch.noise_d.lags = {1.0, 0.2, 0.1};
    return ch;
}

Eigen::MatrixXcd real_spectrum_cov(const std::vector<double> &spectrum, int n)
{
    return covariance_from_spectrum(std::vector<cplx>(spectrum.begin(), spectrum.end()), n);
}

PowerAllocation random_allocation(int n, Rng &rng, double p_max = 4.0)
{
    PowerAllocation alloc;
    for (int i = 0; i < n; i++)
    {
        alloc.p_s.push_back(rng.uniform(0.05, p_max));
        alloc.p_r.push_back(rng.uniform(0.05, p_max));
        alloc.alpha.push_back(rng.uniform());
    }
    return alloc;
}

} // namespace

TEST_CASE("df rate is zero at zero power", "[bounds]")
{
    auto ch = SubbandChannel::from_gains({1.0, 2.0}, {0.5, 1.0}, {1.0, 1.0});
    auto r = df_rate(ch, PowerAllocation::uniform(2, 0.0, 0.0, 0.5));
    REQUIRE(r.c1 == 0.0);
    REQUIRE(r.c2 == 0.0);
    REQUIRE(r.rate == 0.0);
}

TEST_CASE("df rate single band with a huge relay gain", "[bounds]")
{
    // At alpha = 0 the whole source power rides the coherent component:
    // c1 = 0 exactly, c2 = (1/2) log(1 + 1 + 1 + 2) = (1/2) log 5, and the
    // min-cut rate collapses to 0 regardless of how large a_SR is.
    auto ch = SubbandChannel::from_gains({1e12}, {1.0}, {1.0});
    auto r = df_rate(ch, PowerAllocation::uniform(1, 1.0, 1.0, 0.0));
    REQUIRE(r.c1 == 0.0);
    REQUIRE(r.c2 == Catch::Approx(0.5 * std::log(5.0)).margin(1e-12));
    REQUIRE(r.rate == 0.0);
}

TEST_CASE("df alpha extremes reproduce both limits exactly", "[bounds]")
{
    const int n = 4;
    Rng rng(101);
    std::vector<double> a_sr, a_sd, a_rd;
    for (int i = 0; i < n; i++)
    {
        a_sr.push_back(rng.uniform(0.1, 5.0));
        a_sd.push_back(rng.uniform(0.1, 5.0));
        a_rd.push_back(rng.uniform(0.1, 5.0));
    }
    auto ch = SubbandChannel::from_gains(a_sr, a_sd, a_rd);
    auto alloc = random_allocation(n, rng);

    SECTION("alpha = 1 removes the coherent cross term")
    {
        for (auto &a : alloc.alpha)
            a = 1.0;
        auto r = df_rate(ch, alloc);
        double c2_direct = 0.0;
        for (int i = 0; i < n; i++)
            c2_direct += std::log1p(a_sd[i] * alloc.p_s[i] + a_rd[i] * alloc.p_r[i]);
        REQUIRE(r.c2 == Catch::Approx(c2_direct / (2.0 * n)).margin(1e-15));
    }

    SECTION("alpha = 0 zeroes the broadcast cut and the rate")
    {
        for (auto &a : alloc.alpha)
            a = 0.0;
        auto r = df_rate(ch, alloc);
        REQUIRE(r.c1 == 0.0);
        REQUIRE(r.rate == 0.0);
        REQUIRE(r.c2 > 0.0);
    }
}

TEST_CASE("gains beyond the finite-SNR cap are rejected", "[bounds]")
{
    auto ch = SubbandChannel::from_gains({2e15}, {1.0}, {1.0});
    auto alloc = PowerAllocation::uniform(1, 1.0, 1.0, 0.5);
    REQUIRE_THROWS_MATCHES(df_rate(ch, alloc), InvalidArgumentError,
                           Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("band 1")));
}

TEST_CASE("cut-set broadcast cut dominates the DF broadcast cut", "[bounds]")
{
    const int n = 3;
    for (int trial = 0; trial < 50; trial++)
    {
        Rng rng(7, static_cast<uint64_t>(trial));
        std::vector<double> a_sr, a_sd, a_rd;
        for (int i = 0; i < n; i++)
        {
            a_sr.push_back(rng.uniform(0.0, 5.0));
            a_sd.push_back(rng.uniform(0.0, 5.0));
            a_rd.push_back(rng.uniform(0.0, 5.0));
        }
        auto ch = SubbandChannel::from_gains(a_sr, a_sd, a_rd);
        auto alloc = random_allocation(n, rng);
        auto df = df_rate(ch, alloc);
        auto up = cutset_rate(ch, alloc);
        REQUIRE(up.c1 >= df.c1);
        REQUIRE(up.c2 == df.c2);
        REQUIRE(up.rate >= df.rate - 1e-15);
    }
}

TEST_CASE("cf rate single-band hand value", "[bounds]")
{
    auto ch = SubbandChannel::from_gains({1.0}, {1.0}, {1.0});
    auto alloc = PowerAllocation::uniform(1, 1.0, 1.0);
    auto cf = cf_rate(ch, alloc, CompressionProfile::uniform(1, 1.0));
    REQUIRE(cf.rate == Catch::Approx(0.5 * std::log(2.5)).margin(1e-12));
    REQUIRE(cf.slack == Catch::Approx(-std::log(5.0 / 3.0)).margin(1e-12));
    REQUIRE(cf.slack < 0.0); // this profile over-compresses: reported, not clamped
}

TEST_CASE("cf rate with huge compression noise ignores the relay", "[bounds]")
{
    auto ch = SubbandChannel::from_gains({4.0, 2.0}, {1.0, 0.5}, {1.0, 3.0});
    auto alloc = PowerAllocation::uniform(2, 2.0, 1.5);
    auto cf = cf_rate(ch, alloc, CompressionProfile::uniform(2, 1e12));

    double direct = 0.0, slack_limit = 0.0;
    for (int i = 0; i < 2; i++)
    {
        direct += std::log1p(ch.a_sd[i] * alloc.p_s[i]);
        // Residual slack once the compressed observation is pure noise: the
        // relay->destination link budget is unused, so the margin equals the
        // log-ratio of full MAC output power to the direct-only output power.
        const double den = ch.a_sd[i] * alloc.p_s[i] + ch.a_rd[i] * alloc.p_r[i] + 1.0;
        slack_limit += std::log(den / (ch.a_sd[i] * alloc.p_s[i] + 1.0));
    }
    REQUIRE(cf.rate == Catch::Approx(direct / 4.0).margin(1e-9));
    REQUIRE(cf.slack > 0.0);
    REQUIRE(cf.slack == Catch::Approx(slack_limit).margin(1e-6));
}

TEST_CASE("cf approaches the broadcast cut as the relay-destination gain grows", "[bounds]")
{
    // With a_SR=4, a_SD=1, N_R=N_D=P_S=P_R=1 the tight compression noise is
    // nhat = (a_SR P_S + a_SD P_S + N_D) / a_RD = 6/a_RD, and the CF rate
    // should close on the cut-set broadcast term (1/2) log(1 + P_S (a_SR+a_SD)).
    const double target = 0.5 * std::log(6.0);
    double prev_gap = 1e9;
    for (double a_rd : {10.0, 100.0, 1000.0})
    {
        auto ch = SubbandChannel::from_gains({4.0}, {1.0}, {a_rd});
        auto alloc = PowerAllocation::uniform(1, 1.0, 1.0);
        auto cf = cf_rate(ch, alloc, CompressionProfile::uniform(1, 6.0 / a_rd));
        REQUIRE(cf.slack == Catch::Approx(0.0).margin(1e-9));
        const double gap = target - cf.rate;
        REQUIRE(gap > 0.0);
        REQUIRE(gap < prev_gap);
        prev_gap = gap;
    }
    REQUIRE(prev_gap < 0.01);
}

TEST_CASE("modified cf hand values", "[bounds]")
{
    SECTION("relay off reduces to the direct link")
    {
        auto ch = SubbandChannel::from_gains({3.0, 1.0}, {0.5, 2.0}, {1.0, 1.0});
        auto alloc = PowerAllocation::uniform(2, 2.0, 0.0);
        double direct = 0.0;
        for (int i = 0; i < 2; i++)
            direct += std::log1p(ch.a_sd[i] * alloc.p_s[i]);
        REQUIRE(cf_modified_rate(ch, alloc) == Catch::Approx(direct / 4.0).margin(1e-15));
    }

    SECTION("single symmetric band")
    {
        auto ch = SubbandChannel::from_gains({1.0}, {1.0}, {1.0});
        auto alloc = PowerAllocation::uniform(1, 1.0, 1.0);
        REQUIRE(cf_modified_rate(ch, alloc) == Catch::Approx(0.5 * std::log(2.25)).margin(1e-12));
    }
}

TEST_CASE("modified cf equals cf at the closed-form compression choice", "[bounds]")
{
    // The closed-form per-band q saturates the compression constraint, so
    // mapping it back to a quantization-noise profile must reproduce the
    // modified-CF rate with exactly zero slack (colored noise included).
    const int n = 8;
    auto ch = subband_decompose(colored_channel(n));
    Rng rng(23);
    auto alloc = random_allocation(n, rng, 6.0);

    CompressionProfile comp;
    for (int i = 0; i < n; i++)
    {
        const double p_s = alloc.p_s[i], p_r = alloc.p_r[i];
        const double big_a = 1.0 + p_s * (ch.a_sr[i] + ch.a_sd[i]);
        const double q_tight = big_a / (1.0 + ch.a_sd[i] * p_s + ch.a_rd[i] * p_r);
        const double nhat_norm = cf_nhat_from_q(q_tight, ch.a_sr[i], ch.a_sd[i], p_s);
        comp.nhat.push_back(nhat_norm * ch.noise_r[i]);
    }
    auto cf = cf_rate(ch, alloc, comp);
    REQUIRE(cf.slack == Catch::Approx(0.0).margin(1e-9));
    REQUIRE(cf.rate == Catch::Approx(cf_modified_rate(ch, alloc)).epsilon(1e-12));
}

TEST_CASE("compression reparametrization round trip and substituted objective", "[bounds]")
{
    Rng rng(31);
    for (int trial = 0; trial < 200; trial++)
    {
        const double a_sr = rng.uniform(0.01, 8.0);
        const double a_sd = rng.uniform(0.01, 8.0);
        const double p_s = rng.uniform(0.01, 10.0);
        const double nhat = std::exp(rng.uniform(-6.0, 6.0));

        const double q = cf_q_from_nhat(nhat, a_sr, a_sd, p_s);
        REQUIRE(q > 0.0);
        REQUIRE(q < (1.0 + p_s * (a_sr + a_sd)) / (1.0 + a_sd * p_s));
        REQUIRE(cf_nhat_from_q(q, a_sr, a_sd, p_s) == Catch::Approx(nhat).epsilon(1e-10));

        // The substituted objective at q(nhat) equals the per-band CF rate
        // term at relay noise 1 and total effective noise 1 + nhat.
        const double band = 0.5 * std::log1p(p_s * (a_sd + a_sr / (1.0 + nhat)));
        REQUIRE(cf_substituted_band_rate(q, a_sr, a_sd, p_s) == Catch::Approx(band).epsilon(1e-12));
    }

    REQUIRE_THROWS_AS(cf_nhat_from_q(0.0, 1.0, 1.0, 1.0), InvalidArgumentError);
    // q at or beyond (1 + P A)/(1 + P a_SD) has no finite preimage.
    REQUIRE_THROWS_AS(cf_nhat_from_q(1.5, 1.0, 1.0, 1.0), InvalidArgumentError);
}

TEST_CASE("degradedness test", "[bounds]")
{
    REQUIRE(is_degraded(SubbandChannel::from_gains({2.0, 2.0}, {1.0, 1.0}, {1.0, 1.0})));
    REQUIRE_FALSE(is_degraded(SubbandChannel::from_gains({2.0, 0.5}, {1.0, 1.0}, {1.0, 1.0})));
    REQUIRE(is_degraded(SubbandChannel::from_gains({1.0}, {1.0}, {0.1})));
}

TEST_CASE("df and modified cf are nondecreasing in every power", "[bounds]")
{
    const int n = 3;
    const double step = 1e-3;
    for (int point = 0; point < 100; point++)
    {
        Rng rng(11, static_cast<uint64_t>(point));
        std::vector<double> a_sr, a_sd, a_rd;
        for (int i = 0; i < n; i++)
        {
            a_sr.push_back(rng.uniform(0.0, 5.0));
            a_sd.push_back(rng.uniform(0.0, 5.0));
            a_rd.push_back(rng.uniform(0.0, 5.0));
        }
        auto ch = SubbandChannel::from_gains(a_sr, a_sd, a_rd);
        auto alloc = random_allocation(n, rng, 10.0);

        const double df0 = df_rate(ch, alloc).rate;
        const double cfm0 = cf_modified_rate(ch, alloc);
        for (int i = 0; i < n; i++)
        {
            auto bumped = alloc;
            bumped.p_s[i] += step;
            REQUIRE(df_rate(ch, bumped).rate >= df0 - 1e-12);
            REQUIRE(cf_modified_rate(ch, bumped) >= cfm0 - 1e-12);

            bumped = alloc;
            bumped.p_r[i] += step;
            REQUIRE(df_rate(ch, bumped).rate >= df0 - 1e-12);
            REQUIRE(cf_modified_rate(ch, bumped) >= cfm0 - 1e-12);
        }
    }
}

TEST_CASE("rates converge as the block length doubles", "[bounds]")
{
    // Smooth spectra: successive refinements of the band sums must agree to
    // 1e-3 nats once n >= 256, for every bound.
    auto eval = [](int n) {
        auto ch = subband_decompose(colored_channel(n));
        auto alloc = PowerAllocation::uniform(n, 2.0, 3.0, 0.7);
        auto comp = CompressionProfile::uniform(n, 1.0);
        struct
        {
            double df, up, cfm, cf;
        } out{};
        out.df = df_rate(ch, alloc).rate;
        out.up = cutset_rate(ch, alloc).rate;
        out.cfm = cf_modified_rate(ch, alloc);
        out.cf = cf_rate(ch, alloc, comp).rate;
        return out;
    };
    auto a = eval(256);
    auto b = eval(512);
    REQUIRE(std::abs(a.df - b.df) <= 1e-3);
    REQUIRE(std::abs(a.up - b.up) <= 1e-3);
    REQUIRE(std::abs(a.cfm - b.cfm) <= 1e-3);
    REQUIRE(std::abs(a.cf - b.cf) <= 1e-3);
}

TEST_CASE("band sums match the dense matrix oracles", "[bounds]")
{
    const int n = 8;
    auto circ = colored_channel(n);
    auto ch = subband_decompose(circ);
    Rng rng(37);
    auto alloc = random_allocation(n, rng, 5.0);

    SECTION("decode-and-forward terms")
    {
        // Coherent per-band inputs: the cross spectrum carries the phase that
        // aligns the two paths at the destination.
        Eigen::VectorXcd cross(n);
        for (int i = 0; i < n; i++)
        {
            const double mag = std::sqrt((1.0 - alloc.alpha[i]) * alloc.p_s[i] * alloc.p_r[i]);
            const double phase = std::arg(ch.h_rd[i]) - std::arg(ch.h_sd[i]);
            cross(i) = std::polar(mag, phase);
        }
        CovarianceSet cov;
        cov.sigma_s = real_spectrum_cov(alloc.p_s, n);
        cov.sigma_r = real_spectrum_cov(alloc.p_r, n);
        const Eigen::MatrixXcd f = dft_matrix(n);
        cov.sigma_sr = f.adjoint() * cross.asDiagonal() * f;

        auto oracle = oracle_df_terms(circ, cov);
        auto r = df_rate(ch, alloc);
        REQUIRE(oracle.i1 == Catch::Approx(n * r.c1).epsilon(1e-9));
        REQUIRE(oracle.i2 == Catch::Approx(n * r.c2).epsilon(1e-9));
    }

    SECTION("compress-and-forward terms")
    {
        CompressionProfile comp;
        for (int i = 0; i < n; i++)
            comp.nhat.push_back(std::exp(rng.uniform(-1.0, 1.5)));

        CovarianceSet cov;
        cov.sigma_s = real_spectrum_cov(alloc.p_s, n);
        cov.sigma_r = real_spectrum_cov(alloc.p_r, n);
        cov.sigma_sr = Eigen::MatrixXcd::Zero(n, n);
        const Eigen::MatrixXcd qnoise = real_spectrum_cov(comp.nhat, n);

        auto oracle = oracle_cf_terms(circ, cov, qnoise);
        auto cf = cf_rate(ch, alloc, comp);
        REQUIRE(oracle.rate == Catch::Approx(n * cf.rate).epsilon(1e-9));
        REQUIRE(oracle.constraint_gap == Catch::Approx(0.5 * cf.slack).epsilon(1e-9));
    }
}

TEST_CASE("synchronous waveforms reduce to the flat-band relay formulas", "[bounds]")
{
    // rho_RS = 1, rho_SR = 0 means both nodes reuse one signature: every band
    // sees the plain scalar relay channel with gains 1/sigma^2.
    AsynchronyProfile prof;
    prof.rho_rs = 1.0;
    prof.rho_sr = 0.0;
    prof.sigma2_r = 2.0;
    prof.sigma2_d = 0.5;

    const int n = 8;
    Rng rng(41);
    auto alloc = random_allocation(n, rng, 8.0);
    auto ch = SubbandChannel::from_gains(std::vector<double>(n, 1.0 / prof.sigma2_r),
                                         std::vector<double>(n, 1.0 / prof.sigma2_d),
                                         std::vector<double>(n, 1.0 / prof.sigma2_d));

    auto asy = asynch_df_rate(prof, alloc);
    auto ref = df_rate(ch, alloc);
    REQUIRE(asy.c1 == Catch::Approx(ref.c1).epsilon(1e-12));
    REQUIRE(asy.c2 == Catch::Approx(ref.c2).epsilon(1e-12));
    REQUIRE(asy.rate == Catch::Approx(ref.rate).epsilon(1e-12));

    auto asy_up = asynch_cutset_rate(prof, alloc);
    auto ch_up = SubbandChannel::from_gains(std::vector<double>(n, 1.0 / prof.sigma2_r),
                                            std::vector<double>(n, 1.0 / prof.sigma2_d),
                                            std::vector<double>(n, 1.0 / prof.sigma2_d));
    // Joint reception folds both noises into the broadcast cut.
    auto ref_up = cutset_rate(ch_up, alloc);
    REQUIRE(asy_up.c1 == Catch::Approx(ref_up.c1).epsilon(1e-12));
    REQUIRE(asy_up.c2 == Catch::Approx(ref_up.c2).epsilon(1e-12));
}

TEST_CASE("asynchronous df at zero power is zero", "[bounds]")
{
    AsynchronyProfile prof;
    prof.rho_rs = 0.3;
    prof.rho_sr = 0.4;
    auto r = asynch_df_rate(prof, PowerAllocation::uniform(16, 0.0, 0.0, 0.5));
    REQUIRE(r.c1 == 0.0);
    REQUIRE(r.c2 == 0.0);
    REQUIRE(r.rate == 0.0);
}

TEST_CASE("asynchronous mac cut matches the frozen 2x2 log-det reference", "[bounds]")
{
    // Rectangular signatures with the relay halfway between the terminals:
    // rho(w) = 0.5 + 0.5 cos w. Reference evaluated independently as
    // (1/2n) sum log det(I + Psi G(w_i)) over n = 64 bands with
    // Psi = [[P_R, psi],[psi, P_S]], psi = sqrt((1-alpha) P_S P_R).
    AsynchronyProfile prof;
    prof.rho_rs = 0.5;
    prof.rho_sr = 0.5;
    const int n = 64;
    auto alloc = PowerAllocation::uniform(n, 10.0, 10.0, 0.5);

    auto r = asynch_df_rate(prof, alloc);
    REQUIRE(r.c2 == Catch::Approx(2.0266867350085311).margin(1e-12));

    double oracle = 0.0;
    for (int i = 0; i < n; i++)
    {
        const double w = 2.0 * kPi * i / n;
        const double rho = prof.rho(w);
        const double psi = std::sqrt(0.5 * 10.0 * 10.0);
        Eigen::Matrix2d g, sig;
        g << 1.0, rho, rho, 1.0;
        sig << 10.0, psi, psi, 10.0;
        Eigen::Matrix2d m = Eigen::Matrix2d::Identity() + sig * g;
        oracle += std::log(m.determinant());
    }
    REQUIRE(r.c2 == Catch::Approx(oracle / (2.0 * n)).margin(1e-12));
}

TEST_CASE("asynchronous cf hand values at rho = 0", "[bounds]")
{
    AsynchronyProfile prof; // rho(w) = 0, unit noises
    auto alloc = PowerAllocation::uniform(1, 1.0, 4.0, 1.0);
    auto cf = asynch_cf_rate(prof, alloc, CompressionProfile::uniform(1, 1.0));
    // A = 1 + 1 + 2 + 1 = 5, B = 1 * (1+1)(1+4) = 10.
    REQUIRE(cf.rate == Catch::Approx(0.5 * std::log(5.0 / 2.0)).margin(1e-12));
    REQUIRE(cf.slack == Catch::Approx(std::log(2.0)).margin(1e-12));
}

TEST_CASE("asynchronous cut-set broadcast term adds the direct observation", "[bounds]")
{
    AsynchronyProfile prof;
    prof.rho_rs = 0.2;
    prof.rho_sr = 0.1;
    prof.sigma2_r = 2.0;
    prof.sigma2_d = 0.5;
    auto alloc = PowerAllocation::uniform(1, 3.0, 1.0, 1.0);

    auto df = asynch_df_rate(prof, alloc);
    auto up = asynch_cutset_rate(prof, alloc);
    const double arg_df = std::exp(2.0 * df.c1) - 1.0;
    const double arg_up = std::exp(2.0 * up.c1) - 1.0;
    REQUIRE(arg_up - arg_df == Catch::Approx(3.0 / prof.sigma2_d).margin(1e-9));
}

TEST_CASE("waveform correlations beyond one are rejected", "[bounds]")
{
    AsynchronyProfile prof;
    prof.rho_rs = 0.8;
    prof.rho_sr = 0.5; // rho(0) = 1.3
    auto alloc = PowerAllocation::uniform(4, 1.0, 1.0, 0.5);
    REQUIRE_THROWS_MATCHES(asynch_df_rate(prof, alloc), InvalidWaveformError,
                           Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("band 1")));
    REQUIRE_THROWS_AS(asynch_cf_rate(prof, alloc, CompressionProfile::uniform(4, 1.0)), InvalidWaveformError);
}

TEST_CASE("binding labels", "[bounds]")
{
    REQUIRE(std::string(binding_name(Binding::BroadcastCut)) == "broadcast-cut");
    REQUIRE(std::string(binding_name(Binding::MacCut)) == "MAC-cut");
    REQUIRE(std::string(binding_name(Binding::CompressionConstraint)) == "compression-constraint");
}
