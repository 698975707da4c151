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

#include "relaycap/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relaycap/constants.hpp"
#include "relaycap/errors.hpp"
#include "relaycap/optimizers.hpp"

namespace relaycap
{

namespace
{

// Per-real-dimension capacity function used by every scenario here.
double cap_half(double x)
{
    return 0.5 * std::log1p(x);
}

// Golden-section maximization of a unimodal (or concave) function on
// [lo, hi]; returns the best value found and stores the argument.
template <typename F> double golden_max(F f, double lo, double hi, int iters, double *arg_best = nullptr)
{
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < iters; it++)
    {
        if (f1 < f2)
        {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
        else
        {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = f(xm);
    double best = fm, best_x = xm;
    if (f1 > best)
    {
        best = f1;
        best_x = x1;
    }
    if (f2 > best)
    {
        best = f2;
        best_x = x2;
    }
    if (arg_best != nullptr)
        *arg_best = best_x;
    return best;
}

// Scan-then-refine maximization for objectives that are only piecewise
// unimodal: a uniform scan locates the best sample, golden-section polishes
// inside the bracketing interval.
template <typename F> double scan_golden_max(F f, double lo, double hi, int scan_points, int iters, double *arg_best = nullptr)
{
    double best = -std::numeric_limits<double>::infinity();
    int best_k = 0;
    for (int k = 0; k < scan_points; k++)
    {
        const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(scan_points - 1);
        const double v = f(x);
        if (v > best)
        {
            best = v;
            best_k = k;
        }
    }
    const double step = (hi - lo) / static_cast<double>(scan_points - 1);
    const double a = std::max(lo, lo + step * static_cast<double>(best_k - 1));
    const double b = std::min(hi, lo + step * static_cast<double>(best_k + 1));
    double arg = 0.0;
    const double refined = golden_max(f, a, b, iters, &arg);
    if (refined >= best)
    {
        if (arg_best != nullptr)
            *arg_best = arg;
        return refined;
    }
    if (arg_best != nullptr)
        *arg_best = lo + step * static_cast<double>(best_k);
    return best;
}

void check_lowpass_common(const LowpassRelaySpec &spec)
{
    if (!(spec.n_1 > 0.0) || !(spec.n_2 > 0.0))
        throw InvalidArgumentError("noise PSD levels must be positive");
    if (!(spec.p_s >= 0.0) || !(spec.p_r >= 0.0))
        throw InvalidArgumentError("power budgets must be nonnegative");
}

} // namespace

// ------------------------------------------------------------------------
// Ideal lowpass relays

EqualBandwidthResult equal_bandwidth_capacity(const LowpassRelaySpec &spec)
{
    check_lowpass_common(spec);
    if (!(spec.w > 0.0))
        throw InvalidArgumentError("bandwidth must be positive");

    EqualBandwidthResult out;
    if (spec.p_s <= 0.0)
    {
        out.capacity = 0.0;
        out.alpha_star = 1.0;
        return out;
    }
    // A relatively strong relay link (P_S/N_1 <= P_R/N_2) leaves the
    // source-relay cut binding even with fully fresh inputs, so alpha = 1.
    if (spec.p_s / spec.n_1 <= spec.p_r / spec.n_2)
    {
        out.alpha_star = 1.0;
        out.capacity = spec.w * cap_half(spec.p_s / (spec.n_1 * spec.w));
        return out;
    }
    out.alpha_star = solve_alpha_star(spec.p_s, spec.p_r, spec.n_1, spec.n_2, spec.w);
    out.capacity = spec.w * cap_half(out.alpha_star * spec.p_s / (spec.n_1 * spec.w));
    return out;
}

UnequalBandwidthResult unequal_bandwidth_capacity(const LowpassRelaySpec &spec)
{
    check_lowpass_common(spec);
    if (!(spec.w_sd > 0.0) || !(spec.w_sr > 0.0) || !(spec.w_rd > 0.0))
        throw InvalidArgumentError("bandwidths must be positive");
    if (spec.w_sd > spec.w_sr || spec.w_sd > spec.w_rd)
        throw InvalidArgumentError("the direct link cannot be wider than the relay links (W_SD <= W_SR, W_SD <= W_RD)");

    const double b_sr = spec.w_sr - spec.w_sd; // excess bandwidth toward the relay
    const double b_rd = spec.w_rd - spec.w_sd; // excess bandwidth toward the destination
    const double n_d = spec.n_1 + spec.n_2;

    const auto hop_sr = [&](double p) { return b_sr > 0.0 ? b_sr * cap_half(p / (spec.n_1 * b_sr)) : 0.0; };
    const auto hop_rd = [&](double p) { return b_rd > 0.0 ? b_rd * cap_half(p / (n_d * b_rd)) : 0.0; };
    const auto relay_part = [&](double ps1, double pr1) {
        LowpassRelaySpec inner = spec;
        inner.w = spec.w_sd;
        inner.p_s = ps1;
        inner.p_r = pr1;
        return equal_bandwidth_capacity(inner).capacity;
    };
    const auto value = [&](double ps1, double pr1) {
        return relay_part(ps1, pr1) + std::min(hop_sr(spec.p_s - ps1), hop_rd(spec.p_r - pr1));
    };

    // The two-term sum is concave in the split, so nested golden-section
    // search converges to the optimum.
    UnequalBandwidthResult out;
    double best_ps1 = spec.p_s, best_pr1 = spec.p_r;
    const auto outer = [&](double ps1) {
        double pr1 = spec.p_r;
        const double v = golden_max([&](double y) { return value(ps1, y); }, 0.0, spec.p_r, 90, &pr1);
        return v;
    };
    golden_max(outer, 0.0, spec.p_s, 90, &best_ps1);
    golden_max([&](double y) { return value(best_ps1, y); }, 0.0, spec.p_r, 90, &best_pr1);

    out.p_s1 = best_ps1;
    out.p_s2 = spec.p_s - best_ps1;
    out.p_r1 = best_pr1;
    out.p_r2 = spec.p_r - best_pr1;
    out.capacity = value(best_ps1, best_pr1);
    return out;
}

// ------------------------------------------------------------------------
// Two-subcarrier permutation experiment

double permutation_experiment(const SubbandChannel &ch, double p_s_budget, double p_r_budget,
                              const std::array<int, 2> &pi)
{
    if (ch.n != 2)
        throw InvalidArgumentError("the permutation experiment is defined on a 2-band channel");
    if (!(p_s_budget >= 0.0) || !(p_r_budget >= 0.0))
        throw InvalidArgumentError("power budgets must be nonnegative");

    std::array<int, 2> p = pi;
    if (p[0] >= 1 && p[1] >= 1 && p[0] <= 2 && p[1] <= 2)
    {
        p[0] -= 1;
        p[1] -= 1;
    }
    const bool identity = (p[0] == 0 && p[1] == 1);
    const bool swapped = (p[0] == 1 && p[1] == 0);
    if (!identity && !swapped)
        throw InvalidArgumentError("pi must be a permutation of the two bands");

    if (identity)
        return solve_df_maximin(ch, p_s_budget, p_r_budget).rate;

    // Swapped relay transmission: the relay signal on each band carries the
    // other band's stream, so it is independent of the fresh source signal
    // there. The cooperative cross term disappears, alpha = 1 is optimal, and
    // only the power split remains to optimize. Both cuts are concave in the
    // split, so nested golden-section search solves the maximin exactly.
    const double ps_tot = 2.0 * p_s_budget;
    const double pr_tot = 2.0 * p_r_budget;
    const auto c1 = [&](double ps1) {
        return 0.25 * (std::log1p(ch.a_sr[0] * ps1) + std::log1p(ch.a_sr[1] * (ps_tot - ps1)));
    };
    const auto c2 = [&](double ps1, double pr1) {
        return 0.25 * (std::log1p(ch.a_sd[0] * ps1 + ch.a_rd[0] * pr1) +
                       std::log1p(ch.a_sd[1] * (ps_tot - ps1) + ch.a_rd[1] * (pr_tot - pr1)));
    };
    const auto inner = [&](double ps1) {
        const double c1v = c1(ps1);
        const double c2v = golden_max([&](double pr1) { return c2(ps1, pr1); }, 0.0, pr_tot, 90);
        return std::min(c1v, c2v);
    };
    return golden_max(inner, 0.0, ps_tot, 90);
}

// ------------------------------------------------------------------------
// Underwater acoustic model

double thorp_absorption(double f_khz)
{
    if (!(f_khz > 0.0))
        throw InvalidArgumentError("frequency must be positive");
    const double f2 = f_khz * f_khz;
    return 0.11 * f2 / (1.0 + f2) + 44.0 * f2 / (4100.0 + f2) + 2.75e-4 * f2 + 0.003;
}

double path_loss(double d_km, double f_khz, double k, double a_0)
{
    if (!(d_km > 0.0))
        throw InvalidArgumentError("distance must be positive");
    if (!(a_0 > 0.0) || !(k >= 0.0))
        throw InvalidArgumentError("attenuation parameters must be positive");
    const double absorb_db = d_km * thorp_absorption(f_khz);
    const double attenuation = a_0 * std::pow(d_km, k) * std::pow(10.0, absorb_db / 10.0);
    return 1.0 / attenuation;
}

std::array<double, 4> ambient_noise_components_db(double f_khz, double s, double w)
{
    if (!(f_khz > 0.0))
        throw InvalidArgumentError("frequency must be positive");
    if (!(s >= 0.0) || !(s <= 1.0))
        throw InvalidArgumentError("shipping activity must lie in [0, 1]");
    if (!(w >= 0.0))
        throw InvalidArgumentError("wind speed must be nonnegative");
    const double lf = std::log10(f_khz);
    return {
        17.0 - 30.0 * lf,                                              // turbulence
        40.0 + 20.0 * (s - 0.5) + 26.0 * lf - 60.0 * std::log10(f_khz + 0.03), // shipping
        50.0 + 7.5 * std::sqrt(w) + 20.0 * lf - 40.0 * std::log10(f_khz + 0.4), // waves
        -15.0 + 20.0 * lf,                                             // thermal
    };
}

double ambient_noise_psd(double f_khz, double s, double w)
{
    const auto parts = ambient_noise_components_db(f_khz, s, w);
    double total = 0.0;
    for (double db : parts)
        total += std::pow(10.0, db / 10.0);
    return total;
}

int tap_count(double w_khz, double coherence_khz)
{
    if (!(w_khz > 0.0) || !(coherence_khz > 0.0))
        throw InvalidArgumentError("bandwidths must be positive");
    const double ratio = w_khz / coherence_khz;
    return std::max(1, static_cast<int>(std::ceil(ratio - 1e-9)));
}

UnderwaterSpec underwater_layout(double a, double h, double d_sd)
{
    if (!(d_sd > 0.0) || !(h >= 0.0))
        throw InvalidArgumentError("layout requires d_sd > 0 and h >= 0");
    UnderwaterSpec spec;
    spec.d_sd = d_sd;
    spec.d_sr = std::hypot(a, h);
    spec.d_rd = std::hypot(d_sd - a, h);
    return spec;
}

std::vector<double> underwater_band_centers(const UnderwaterSpec &spec)
{
    if (spec.n < 2)
        throw InvalidArgumentError("n must be at least 2");
    if (!(spec.f_c > 0.0) || !(spec.w > 0.0))
        throw InvalidArgumentError("carrier and bandwidth must be positive");
    std::vector<double> f(static_cast<size_t>(spec.n));
    for (int i = 0; i < spec.n; i++)
        f[static_cast<size_t>(i)] = spec.f_c - 0.5 * spec.w + (static_cast<double>(i) + 0.5) * spec.w / static_cast<double>(spec.n);
    if (!(f.front() > 0.0))
        throw InvalidArgumentError("the band must lie at positive frequencies (f_c > W/2)");
    return f;
}

std::vector<cplx> rayleigh_taps(int l, Rng &rng)
{
    if (l < 1)
        throw InvalidArgumentError("tap count must be at least 1");
    const double scale = std::sqrt(1.0 / static_cast<double>(l));
    std::vector<cplx> taps(static_cast<size_t>(l));
    for (auto &t : taps)
        t = scale * rng.complex_normal();
    return taps;
}

namespace
{

void check_underwater(const UnderwaterSpec &spec)
{
    if (!(spec.d_sr > 0.0) || !(spec.d_rd > 0.0) || !(spec.d_sd > 0.0))
        throw InvalidArgumentError("link distances must be positive");
    if (spec.l_sr < 1 || spec.l_sd < 1 || spec.l_rd < 1)
        throw InvalidArgumentError("tap counts must be at least 1");
    if (!(spec.a_0 > 0.0) || !(spec.k >= 0.0))
        throw InvalidArgumentError("attenuation parameters must be positive");
    if (!(spec.s >= 0.0) || !(spec.s <= 1.0) || !(spec.wind >= 0.0))
        throw InvalidArgumentError("noise parameters out of range");
}

// DFT of the tap vector at band i of n.
cplx tap_response(const std::vector<cplx> &taps, int i, int n)
{
    cplx acc(0.0, 0.0);
    for (size_t l = 0; l < taps.size(); l++)
    {
        const double phase = -2.0 * kPi * static_cast<double>(l) * static_cast<double>(i) / static_cast<double>(n);
        acc += taps[l] * cplx(std::cos(phase), std::sin(phase));
    }
    return acc;
}

} // namespace

SubbandChannel underwater_channel_draw(const UnderwaterSpec &spec, std::uint64_t draw_index)
{
    check_underwater(spec);
    const std::vector<double> freqs = underwater_band_centers(spec);
    Rng rng(spec.seed, draw_index);
    const std::vector<cplx> taps_sr = rayleigh_taps(spec.l_sr, rng);
    const std::vector<cplx> taps_sd = rayleigh_taps(spec.l_sd, rng);
    const std::vector<cplx> taps_rd = rayleigh_taps(spec.l_rd, rng);

    // Reference normalization: unit gain on the direct link at the carrier
    // (computed at A_0 = 1 so the configured A_0 still scales every link) and
    // unit noise PSD at the carrier. Power budgets then act as direct-link
    // SNR levels while all frequency-dependent shaping is preserved.
    const double g_ref = path_loss(spec.d_sd, spec.f_c, spec.k, 1.0);
    const double n_ref = ambient_noise_psd(spec.f_c, spec.s, spec.wind);

    const int n = spec.n;
    SubbandChannel ch;
    ch.n = n;
    ch.a_sr.resize(static_cast<size_t>(n));
    ch.a_sd.resize(static_cast<size_t>(n));
    ch.a_rd.resize(static_cast<size_t>(n));
    ch.h_sr.resize(static_cast<size_t>(n));
    ch.h_sd.resize(static_cast<size_t>(n));
    ch.h_rd.resize(static_cast<size_t>(n));
    ch.noise_r.resize(static_cast<size_t>(n));
    ch.noise_d.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; i++)
    {
        const size_t ui = static_cast<size_t>(i);
        const double f = freqs[ui];
        const double noise = ambient_noise_psd(f, spec.s, spec.wind) / n_ref;
        const double g_sr = path_loss(spec.d_sr, f, spec.k, spec.a_0) / g_ref;
        const double g_sd = path_loss(spec.d_sd, f, spec.k, spec.a_0) / g_ref;
        const double g_rd = path_loss(spec.d_rd, f, spec.k, spec.a_0) / g_ref;
        ch.h_sr[ui] = std::sqrt(g_sr) * tap_response(taps_sr, i, n);
        ch.h_sd[ui] = std::sqrt(g_sd) * tap_response(taps_sd, i, n);
        ch.h_rd[ui] = std::sqrt(g_rd) * tap_response(taps_rd, i, n);
        ch.noise_r[ui] = noise;
        ch.noise_d[ui] = noise;
        ch.a_sr[ui] = std::norm(ch.h_sr[ui]) / noise;
        ch.a_sd[ui] = std::norm(ch.h_sd[ui]) / noise;
        ch.a_rd[ui] = std::norm(ch.h_rd[ui]) / noise;
    }
    return ch;
}

double direct_waterfill_rate(const std::vector<double> &gains, double p_mean)
{
    const size_t n = gains.size();
    if (n == 0)
        throw InvalidArgumentError("gain vector must be nonempty");
    if (!(p_mean >= 0.0))
        throw InvalidArgumentError("power budget must be nonnegative");
    double inv_min = std::numeric_limits<double>::infinity();
    for (double a : gains)
    {
        if (!(a >= 0.0) || !std::isfinite(a))
            throw InvalidArgumentError("gains must be finite and nonnegative");
        if (a > 0.0)
            inv_min = std::min(inv_min, 1.0 / a);
    }
    if (!std::isfinite(inv_min) || p_mean <= 0.0)
        return 0.0;

    const auto used = [&](double nu) {
        double total = 0.0;
        for (double a : gains)
            if (a > 0.0)
                total += std::max(0.0, nu - 1.0 / a);
        return total / static_cast<double>(n);
    };
    double lo = inv_min, hi = inv_min + static_cast<double>(n) * p_mean + 1.0;
    for (int it = 0; it < 200; it++)
    {
        const double mid = 0.5 * (lo + hi);
        (used(mid) < p_mean ? lo : hi) = mid;
    }
    const double nu = 0.5 * (lo + hi);
    double rate = 0.0;
    for (double a : gains)
        if (a > 0.0)
            rate += std::log1p(a * std::max(0.0, nu - 1.0 / a));
    return rate / (2.0 * static_cast<double>(n));
}

double two_hop_rate(const std::vector<double> &a_sr, const std::vector<double> &a_rd, double p_t)
{
    if (a_sr.size() != a_rd.size() || a_sr.empty())
        throw InvalidArgumentError("hop gain vectors must be nonempty and match");
    if (!(p_t >= 0.0))
        throw InvalidArgumentError("power budget must be nonnegative");
    // min of two concave monotone terms of the split is concave.
    const auto value = [&](double x) {
        return std::min(direct_waterfill_rate(a_sr, x * p_t), direct_waterfill_rate(a_rd, (1.0 - x) * p_t));
    };
    return golden_max(value, 0.0, 1.0, 90);
}

UnderwaterRates underwater_rates(const SubbandChannel &ch, double p_t)
{
    UnderwaterRates out;
    out.df = solve_df_waterfill(ch, p_t).rate;
    out.direct = direct_waterfill_rate(ch.a_sd, p_t);
    out.two_hop = two_hop_rate(ch.a_sr, ch.a_rd, p_t);
    return out;
}

UnderwaterAverages underwater_average_rates(const UnderwaterSpec &spec, double p_t, int draws)
{
    if (draws < 1)
        throw InvalidArgumentError("draw count must be at least 1");
    UnderwaterAverages avg;
    for (int t = 0; t < draws; t++)
    {
        const SubbandChannel ch = underwater_channel_draw(spec, static_cast<std::uint64_t>(t));
        const UnderwaterRates r = underwater_rates(ch, p_t);
        avg.df += r.df;
        avg.direct += r.direct;
        avg.two_hop += r.two_hop;
    }
    avg.df /= static_cast<double>(draws);
    avg.direct /= static_cast<double>(draws);
    avg.two_hop /= static_cast<double>(draws);
    avg.draws = draws;
    return avg;
}

// ------------------------------------------------------------------------
// Symbol-asynchronous relay geometry

namespace
{

void check_asynch_geometry(const AsynchGeometry &geo)
{
    if (!(geo.d > 0.0) || !(geo.d < 1.0))
        throw InvalidArgumentError("relay position d must lie strictly inside (0, 1)");
    if (!(geo.alpha_att >= 0.0) || !(geo.t > 0.0))
        throw InvalidArgumentError("attenuation exponent must be nonnegative and the symbol period positive");
}

} // namespace

AsynchronyProfile asynch_profile(const AsynchGeometry &geo)
{
    check_asynch_geometry(geo);
    AsynchronyProfile prof;
    // Unit-energy rectangular pulses of width t overlap by 1 - |tau|/t with
    // tau = tau_SD - tau_RD = t d, independent of t itself.
    prof.rho_rs = 1.0 - geo.d;
    prof.rho_sr = geo.d;
    prof.sigma2_r = std::pow(geo.d, geo.alpha_att);
    prof.sigma2_d = 1.0;
    return prof;
}

double asynch_relay_power_gain(const AsynchGeometry &geo)
{
    check_asynch_geometry(geo);
    return std::pow(1.0 - geo.d, -geo.alpha_att);
}

double worst_case_asynch_rate(const AsynchSegment &seg, const PowerAllocation &alloc)
{
    if (!(seg.rho_rs_lo >= 0.0) || !(seg.rho_rs_hi <= 1.0) || !(seg.rho_rs_lo <= seg.rho_rs_hi))
        throw InvalidArgumentError("the uncertainty segment requires 0 <= lo <= hi <= 1");
    const auto rate_at = [&](double rho_rs) {
        AsynchronyProfile prof;
        prof.rho_rs = rho_rs;
        prof.rho_sr = 1.0 - rho_rs;
        prof.sigma2_r = seg.sigma2_r;
        prof.sigma2_d = seg.sigma2_d;
        return asynch_df_rate(prof, alloc).rate;
    };
    if (seg.rho_rs_hi - seg.rho_rs_lo < 1e-15)
        return rate_at(seg.rho_rs_lo);

    // Coarse scan to bracket the infimum, then golden-section to width 1e-8.
    const int scan = 65;
    double best = std::numeric_limits<double>::infinity();
    int best_k = 0;
    for (int k = 0; k < scan; k++)
    {
        const double x = seg.rho_rs_lo + (seg.rho_rs_hi - seg.rho_rs_lo) * static_cast<double>(k) / (scan - 1);
        const double v = rate_at(x);
        if (v < best)
        {
            best = v;
            best_k = k;
        }
    }
    const double step = (seg.rho_rs_hi - seg.rho_rs_lo) / (scan - 1);
    double a = std::max(seg.rho_rs_lo, seg.rho_rs_lo + step * (best_k - 1));
    double b = std::min(seg.rho_rs_hi, seg.rho_rs_lo + step * (best_k + 1));
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = rate_at(x1), f2 = rate_at(x2);
    while (b - a > 1e-8)
    {
        if (f1 > f2)
        {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = rate_at(x2);
        }
        else
        {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = rate_at(x1);
        }
    }
    return std::min({best, f1, f2, rate_at(0.5 * (a + b))});
}

namespace
{

// min(c1, c2) maximized over the per-band coherence profile alpha(w) at fixed
// uniform powers; joint selects the cut-set broadcast gain.
double asynch_maximin_alpha(const AsynchronyProfile &prof, int n, double p_s, double p_r, bool joint)
{
    PowerAllocation alloc = PowerAllocation::uniform(n, p_s, p_r, 1.0);
    const double g1 = joint ? 1.0 / prof.sigma2_r + 1.0 / prof.sigma2_d : 1.0 / prof.sigma2_r;
    const double s2d = prof.sigma2_d;

    const auto fill_alphas = [&](double lam) {
        for (int i = 0; i < n; i++)
        {
            const double w = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
            const double rho = prof.rho(w);
            const auto objective = [&](double alpha) {
                const double coherent = p_s + p_r + 2.0 * std::sqrt((1.0 - alpha) * p_s * p_r) * rho;
                const double mimo = alpha * p_s * p_r * (1.0 - rho * rho);
                return lam * std::log1p(g1 * alpha * p_s) + (1.0 - lam) * std::log1p(coherent / s2d + mimo / (s2d * s2d));
            };
            scan_golden_max(objective, 0.0, 1.0, 41, 60, &alloc.alpha[static_cast<size_t>(i)]);
        }
    };
    const auto cuts = [&](double lam) {
        fill_alphas(lam);
        return joint ? asynch_cutset_rate(prof, alloc) : asynch_df_rate(prof, alloc);
    };

    double lo = 1e-9, hi = 1.0 - 1e-9;
    CutRates r_lo = cuts(lo), r_hi = cuts(hi);
    double best = std::max(r_lo.rate, r_hi.rate);
    if (r_lo.c1 >= r_lo.c2 || r_hi.c1 <= r_hi.c2)
        return best; // the binding cut never flips: a boundary solution
    for (int it = 0; it < 60; it++)
    {
        const double mid = 0.5 * (lo + hi);
        const CutRates r = cuts(mid);
        best = std::max(best, r.rate);
        (r.c1 < r.c2 ? lo : hi) = mid;
    }
    return best;
}

struct AsynchCfPoint
{
    double rate = 0.0;
    double slack = 0.0;
};

// Per-band compression chosen to maximize rate + theta * slack; larger theta
// weights feasibility more and monotonically raises the aggregate slack.
AsynchCfPoint asynch_cf_at_theta(const AsynchronyProfile &prof, int n, double p_s, double p_r, double theta,
                                 CompressionProfile *out_comp = nullptr)
{
    CompressionProfile comp = CompressionProfile::uniform(n, 1.0);
    const double s2r = prof.sigma2_r, s2d = prof.sigma2_d;
    for (int i = 0; i < n; i++)
    {
        const double w = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
        const double rho = prof.rho(w);
        const double ps_d = p_s / s2d, pr_d = p_r / s2d;
        const double det = (1.0 + ps_d) * (1.0 + pr_d) - ps_d * pr_d * rho * rho;
        const auto gain = [&](double log_nh) {
            const double nh = std::exp(log_nh);
            const double A = (1.0 + ps_d) * (s2r + nh) + p_s;
            const double B = nh * det;
            return 0.5 * std::log(A / (s2r + nh)) + theta * std::log(B / A);
        };
        double log_best = 0.0;
        scan_golden_max(gain, std::log(1e-13), std::log(1e13), 53, 70, &log_best);
        comp.nhat[static_cast<size_t>(i)] = std::exp(log_best);
    }
    const PowerAllocation alloc = PowerAllocation::uniform(n, p_s, p_r, 1.0);
    const CfRate r = asynch_cf_rate(prof, alloc, comp);
    if (out_comp != nullptr)
        *out_comp = comp;
    return {r.rate, r.slack};
}

} // namespace

AsynchBoundsResult asynch_bounds(const AsynchGeometry &geo, int n, double p_s, double p_r)
{
    if (n < 2)
        throw InvalidArgumentError("n must be at least 2");
    if (!(p_s >= 0.0) || !(p_r >= 0.0))
        throw InvalidArgumentError("power budgets must be nonnegative");
    const AsynchronyProfile prof = asynch_profile(geo);
    const double p_r_eff = p_r * asynch_relay_power_gain(geo);

    AsynchBoundsResult out;
    out.df = asynch_maximin_alpha(prof, n, p_s, p_r_eff, false);
    out.cutset = asynch_maximin_alpha(prof, n, p_s, p_r_eff, true);

    // Feasibility slack rises with theta; bisect to the smallest feasible
    // compression (the rate falls as the compression noise grows).
    double t_lo = 1e-9, t_hi = 1.0;
    AsynchCfPoint hi_pt = asynch_cf_at_theta(prof, n, p_s, p_r_eff, t_hi);
    int grow = 0;
    while (hi_pt.slack < 0.0 && grow < 40)
    {
        t_hi *= 2.0;
        hi_pt = asynch_cf_at_theta(prof, n, p_s, p_r_eff, t_hi);
        grow++;
    }
    if (hi_pt.slack < 0.0)
    {
        // No compression level satisfies the constraint (a dead relay link):
        // report the closest-to-feasible point found.
        out.cf = hi_pt.rate;
        out.cf_slack = hi_pt.slack;
        out.cf_feasible = false;
        return out;
    }
    AsynchCfPoint best_feasible = hi_pt;
    for (int it = 0; it < 70; it++)
    {
        const double mid = 0.5 * (t_lo + t_hi);
        const AsynchCfPoint p = asynch_cf_at_theta(prof, n, p_s, p_r_eff, mid);
        if (p.slack >= 0.0)
        {
            t_hi = mid;
            if (p.rate > best_feasible.rate)
                best_feasible = p;
        }
        else
        {
            t_lo = mid;
        }
    }
    out.cf = best_feasible.rate;
    out.cf_slack = best_feasible.slack;
    out.cf_feasible = true;
    return out;
}

} // namespace relaycap
