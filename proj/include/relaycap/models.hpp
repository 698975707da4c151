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
//
// Concrete channel scenarios built on the core bounds and optimizers:
//  - ideal lowpass relays with equal and unequal link bandwidths,
//  - the two-subcarrier relay-permutation experiment,
//  - the underwater acoustic model (Thorp absorption, four-component ambient
//    noise, Rayleigh tapped-delay-line fading),
//  - the symbol-asynchronous relay geometry and its worst-case rates.
//
// Capacities of the lowpass scenarios are W times the per-channel-use rate
// (nats); everything else reports nats per channel use, as in bounds.hpp.

#ifndef RELAYCAP_MODELS_HPP
#define RELAYCAP_MODELS_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "relaycap/bounds.hpp"
#include "relaycap/channel.hpp"
#include "relaycap/rng.hpp"

namespace relaycap
{

// ------------------------------------------------------------------------
// Ideal lowpass relays

// Three links that are ideal lowpass filters with AWGN: relay noise PSD N_1,
// destination noise PSD N = N_1 + N_2. `w` is the common bandwidth of the
// equal-bandwidth case; `w_sr`, `w_sd`, `w_rd` are the per-link bandwidths of
// the unequal case (w_sd <= w_sr and w_sd <= w_rd).
struct LowpassRelaySpec
{
    double w = 1.0;
    double w_sr = 1.0, w_sd = 1.0, w_rd = 1.0;
    double n_1 = 1.0, n_2 = 1.0;
    double p_s = 0.0, p_r = 0.0;
};

struct EqualBandwidthResult
{
    double capacity = 0.0; // nats per second
    double alpha_star = 1.0;
};

// Capacity of the equal-bandwidth lowpass relay (degraded, so DF-tight):
// W C(P_S/(N_1 W)) with alpha* = 1 when P_S/N_1 <= P_R/N_2, otherwise
// W C(alpha* P_S/(N_1 W)) with alpha* equating the two cuts. C(x) is
// (1/2) log(1+x), matching the per-use convention of the rest of the library.
EqualBandwidthResult equal_bandwidth_capacity(const LowpassRelaySpec &spec);

struct UnequalBandwidthResult
{
    double capacity = 0.0; // nats per second
    double p_s1 = 0.0, p_s2 = 0.0; // source power on the relay part / 2-hop part
    double p_r1 = 0.0, p_r2 = 0.0; // relay power on the relay part / 2-hop part
};

// Capacity of the unequal-bandwidth lowpass relay: the network splits into a
// degraded relay of bandwidth W_SD plus a two-hop channel on the excess
// bandwidths (W_SR - W_SD toward the relay, W_RD - W_SD toward the
// destination). The power split across the two parts is optimized by nested
// golden-section search on the concave two-term sum.
UnequalBandwidthResult unequal_bandwidth_capacity(const LowpassRelaySpec &spec);

// ------------------------------------------------------------------------
// Two-subcarrier permutation experiment

// DF rate of a 2-band channel when the relay re-sends the stream decoded on
// band i over band pi(i), maximized over the power split and coherence
// weights. The identity permutation keeps the per-band cooperative cross
// term; a swap makes the relay transmission on each band independent of the
// fresh source signal there, so the coherent term disappears and only the
// power-sum MAC cut remains. `pi` may be 0- or 1-based.
double permutation_experiment(const SubbandChannel &ch, double p_s_budget, double p_r_budget,
                              const std::array<int, 2> &pi);

// ------------------------------------------------------------------------
// Underwater acoustic model

// Thorp absorption coefficient 10 log10 a(f) in dB/km for f in kHz.
double thorp_absorption(double f_khz);

// Linear path gain 1/A(d, f) with A(d, f) = A_0 d^k a(f)^d (d in km).
double path_loss(double d_km, double f_khz, double k, double a_0);

// The four ambient-noise components (turbulence, shipping, waves, thermal) in
// dB re uPa per Hz, and their linear-domain sum.
std::array<double, 4> ambient_noise_components_db(double f_khz, double s, double w);
double ambient_noise_psd(double f_khz, double s, double w);

// Number of resolvable multipath taps: ceil of delay spread over the symbol
// period, L = ceil((1/coherence_khz)/(1/w_khz)), at least 1.
int tap_count(double w_khz, double coherence_khz);

// A three-node underwater scenario: distances in km, carrier and bandwidth in
// kHz, Thorp/spreading attenuation, four-component ambient noise, and
// independent Rayleigh tapped-delay-line fading per link with `l_*` taps of
// equal variance summing to one.
struct UnderwaterSpec
{
    double d_sr = 0.5, d_rd = 0.5, d_sd = 1.0; // km
    double f_c = 27.0;                         // carrier, kHz
    double w = 10.0;                           // bandwidth, kHz
    double k = 1.5;                            // spreading factor
    double a_0 = 1.0;                          // attenuation constant
    double s = 0.0;                            // shipping activity in [0, 1]
    double wind = 10.0;                        // wind speed, m/s
    int l_sr = 3, l_sd = 2, l_rd = 3;          // taps per link
    int n = 64;                                // subbands for rate evaluation
    std::uint64_t seed = 1;
};

// Right-triangle layout used by the relay-position sweep: source at the
// origin, destination at (d_sd, 0), relay at (a, h). Fills the distances and
// leaves every other field at its default.
UnderwaterSpec underwater_layout(double a, double h, double d_sd);

// Band-center frequencies f_c - W/2 + (i + 1/2) W/n, in kHz.
std::vector<double> underwater_band_centers(const UnderwaterSpec &spec);

// `l` i.i.d. complex Gaussian taps with per-tap variance 1/l (unit total).
std::vector<cplx> rayleigh_taps(int l, Rng &rng);

// One fading draw of the scenario as a SubbandChannel. Deterministic function
// of (spec.seed, draw_index), so draws can be evaluated in any order or in
// parallel. Gains are normalized to the reference link (source-destination
// path gain at the carrier with A_0 = 1) and noise spectra to the ambient PSD
// at the carrier, so power budgets are SNR-like quantities on the direct link
// rather than absolute acoustic pressures; the normalization preserves every
// frequency-dependent shape and the A_0 scaling.
SubbandChannel underwater_channel_draw(const UnderwaterSpec &spec, std::uint64_t draw_index);

// Classic single-link water-filling rate (1/2n) sum log(1 + a_i p_i) under a
// mean power budget; used for the direct and per-hop baselines.
double direct_waterfill_rate(const std::vector<double> &gains, double p_mean);

// Decode-and-forward over two hops with no direct reception: the total mean
// power budget is split between the hops by golden-section search and each
// hop water-fills its share.
double two_hop_rate(const std::vector<double> &a_sr, const std::vector<double> &a_rd, double p_t);

struct UnderwaterRates
{
    double df = 0.0;
    double direct = 0.0;
    double two_hop = 0.0;
};

// The three §-style comparison rates of one fading draw at a shared total
// mean power budget: cooperative DF (solve_df_waterfill), direct transmission
// (source water-fill), and two-hop relaying.
UnderwaterRates underwater_rates(const SubbandChannel &ch, double p_t);

struct UnderwaterAverages
{
    double df = 0.0;
    double direct = 0.0;
    double two_hop = 0.0;
    int draws = 0;
};

// Monte-Carlo average of underwater_rates over `draws` seeded fading draws.
UnderwaterAverages underwater_average_rates(const UnderwaterSpec &spec, double p_t, int draws);

// ------------------------------------------------------------------------
// Symbol-asynchronous relay geometry

// Collinear nodes: source at 0, destination at 1, relay at d in (0, 1), with
// inverse-power-law amplitude gains d^(-alpha_att/2) (S->R),
// (1-d)^(-alpha_att/2) (R->D) and 1 (S->D), unit-energy rectangular
// modulating waveforms of width t, and propagation delays proportional to
// distance.
struct AsynchGeometry
{
    double d = 0.5;
    double alpha_att = 2.0;
    double t = 1.0;
};

// Waveform cross-correlations of the rectangular overlap geometry:
// rho_rs = 1 - d, rho_sr = d (closed form; tau_SD - tau_RD = t d). The S->R
// link gain is absorbed as the equivalent relay noise sigma2_r = d^alpha_att;
// the R->D gain must be applied by the caller as a relay power scale (see
// asynch_relay_power_gain); the S->D gain is unity. Throws on d outside (0,1).
AsynchronyProfile asynch_profile(const AsynchGeometry &geo);

// (1 - d)^(-alpha_att): multiply the relay power by this before evaluating
// the normalized rate formulas.
double asynch_relay_power_gain(const AsynchGeometry &geo);

// Sub-segment of the rectangular-waveform uncertainty set
// {rho_rs + rho_sr = 1, both >= 0}, parameterized by rho_rs.
struct AsynchSegment
{
    double rho_rs_lo = 0.0;
    double rho_rs_hi = 1.0;
    double sigma2_r = 1.0, sigma2_d = 1.0;
};

// Infimum of the DF rate over the uncertainty segment at a fixed allocation:
// coarse scan plus golden-section refinement to width 1e-8.
double worst_case_asynch_rate(const AsynchSegment &seg, const PowerAllocation &alloc);

struct AsynchBoundsResult
{
    double df = 0.0;
    double cf = 0.0;
    double cutset = 0.0;
    double cf_slack = 0.0;   // compression-constraint slack of the reported CF point
    bool cf_feasible = true; // false when no compression profile satisfies the constraint
};

// DF, CF and cut-set rates of the asynchronous geometry at uniform power
// spectral densities (p_s, p_r budgets fully spent). DF and the cut-set bound
// are maximized over the per-band coherence profile alpha(w) by dual
// bisection; CF is maximized over the per-band compression profile Nhat(w)
// subject to the aggregate feasibility constraint.
AsynchBoundsResult asynch_bounds(const AsynchGeometry &geo, int n, double p_s, double p_r);

} // namespace relaycap

#endif // RELAYCAP_MODELS_HPP
