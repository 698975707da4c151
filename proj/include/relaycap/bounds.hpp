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
// Rate bounds of the decomposed relay channel: decode-and-forward (DF),
// compress-and-forward (CF), the cut-set upper bound, and the normalized
// symbol-asynchronous variants.
//
// Conventions shared by every function here:
//  - rates are (1/2n) * sum_i log(1 + snr_i) in nats per real-dimension
//    channel use; natural logarithms throughout, bit conversion happens at
//    the CLI layer only;
//  - slack >= 0 marks a feasible compression profile, negative slack marks an
//    infeasible one (reported, never silently clamped);
//  - per-band SNR gains above 1e15 are rejected to keep the logs finite.

#ifndef RELAYCAP_BOUNDS_HPP
#define RELAYCAP_BOUNDS_HPP

#include <vector>

#include "relaycap/channel.hpp"

namespace relaycap
{

// Per-band quantization-noise variances of the relay's compression stage, in
// the same power units as the noise spectra.
struct CompressionProfile
{
    std::vector<double> nhat; // variances, > 0 per band

    static CompressionProfile uniform(int n, double nhat);
};

// Breakdown of a min-of-two-cuts bound: the broadcast cut c1, the MAC cut c2,
// and the binding rate min(c1, c2). All in nats per channel use.
struct CutRates
{
    double c1 = 0.0;
    double c2 = 0.0;
    double rate = 0.0;
};

// Outcome of a CF evaluation: achievable rate and the compression constraint
// slack (sum-of-logs units; >= 0 iff the profile is feasible).
struct CfRate
{
    double rate = 0.0;
    double slack = 0.0;
};

// Which constraint binds a reported bound.
enum class Binding
{
    BroadcastCut,
    MacCut,
    CompressionConstraint
};

const char *binding_name(Binding b);

// Jointly optimized bounds of one channel, for reporting.
struct RateBounds
{
    double c_df = 0.0;
    double c_cf = 0.0;
    double c_up = 0.0;
    Binding df_binding = Binding::BroadcastCut;
    Binding cf_binding = Binding::CompressionConstraint;
    Binding up_binding = Binding::BroadcastCut;
};

// Decode-and-forward achievable rate at a fixed allocation:
//   c1 = (1/2n) sum log(1 + alpha a_SR P_S)
//   c2 = (1/2n) sum log(1 + a_SD P_S + a_RD P_R
//                         + 2 sqrt((1-alpha) a_SD a_RD P_S P_R))
CutRates df_rate(const SubbandChannel &ch, const PowerAllocation &alloc);

// Cut-set upper bound at a fixed allocation: c1 replaces a_SR by
// (a_SR + a_SD) (the relay and destination observe jointly); c2 equals DF's.
CutRates cutset_rate(const SubbandChannel &ch, const PowerAllocation &alloc);

// Compress-and-forward rate and feasibility slack at a fixed allocation and
// compression profile. alloc.alpha is ignored (independent inputs).
CfRate cf_rate(const SubbandChannel &ch, const PowerAllocation &alloc, const CompressionProfile &comp);

// Modified CF rate with the closed-form per-band compression choice; a lower
// bound on the optimized CF rate that is concave in the powers.
double cf_modified_rate(const SubbandChannel &ch, const PowerAllocation &alloc);

// True iff a_SR(i) >= a_SD(i) in every band.
bool is_degraded(const SubbandChannel &ch);

// Compression reparametrization q <-> nhat used by the CF optimizer. `nhat`
// is normalized to the local relay noise level (nhat_norm = Nhat_R / N_R).
double cf_q_from_nhat(double nhat_norm, double a_sr, double a_sd, double p_s);
double cf_nhat_from_q(double q, double a_sr, double a_sd, double p_s);

// Substituted per-band CF objective 0.5 log[(1+P A)^2 / (1+P(a_SR(1+q)+a_SD))]
// with A = a_SR + a_SD; equals the CF rate term at nhat(q).
double cf_substituted_band_rate(double q, double a_sr, double a_sd, double p_s);

// ------------------------------------------------------------------------
// Symbol-asynchronous variants (normalized channel: unit link gains; relay
// and destination noise powers sigma2_r, sigma2_d; waveform cross-correlation
// rho(w) = rho_rs + rho_sr cos w on the uniform grid w_i = 2 pi i / n).

struct AsynchronyProfile
{
    double rho_rs = 0.0;
    double rho_sr = 0.0;
    double sigma2_r = 1.0; // relay noise power
    double sigma2_d = 1.0; // destination noise power

    double rho(double omega) const;
};

// DF achievable rate (min of the two discretized integrals); grid size is
// alloc's band count. Throws InvalidWaveformError if |rho(w_i)| > 1.
CutRates asynch_df_rate(const AsynchronyProfile &prof, const PowerAllocation &alloc);

// Cut-set upper bound: c1 gain becomes (1/sigma2_r + 1/sigma2_d) alpha P_S.
CutRates asynch_cutset_rate(const AsynchronyProfile &prof, const PowerAllocation &alloc);

// CF rate (1/4pi) Int log(A/(sigma2_r+Nhat_R)) with the constraint
// Int log(A/B) <= 0 returned as slack = sum_i log(B_i/A_i) (>= 0 iff
// feasible); A = (1+P_S/sigma2_d)(sigma2_r+Nhat) + P_S and
// B = Nhat((1+P_S/sigma2_d)(1+P_R/sigma2_d) - P_S P_R rho^2/sigma2_d^2),
// the unit-noise forms with the noise powers restored.
CfRate asynch_cf_rate(const AsynchronyProfile &prof, const PowerAllocation &alloc, const CompressionProfile &comp);

} // namespace relaycap

#endif // RELAYCAP_BOUNDS_HPP
