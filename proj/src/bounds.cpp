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

#include "relaycap/bounds.hpp"

#include <cmath>
#include <sstream>

#include "relaycap/constants.hpp"
#include "relaycap/errors.hpp"

namespace relaycap
{

namespace
{

// Largest accepted SNR-per-unit-power gain; beyond this the logs lose all
// precision and optimizers would chase unbounded water levels.
constexpr double kMaxGain = 1e15;

void check_gain(double a, const char *name, int band)
{
    if (!(a >= 0.0) || a > kMaxGain)
    {
        std::ostringstream os;
        os << name << " gain " << a << " at band " << (band + 1) << " is outside [0, 1e15]";
        throw InvalidArgumentError(os.str());
    }
}

void check_dimensions(const SubbandChannel &ch, const PowerAllocation &alloc, bool need_alpha)
{
    const auto n = static_cast<size_t>(ch.n);
    if (ch.n <= 0 || ch.a_sr.size() != n || ch.a_sd.size() != n || ch.a_rd.size() != n)
        throw InvalidArgumentError("subband channel has inconsistent band count");
    if (alloc.p_s.size() != n || alloc.p_r.size() != n)
        throw InvalidArgumentError("allocation dimensions do not match the channel band count");
    if (need_alpha && alloc.alpha.size() != n)
        throw InvalidArgumentError("allocation is missing per-band alpha values");
    for (size_t i = 0; i < n; i++)
    {
        check_gain(ch.a_sr[i], "a_SR", static_cast<int>(i));
        check_gain(ch.a_sd[i], "a_SD", static_cast<int>(i));
        check_gain(ch.a_rd[i], "a_RD", static_cast<int>(i));
        if (!(alloc.p_s[i] >= 0.0) || !(alloc.p_r[i] >= 0.0))
            throw InvalidArgumentError("powers must be nonnegative");
        if (need_alpha && (!(alloc.alpha[i] >= 0.0) || alloc.alpha[i] > 1.0))
            throw InvalidArgumentError("alpha must lie in [0, 1]");
    }
}

// Shared c2 (MAC cut) integrand of DF and the cut-set bound.
double mac_cut_snr(double a_sd, double a_rd, double p_s, double p_r, double alpha)
{
    const double abar = 1.0 - alpha;
    return a_sd * p_s + a_rd * p_r + 2.0 * std::sqrt(abar * a_sd * a_rd * p_s * p_r);
}

CutRates min_cut_rates(const SubbandChannel &ch, const PowerAllocation &alloc, bool joint_reception)
{
    check_dimensions(ch, alloc, true);
    const auto n = static_cast<size_t>(ch.n);
    double c1 = 0.0, c2 = 0.0;
    for (size_t i = 0; i < n; i++)
    {
        const double a1 = joint_reception ? ch.a_sr[i] + ch.a_sd[i] : ch.a_sr[i];
        c1 += std::log1p(alloc.alpha[i] * a1 * alloc.p_s[i]);
        c2 += std::log1p(mac_cut_snr(ch.a_sd[i], ch.a_rd[i], alloc.p_s[i], alloc.p_r[i], alloc.alpha[i]));
    }
    const double scale = 1.0 / (2.0 * static_cast<double>(n));
    CutRates r;
    r.c1 = scale * c1;
    r.c2 = scale * c2;
    r.rate = std::min(r.c1, r.c2);
    return r;
}

} // namespace

CompressionProfile CompressionProfile::uniform(int n, double nhat)
{
    CompressionProfile c;
    c.nhat.assign(static_cast<size_t>(n), nhat);
    return c;
}

const char *binding_name(Binding b)
{
    switch (b)
    {
    case Binding::BroadcastCut:
        return "broadcast-cut";
    case Binding::MacCut:
        return "MAC-cut";
    case Binding::CompressionConstraint:
        return "compression-constraint";
    }
    return "unknown";
}

CutRates df_rate(const SubbandChannel &ch, const PowerAllocation &alloc)
{
    return min_cut_rates(ch, alloc, false);
}

CutRates cutset_rate(const SubbandChannel &ch, const PowerAllocation &alloc)
{
    return min_cut_rates(ch, alloc, true);
}

CfRate cf_rate(const SubbandChannel &ch, const PowerAllocation &alloc, const CompressionProfile &comp)
{
    check_dimensions(ch, alloc, false);
    const auto n = static_cast<size_t>(ch.n);
    if (comp.nhat.size() != n)
        throw InvalidArgumentError("compression profile dimensions do not match the channel band count");
    if (ch.noise_r.size() != n || ch.noise_d.size() != n || ch.h_sr.size() != n || ch.h_sd.size() != n ||
        ch.h_rd.size() != n)
        throw InvalidArgumentError("CF evaluation needs the raw spectra (H and N per band)");

    double rate = 0.0, slack = 0.0;
    for (size_t i = 0; i < n; i++)
    {
        const double nhat_r = comp.nhat[i];
        if (!(nhat_r > 0.0))
            throw InvalidArgumentError("compression noise must be strictly positive in every band");
        const double n_r = ch.noise_r[i];
        const double n_d = ch.noise_d[i];
        const double nhat = n_r + nhat_r; // total effective relay noise
        const double p_s = alloc.p_s[i], p_r = alloc.p_r[i];
        const double h2_sr = std::norm(ch.h_sr[i]);
        const double h2_sd = std::norm(ch.h_sd[i]);
        const double h2_rd = std::norm(ch.h_rd[i]);

        rate += std::log1p(p_s * (ch.a_sd[i] + ch.a_sr[i] * n_r / nhat));

        // Compression-rate constraint, accumulated in sum-of-logs units.
        const double rhs = (p_s * (h2_sr * n_d + h2_sd * nhat) + nhat * n_d) / (h2_sd * p_s + h2_rd * p_r + n_d);
        slack += std::log(nhat_r) - std::log(rhs);
    }
    CfRate out;
    out.rate = rate / (2.0 * static_cast<double>(n));
    out.slack = slack;
    return out;
}

double cf_modified_rate(const SubbandChannel &ch, const PowerAllocation &alloc)
{
    check_dimensions(ch, alloc, false);
    const auto n = static_cast<size_t>(ch.n);
    double rate = 0.0;
    for (size_t i = 0; i < n; i++)
    {
        const double p_s = alloc.p_s[i], p_r = alloc.p_r[i];
        const double a_sd = ch.a_sd[i], a_sr = ch.a_sr[i], a_rd = ch.a_rd[i];
        // Relay contribution vanishes smoothly as a_RD P_R -> 0.
        double relay_term = 0.0;
        if (a_rd * p_r > 0.0)
            relay_term = a_sr * p_s / (1.0 + (1.0 + (a_sd + a_sr) * p_s) / (a_rd * p_r));
        rate += std::log1p(a_sd * p_s + relay_term);
    }
    return rate / (2.0 * static_cast<double>(n));
}

bool is_degraded(const SubbandChannel &ch)
{
    for (size_t i = 0; i < ch.a_sr.size(); i++)
        if (ch.a_sr[i] < ch.a_sd[i])
            return false;
    return true;
}

double cf_q_from_nhat(double nhat_norm, double a_sr, double a_sd, double p_s)
{
    if (!(nhat_norm > 0.0))
        throw InvalidArgumentError("normalized compression noise must be positive");
    const double big_a = 1.0 + p_s * (a_sr + a_sd);
    return nhat_norm * big_a / (big_a + nhat_norm * (1.0 + a_sd * p_s));
}

double cf_nhat_from_q(double q, double a_sr, double a_sd, double p_s)
{
    const double big_a = 1.0 + p_s * (a_sr + a_sd);
    const double den = big_a - q * (1.0 + a_sd * p_s);
    if (!(q > 0.0) || den <= 0.0)
        throw InvalidArgumentError("q outside the representable range (0, (1+P A)/(1+P a_SD))");
    return q * big_a / den;
}

double cf_substituted_band_rate(double q, double a_sr, double a_sd, double p_s)
{
    const double big_a = 1.0 + p_s * (a_sr + a_sd);
    return 0.5 * std::log(big_a * big_a / (1.0 + p_s * (a_sr * (1.0 + q) + a_sd)));
}

double AsynchronyProfile::rho(double omega) const
{
    return rho_rs + rho_sr * std::cos(omega);
}

namespace
{

void check_asynch(const AsynchronyProfile &prof, const PowerAllocation &alloc, bool need_alpha)
{
    const size_t n = alloc.p_s.size();
    if (n == 0 || alloc.p_r.size() != n)
        throw InvalidArgumentError("allocation must define matching per-band powers");
    if (need_alpha && alloc.alpha.size() != n)
        throw InvalidArgumentError("allocation is missing per-band alpha values");
    if (!(prof.sigma2_r > 0.0) || !(prof.sigma2_d > 0.0))
        throw InvalidArgumentError("noise powers must be positive");
    for (size_t i = 0; i < n; i++)
    {
        const double w = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
        if (std::abs(prof.rho(w)) > 1.0 + 1e-12)
        {
            std::ostringstream os;
            os << "invalid waveform correlation: |rho(w)| = " << std::abs(prof.rho(w)) << " > 1 at band "
               << (i + 1);
            throw InvalidWaveformError(os.str());
        }
    }
}

CutRates asynch_min_cut(const AsynchronyProfile &prof, const PowerAllocation &alloc, bool joint_reception)
{
    check_asynch(prof, alloc, true);
    const size_t n = alloc.p_s.size();
    const double g1 = joint_reception ? 1.0 / prof.sigma2_r + 1.0 / prof.sigma2_d : 1.0 / prof.sigma2_r;
    double c1 = 0.0, c2 = 0.0;
    for (size_t i = 0; i < n; i++)
    {
        const double w = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
        const double rho = prof.rho(w);
        const double p_s = alloc.p_s[i], p_r = alloc.p_r[i], alpha = alloc.alpha[i];
        c1 += std::log1p(g1 * alpha * p_s);
        const double coherent = p_s + p_r + 2.0 * std::sqrt((1.0 - alpha) * p_s * p_r) * rho;
        const double mimo = alpha * p_s * p_r * (1.0 - rho * rho);
        c2 += std::log1p(coherent / prof.sigma2_d + mimo / (prof.sigma2_d * prof.sigma2_d));
    }
    const double scale = 1.0 / (2.0 * static_cast<double>(n));
    CutRates r;
    r.c1 = scale * c1;
    r.c2 = scale * c2;
    r.rate = std::min(r.c1, r.c2);
    return r;
}

} // namespace

CutRates asynch_df_rate(const AsynchronyProfile &prof, const PowerAllocation &alloc)
{
    return asynch_min_cut(prof, alloc, false);
}

CutRates asynch_cutset_rate(const AsynchronyProfile &prof, const PowerAllocation &alloc)
{
    return asynch_min_cut(prof, alloc, true);
}

CfRate asynch_cf_rate(const AsynchronyProfile &prof, const PowerAllocation &alloc, const CompressionProfile &comp)
{
    check_asynch(prof, alloc, false);
    const size_t n = alloc.p_s.size();
    if (comp.nhat.size() != n)
        throw InvalidArgumentError("compression profile dimensions do not match the allocation");

    // General-noise form. With sigma2_r = sigma2_d = 1 this reduces exactly to
    //   A = 1 + nhat + 2 P_S + nhat P_S,
    //   B = nhat ((1+P_S)(1+P_R) - P_S P_R rho^2):
    // the unit-noise special case. The sigma2_r placement is fixed by the
    // rho = 0 factorization A/(1 + P_S/sigma2_d) = nhat + Var(y_R | y_D), where
    // the constraint decouples into the plain two-hop form
    // log(1 + Var(y_R|y_D)/nhat) <= log(1 + P_R/sigma2_d).
    double rate = 0.0, slack = 0.0;
    for (size_t i = 0; i < n; i++)
    {
        const double w = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
        const double rho = prof.rho(w);
        const double p_s = alloc.p_s[i], p_r = alloc.p_r[i];
        const double nh = comp.nhat[i];
        if (!(nh > 0.0))
            throw InvalidArgumentError("compression noise must be strictly positive in every band");
        const double ps_d = p_s / prof.sigma2_d;
        const double pr_d = p_r / prof.sigma2_d;
        const double A = (1.0 + ps_d) * (prof.sigma2_r + nh) + p_s;
        const double B = nh * ((1.0 + ps_d) * (1.0 + pr_d) - ps_d * pr_d * rho * rho);
        rate += std::log(A / (prof.sigma2_r + nh));
        slack += std::log(B / A);
    }
    CfRate out;
    out.rate = rate / (2.0 * static_cast<double>(n));
    out.slack = slack;
    return out;
}

} // namespace relaycap
