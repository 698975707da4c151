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

#include "relaycap/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "relaycap/constants.hpp"
#include "relaycap/errors.hpp"

namespace relaycap
{

namespace
{

double mean_of(const std::vector<double> &v)
{
    if (v.empty())
        return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// ------------------------------------------------------------------------
// Maximin DF / cut-set solver.
//
// Inner problem at fixed weight lam and dual prices (mu_s, mu_r), per band:
//
//   max over u, v, w >= 0 of
//     (lam/2) log(1 + a u) + ((1-lam)/2) log(1 + a_sd (u+v) + a_rd w
//                                             + 2 sqrt(a_sd a_rd v w))
//     - mu_s (u + v) - mu_r w
//
// with u = alpha P_S, v = (1-alpha) P_S, w = P_R and a the broadcast-cut
// gain. Substituting the coherent power t = (sqrt(a_sd v) + sqrt(a_rd w))^2
// and buying it at its cheapest split leaves a two-variable concave problem
// in (u, t) whose KKT points are closed-form; the optimum is either interior
// in t or on the t = 0 face, so both candidates are evaluated exactly.

struct BandPoint
{
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;
    double phi = 0.0;
};

BandPoint solve_maximin_band(double a, double a_sd, double a_rd, double lam, double mu_s, double mu_r)
{
    const double lbar = 1.0 - lam;
    const double a_c = a_sd / mu_s + a_rd / mu_r; // marginal coherent power per unit cost

    auto phi_of = [&](double u, double t) {
        double val = 0.5 * lbar * std::log1p(a_sd * u + t) - mu_s * u;
        if (u > 0.0 && a > 0.0)
            val += 0.5 * lam * std::log1p(a * u);
        if (t > 0.0)
            val -= t / a_c;
        return val;
    };

    // Candidate on the t = 0 face: stationarity of
    // (lam/2) a/(1+a u) + (lbar/2) a_sd/(1+a_sd u) = mu_s, a quadratic in u.
    double u_b = 0.0;
    const double slope0 = 0.5 * (lam * a + lbar * a_sd);
    if (slope0 > mu_s)
    {
        const double a2 = 2.0 * mu_s * a * a_sd;
        const double b1 = 2.0 * mu_s * (a + a_sd) - a * a_sd;
        const double c0 = 2.0 * mu_s - lam * a - lbar * a_sd; // < 0 here
        if (a2 > 0.0)
        {
            const double disc = std::max(b1 * b1 - 4.0 * a2 * c0, 0.0);
            const double sq = std::sqrt(disc);
            u_b = (b1 >= 0.0) ? -2.0 * c0 / (b1 + sq) : (sq - b1) / (2.0 * a2);
        }
        else
        {
            u_b = -c0 / (2.0 * mu_s * (a + a_sd));
        }
        u_b = std::max(u_b, 0.0);
    }
    BandPoint best;
    best.u = u_b;
    best.phi = phi_of(u_b, 0.0);

    // Candidate with t > 0: the log argument pins 1 + a_sd u + t = lbar a_c/2.
    if (a_c > 0.0 && lbar > 0.0)
    {
        const double d = mu_s - a_sd / a_c; // >= 0 always; 0 only with a dead relay link
        double u_a = 0.0;
        bool valid = true;
        if (a > 0.0)
        {
            if (d > 0.0)
                u_a = std::max(0.5 * lam / d - 1.0 / a, 0.0);
            else
                valid = false; // the t > 0 face degenerates onto t = 0
        }
        if (valid)
        {
            const double t_a = 0.5 * lbar * a_c - 1.0 - a_sd * u_a;
            if (t_a > 0.0)
            {
                const double phi_a = phi_of(u_a, t_a);
                if (phi_a > best.phi)
                {
                    best.u = u_a;
                    best.phi = phi_a;
                    const double msac = mu_s * a_c;
                    const double mrac = mu_r * a_c;
                    best.v = a_sd > 0.0 ? t_a * a_sd / (msac * msac) : 0.0;
                    best.w = a_rd > 0.0 ? t_a * a_rd / (mrac * mrac) : 0.0;
                }
            }
        }
    }
    return best;
}

struct InnerSolution
{
    std::vector<BandPoint> bands;
    double mean_s = 0.0;
    double mean_r = 0.0;
};

InnerSolution solve_inner(const SubbandChannel &ch, CutMode mode, double lam, double mu_s, double mu_r,
                          bool relay_enabled)
{
    InnerSolution sol;
    const int n = ch.n;
    sol.bands.resize(static_cast<size_t>(n));
    double acc_s = 0.0, acc_r = 0.0;
    for (int i = 0; i < n; i++)
    {
        const double a = mode == CutMode::Cutset ? ch.a_sr[static_cast<size_t>(i)] + ch.a_sd[static_cast<size_t>(i)]
                                                 : ch.a_sr[static_cast<size_t>(i)];
        const double a_rd = relay_enabled ? ch.a_rd[static_cast<size_t>(i)] : 0.0;
        sol.bands[static_cast<size_t>(i)] =
            solve_maximin_band(a, ch.a_sd[static_cast<size_t>(i)], a_rd, lam, mu_s, mu_r);
        acc_s += sol.bands[static_cast<size_t>(i)].u + sol.bands[static_cast<size_t>(i)].v;
        acc_r += sol.bands[static_cast<size_t>(i)].w;
    }
    sol.mean_s = acc_s / n;
    sol.mean_r = acc_r / n;
    return sol;
}

constexpr double kMuLo = 1e-18;
constexpr double kMuHi = 1e18;
constexpr int kMuIters = 64;

// Match the source budget by log-bisection on mu_s (mean source power is
// nonincreasing in its price). Returns the feasible (<= budget) side.
InnerSolution match_source(const SubbandChannel &ch, CutMode mode, double lam, double mu_r, double budget,
                           bool relay_enabled, double *mu_s_out)
{
    auto low = solve_inner(ch, mode, lam, kMuLo, mu_r, relay_enabled);
    if (low.mean_s <= budget)
    {
        *mu_s_out = kMuLo;
        return low;
    }
    double lo = std::log(kMuLo), hi = std::log(kMuHi);
    InnerSolution at_hi = solve_inner(ch, mode, lam, kMuHi, mu_r, relay_enabled);
    for (int it = 0; it < kMuIters; it++)
    {
        const double mid = 0.5 * (lo + hi);
        auto sol = solve_inner(ch, mode, lam, std::exp(mid), mu_r, relay_enabled);
        if (sol.mean_s > budget)
            lo = mid;
        else
        {
            hi = mid;
            at_hi = std::move(sol);
        }
    }
    *mu_s_out = std::exp(hi);
    return at_hi;
}

// Match the relay budget by log-bisection on mu_r, re-matching the source
// budget at every trial price (partial dualization keeps the relay demand
// monotone in mu_r).
InnerSolution match_budgets(const SubbandChannel &ch, CutMode mode, double lam, double p_s_budget,
                            double p_r_budget, double *mu_s_out, double *mu_r_out)
{
    const bool relay_enabled = p_r_budget > 0.0;
    if (!relay_enabled)
    {
        *mu_r_out = 1.0;
        return match_source(ch, mode, lam, 1.0, p_s_budget, false, mu_s_out);
    }
    double mu_s = kMuLo;
    auto low = match_source(ch, mode, lam, kMuLo, p_s_budget, true, &mu_s);
    if (low.mean_r <= p_r_budget)
    {
        *mu_r_out = kMuLo;
        *mu_s_out = mu_s;
        return low;
    }
    double lo = std::log(kMuLo), hi = std::log(kMuHi);
    InnerSolution at_hi = match_source(ch, mode, lam, kMuHi, p_s_budget, true, &mu_s);
    double mu_s_hi = mu_s;
    for (int it = 0; it < kMuIters; it++)
    {
        const double mid = 0.5 * (lo + hi);
        auto sol = match_source(ch, mode, lam, std::exp(mid), p_s_budget, true, &mu_s);
        if (sol.mean_r > p_r_budget)
            lo = mid;
        else
        {
            hi = mid;
            at_hi = std::move(sol);
            mu_s_hi = mu_s;
        }
    }
    *mu_r_out = std::exp(hi);
    *mu_s_out = mu_s_hi;
    return at_hi;
}

PowerAllocation allocation_from_bands(const std::vector<BandPoint> &bands)
{
    PowerAllocation alloc;
    for (const auto &b : bands)
    {
        const double p_s = b.u + b.v;
        alloc.p_s.push_back(p_s);
        alloc.p_r.push_back(b.w);
        alloc.alpha.push_back(p_s > 0.0 ? std::clamp(b.u / p_s, 0.0, 1.0) : 1.0);
    }
    return alloc;
}

// ------------------------------------------------------------------------
// CF KKT machinery. All of it runs on gain vectors normalized so the source
// budget is 1 (exact scale equivariance); solve_cf_kkt maps the result back.

// Supremum of the compression ratio: at q_max the quantization noise
// diverges and the band degenerates to the direct link.
double cf_q_max(double a_sr, double a_sd, double p_s)
{
    return (1.0 + p_s * (a_sr + a_sd)) / (1.0 + a_sd * p_s);
}

struct KktGains
{
    std::vector<double> a_sr, a_sd, a_rd;
    int n = 0;
};

struct KktBand
{
    double p_s = 0.0;
    double p_r = 0.0;
    double q = 1.0; // effective (possibly capped) compression ratio
    int roots = 0;
};

double kkt_effective_q(double a_sr, double a_sd, double p, double l1)
{
    const double qmax = cf_q_max(a_sr, a_sd, p);
    if (a_sr * p <= 0.0)
        return qmax;
    return std::min(cf_kkt_q(l1, a_sr, a_sd, p), qmax);
}

// Stationarity in P_S with q and P_R substituted at the current multipliers.
// Below the cap the envelope theorem applies (q is at its own stationary
// point); at the cap q = q_max(P) moves with P_S and the band reduces to the
// direct link, so the derivative is taken on the reduced expression.
double kkt_stationarity(double p, double a_sr, double a_sd, double a_rd, double l1, double l2, double l3)
{
    const double big_a = a_sr + a_sd;
    const double p_r = cf_kkt_relay_power(l1, l3, a_sd, a_rd, p);
    const double m = a_sd * p + a_rd * p_r;
    const double qmax = cf_q_max(a_sr, a_sd, p);
    const double q_free = (a_sr * p > 0.0) ? cf_kkt_q(l1, a_sr, a_sd, p) : std::numeric_limits<double>::infinity();
    if (q_free < qmax)
    {
        const double big_b = a_sd + a_sr * (1.0 + q_free);
        const double t1 = (a_sr * (1.0 - q_free) + a_sd + big_a * big_b * p) /
                          (2.0 * (1.0 + big_a * p) * (1.0 + big_b * p));
        const double t2 = l1 * (a_sr + big_a * a_rd * p_r) / (2.0 * (1.0 + big_a * p) * (1.0 + m));
        return t1 - t2 - l2;
    }
    const double t1 = a_sd / (2.0 * (1.0 + a_sd * p));
    const double t2 = 0.5 * l1 * (a_sd / (1.0 + a_sd * p) - a_sd / (1.0 + m));
    return t1 - t2 - l2;
}

// Exact per-band Lagrangian (rate plus weighted compression slack minus the
// power prices) at the substituted q and relay water fill. Used to choose
// between stationary points when the band problem is non-convex.
double kkt_band_lagrangian(double p, double a_sr, double a_sd, double a_rd, double l1, double l2, double l3)
{
    const double big_a = a_sr + a_sd;
    const double p_r = cf_kkt_relay_power(l1, l3, a_sd, a_rd, p);
    const double q = kkt_effective_q(a_sr, a_sd, p, l1);
    const double one_ap = 1.0 + big_a * p;
    const double rate = 0.5 * std::log(one_ap * one_ap / (one_ap + a_sr * p * q));
    const double slack = std::log(q) - std::log(one_ap / (1.0 + a_sd * p + a_rd * p_r));
    return rate + 0.5 * l1 * slack - l2 * p - l3 * p_r;
}

// Bracketed root refinement by interpolate-truncate-project: the bracket
// [a, b] must carry a sign change (either orientation; an exact zero joins
// the b side, matching the feasible-side convention of the callers). Probes
// the regula-falsi point truncated toward the midpoint and projected into
// the minmax radius, so the worst case costs one probe more than plain
// bisection while smooth stretches converge superlinearly. The caller sees
// every probe through `probe`, so it can cache side artifacts of the final
// b-side evaluation. Exits with b - a <= 2 * eps.
template <typename F>
void itp_refine(F &&probe, double &a, double &b, double f_a, double f_b, double eps)
{
    if (!(b - a > 2.0 * eps))
        return;
    const double w0 = b - a;
    const int n_max = static_cast<int>(std::ceil(std::log2(w0 / (2.0 * eps)))) + 1;
    const double k1 = 0.2 / w0;
    for (int j = 0; j < n_max + 8 && b - a > 2.0 * eps; j++)
    {
        const double xm = 0.5 * (a + b);
        const double radius = eps * std::ldexp(1.0, n_max - j) - 0.5 * (b - a);
        const double delta = k1 * (b - a) * (b - a);
        double xf = xm;
        const double den = f_a - f_b;
        if (std::isfinite(den) && den != 0.0)
        {
            const double cand = (b * f_a - a * f_b) / den;
            if (std::isfinite(cand) && cand > a && cand < b)
                xf = cand;
        }
        const double sigma = (xm >= xf) ? 1.0 : -1.0;
        const double xt = (delta <= std::abs(xm - xf)) ? xf + sigma * delta : xm;
        const double x = (std::abs(xt - xm) <= radius) ? xt : xm - sigma * radius;
        const double fx = probe(x);
        if (fx != 0.0 && (fx > 0.0) == (f_a > 0.0))
        {
            a = x;
            f_a = fx;
        }
        else
        {
            b = x;
            f_b = fx;
        }
    }
}

// Candidate source powers for one band: p = 0 plus every stationarity root
// found by a log-spaced sign scan; the band Lagrangian picks the winner
// (ties broken by the start policy). The scan also feeds the multi-root
// diagnostic.
KktBand kkt_solve_band(double a_sr, double a_sd, double a_rd, double l1, double l2, double l3, bool last_root,
                       double scan_hint)
{
    auto f = [&](double p) { return kkt_stationarity(p, a_sr, a_sd, a_rd, l1, l2, l3); };
    const double p_eps = 1e-14;

    // Expand to a right end where the stationarity is (and stays) negative.
    double hi = 1.0;
    int guard = 0;
    while (f(hi) > 0.0 && guard++ < 70)
        hi *= 2.0;
    if (guard >= 70)
        throw SolverError("CF stationarity has no finite root (source budget price too small)");
    hi = std::max(4.0 * hi, scan_hint);

    auto refine = [&](double lo_b, double hi_b, double f_lo, double f_hi) {
        itp_refine(f, lo_b, hi_b, f_lo, f_hi, 1e-13 * (1.0 + hi_b));
        return 0.5 * (lo_b + hi_b);
    };

    std::vector<double> cands;
    cands.push_back(0.0);
    const int scan = 40;
    const double ratio = std::pow(hi / p_eps, 1.0 / scan);
    double prev_p = p_eps, prev_f = f(p_eps);
    double p = p_eps;
    for (int k = 1; k <= scan; k++)
    {
        p = (k == scan) ? hi : p * ratio;
        const double fp = f(p);
        if (prev_f > 0.0 && fp <= 0.0)
            cands.push_back(refine(prev_p, p, prev_f, fp));
        prev_p = p;
        prev_f = fp;
    }

    KktBand b;
    b.roots = static_cast<int>(cands.size()) - 1;
    double best_val = -std::numeric_limits<double>::infinity();
    std::vector<double> vals(cands.size());
    for (size_t k = 0; k < cands.size(); k++)
    {
        vals[k] = kkt_band_lagrangian(cands[k], a_sr, a_sd, a_rd, l1, l2, l3);
        best_val = std::max(best_val, vals[k]);
    }
    const double tie = 1e-12 * (1.0 + std::abs(best_val));
    double chosen = 0.0;
    if (last_root)
    {
        for (size_t k = cands.size(); k-- > 0;)
            if (vals[k] >= best_val - tie)
            {
                chosen = cands[k];
                break;
            }
    }
    else
    {
        for (size_t k = 0; k < cands.size(); k++)
            if (vals[k] >= best_val - tie)
            {
                chosen = cands[k];
                break;
            }
    }
    b.p_s = chosen;
    b.p_r = cf_kkt_relay_power(l1, l3, a_sd, a_rd, chosen);
    b.q = kkt_effective_q(a_sr, a_sd, chosen, l1);
    return b;
}

struct KktState
{
    std::vector<KktBand> bands;
    double mean_s = 0.0;
    double mean_r = 0.0;
    double slack = 0.0; // compression slack at the current point
};

KktState kkt_evaluate(const KktGains &g, double l1, double l2, double l3, bool last_root)
{
    KktState st;
    const int n = g.n;
    const double scan_hint = 8.0 * std::max(n, 8); // one band can hold the whole mean budget
    st.bands.resize(static_cast<size_t>(n));
    double acc_s = 0.0, acc_r = 0.0, slack = 0.0;
    for (int i = 0; i < n; i++)
    {
        const size_t k = static_cast<size_t>(i);
        const double a_sr = g.a_sr[k], a_sd = g.a_sd[k], a_rd = g.a_rd[k];
        KktBand b = kkt_solve_band(a_sr, a_sd, a_rd, l1, l2, l3, last_root, scan_hint);
        st.bands[k] = b;
        acc_s += b.p_s;
        acc_r += b.p_r;
        const double rhs = (1.0 + (a_sr + a_sd) * b.p_s) / (1.0 + a_sd * b.p_s + a_rd * b.p_r);
        slack += std::log(b.q) - std::log(rhs);
    }
    st.mean_s = acc_s / n;
    st.mean_r = acc_r / n;
    st.slack = slack;
    return st;
}

// Best compression profile at fixed powers: a common water level theta in
// (0, 1/2) on the ratios q_i = theta (1+A p)/(a_SR p (1/2 - theta)), capped
// at q_max, chosen so the summed constraint is exactly saturated. Returns
// the band rates' sum; theta doubles as lambda1/2 of the KKT system.
double kkt_best_q_at_powers(const KktGains &g, const std::vector<double> &p, const std::vector<double> &r,
                            std::vector<double> *q_out, double *theta_out)
{
    const int n = g.n;
    double target = 0.0;
    for (size_t k = 0; k < static_cast<size_t>(n); k++)
    {
        const double big_a = g.a_sr[k] + g.a_sd[k];
        target += std::log((1.0 + big_a * p[k]) / (1.0 + g.a_sd[k] * p[k] + g.a_rd[k] * r[k]));
    }
    auto q_at = [&](size_t k, double th) {
        const double big_a = g.a_sr[k] + g.a_sd[k];
        const double qmax = cf_q_max(g.a_sr[k], g.a_sd[k], p[k]);
        if (g.a_sr[k] * p[k] <= 0.0)
            return qmax;
        return std::min(th * (1.0 + big_a * p[k]) / (g.a_sr[k] * p[k] * (0.5 - th)), qmax);
    };
    auto sum_logq = [&](double th) {
        double acc = 0.0;
        for (size_t k = 0; k < static_cast<size_t>(n); k++)
            acc += std::log(q_at(k, th));
        return acc;
    };
    double lo = 1e-15, hi = 0.5 * (1.0 - 1e-15);
    const double f_lo = sum_logq(lo) - target;
    if (f_lo < 0.0)
    {
        // The capped profile always meets the constraint (each q_max exceeds
        // the per-band target ratio), so the crossing lies in the bracket.
        const double f_hi = sum_logq(hi) - target;
        if (f_hi >= 0.0)
            itp_refine([&](double th) { return sum_logq(th) - target; }, lo, hi, f_lo, f_hi, 1e-13);
    }
    else
    {
        hi = lo; // every band capped already satisfies the constraint
    }
    const double theta = hi;
    double rate = 0.0;
    for (size_t k = 0; k < static_cast<size_t>(n); k++)
    {
        const double big_a = g.a_sr[k] + g.a_sd[k];
        const double q = q_at(k, theta);
        const double one_ap = 1.0 + big_a * p[k];
        rate += 0.5 * std::log(one_ap * one_ap / (one_ap + g.a_sr[k] * p[k] * q));
        if (q_out != nullptr)
            (*q_out)[k] = q;
    }
    if (theta_out != nullptr)
        *theta_out = theta;
    return rate;
}

void project_onto_budget(std::vector<double> &x, double cap); // defined below

// Primal refinement: projected-gradient ascent on the true CF rate with the
// compression profile re-optimized in closed form at every iterate. This
// closes the duality gap the multiplier bisections can leave on non-convex
// instances; feasibility (budgets and saturated compression constraint) is
// maintained exactly throughout.
void kkt_polish(const KktGains &g, double bs, double br, std::vector<double> &p, std::vector<double> &r,
                std::vector<double> &q, double *theta_out)
{
    const int n = g.n;
    const double cap_s = n * bs, cap_r = n * br;
    project_onto_budget(p, cap_s);
    project_onto_budget(r, cap_r);

    std::vector<double> qbuf(static_cast<size_t>(n));
    double theta = 0.25;
    double f = kkt_best_q_at_powers(g, p, r, &qbuf, &theta);

    std::vector<double> gp(static_cast<size_t>(n)), gr(static_cast<size_t>(n));
    auto fill_grad = [&]() {
        for (size_t k = 0; k < static_cast<size_t>(n); k++)
        {
            const double a_sr = g.a_sr[k], a_sd = g.a_sd[k], a_rd = g.a_rd[k];
            const double big_a = a_sr + a_sd;
            const double m = a_sd * p[k] + a_rd * r[k];
            gr[k] = theta * a_rd / (1.0 + m);
            const double qmax = cf_q_max(a_sr, a_sd, p[k]);
            if (a_sr * p[k] > 0.0 && qbuf[k] < qmax * (1.0 - 1e-15))
            {
                const double big_b = a_sd + a_sr * (1.0 + qbuf[k]);
                gp[k] = big_a / (1.0 + big_a * p[k]) - big_b / (2.0 * (1.0 + big_b * p[k])) -
                        theta * big_a / (1.0 + big_a * p[k]) + theta * a_sd / (1.0 + m);
            }
            else
            {
                gp[k] = a_sd / (2.0 * (1.0 + a_sd * p[k])) +
                        theta * (a_sd / (1.0 + m) - a_sd / (1.0 + a_sd * p[k]));
            }
        }
    };

    double step = 1.0;
    int stale = 0;
    std::vector<double> pn(static_cast<size_t>(n)), rn(static_cast<size_t>(n));
    for (int iter = 0; iter < 4000 && stale < 300; iter++)
    {
        fill_grad();
        bool accepted = false;
        double fn = f;
        for (int half = 0; half < 60; half++)
        {
            for (size_t k = 0; k < static_cast<size_t>(n); k++)
            {
                pn[k] = p[k] + step * gp[k];
                rn[k] = r[k] + step * gr[k];
            }
            project_onto_budget(pn, cap_s);
            project_onto_budget(rn, cap_r);
            fn = kkt_best_q_at_powers(g, pn, rn, &qbuf, &theta);
            if (fn >= f)
            {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            break;
        stale = (fn - f < 1e-15) ? stale + 1 : 0;
        p.swap(pn);
        r.swap(rn);
        f = fn;
        step *= 1.25;
    }
    f = kkt_best_q_at_powers(g, p, r, &q, &theta);
    if (theta_out != nullptr)
        *theta_out = theta;
}

// Budget-matching for the CF system: l2 against the source mean, l3 against
// the relay mean, both on the feasible side of their crossings. `l3_warm`
// optionally carries the previous relay price across calls as a seed.
KktState kkt_match_budgets(const KktGains &g, double l1, double p_s_budget, double p_r_budget, bool last_root,
                           double *l2_out, double *l3_out, double *l3_warm = nullptr)
{
    // Both matches run in log-multiplier space to 1e-12. The budget miss is
    // monotone in its own multiplier, so the crossing is unique and any
    // bracketing path lands on the same answer; a seed from the previous
    // match (the multipliers drift slowly across outer probes) lets the
    // search start from a tight bracket instead of the full range.
    const double log_mu_lo = std::log(kMuLo), log_mu_hi = std::log(1e16);
    const double mu_eps = 1e-12;
    const double half_window = std::log(16.0), stride = std::log(256.0);

    // Locates the sign change of `miss` (positive at small multipliers,
    // nonpositive at large) around an optional seed and refines it. The
    // state evaluated at the final feasible (nonpositive-miss) endpoint and
    // that endpoint's multiplier are stored through `keep`.
    auto match_mu = [&](auto &&miss_at, auto &&keep, double seed) {
        double lo = log_mu_lo, hi = log_mu_hi;
        double f_lo, f_hi;
        if (seed > 0.0)
        {
            lo = std::clamp(std::log(seed) - half_window, log_mu_lo, log_mu_hi);
            hi = std::clamp(std::log(seed) + half_window, log_mu_lo, log_mu_hi);
            f_lo = miss_at(lo);
            if (f_lo <= 0.0)
            {
                // Root below the window: slide the bracket down.
                while (f_lo <= 0.0 && lo > log_mu_lo)
                {
                    hi = lo;
                    f_hi = f_lo;
                    lo = std::max(log_mu_lo, lo - stride);
                    f_lo = miss_at(lo);
                }
                if (f_lo <= 0.0)
                {
                    keep(kMuLo); // feasible even with an inactive price
                    return;
                }
            }
            else
            {
                f_hi = miss_at(hi);
                while (f_hi > 0.0 && hi < log_mu_hi)
                {
                    lo = hi;
                    f_lo = f_hi;
                    hi = std::min(log_mu_hi, hi + stride);
                    f_hi = miss_at(hi);
                }
            }
        }
        else
        {
            f_lo = miss_at(lo);
            if (f_lo <= 0.0)
            {
                keep(kMuLo);
                return;
            }
            f_hi = miss_at(hi);
        }
        itp_refine(miss_at, lo, hi, f_lo, f_hi, mu_eps);
        keep(std::exp(hi));
    };

    double l2_warm = -1.0;
    auto match_l2 = [&](double l3, double *l2_res) {
        KktState at_b;
        bool have_b = false;
        match_mu(
            [&](double t) {
                auto st = kkt_evaluate(g, l1, std::exp(t), l3, last_root);
                const double miss = st.mean_s - p_s_budget;
                if (miss <= 0.0)
                {
                    at_b = std::move(st);
                    have_b = true;
                }
                return miss;
            },
            [&](double mu) { *l2_res = mu; },
            l2_warm);
        if (!have_b)
        {
            // Even the top of the range leaves the source budget exceeded
            // (degenerate instance); report that endpoint like the plain
            // bisection did.
            at_b = kkt_evaluate(g, l1, *l2_res, l3, last_root);
        }
        l2_warm = *l2_res;
        return at_b;
    };

    double l2 = kMuLo;
    KktState best;
    bool have_best = false;
    double l2_hi = kMuLo, l3_res = kMuLo;
    const double l3_seed = (l3_warm != nullptr) ? *l3_warm : -1.0;
    match_mu(
        [&](double t) {
            auto st = match_l2(std::exp(t), &l2);
            const double miss = st.mean_r - p_r_budget;
            if (miss <= 0.0)
            {
                best = std::move(st);
                l2_hi = l2;
                have_best = true;
            }
            return miss;
        },
        [&](double mu) { l3_res = mu; },
        l3_seed);
    if (!have_best)
    {
        best = match_l2(l3_res, &l2);
        l2_hi = l2;
    }
    *l2_out = l2_hi;
    *l3_out = l3_res;
    if (l3_warm != nullptr)
        *l3_warm = l3_res;
    return best;
}

// ------------------------------------------------------------------------
// Modified-CF projected gradient.

void project_onto_budget(std::vector<double> &x, double cap)
{
    for (auto &v : x)
        v = std::max(v, 0.0);
    if (cap <= 0.0)
    {
        std::fill(x.begin(), x.end(), 0.0);
        return;
    }
    double total = std::accumulate(x.begin(), x.end(), 0.0);
    if (total <= cap)
        return;
    // Euclidean projection onto { x >= 0, sum x = cap }.
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double prefix = 0.0, tau = 0.0;
    for (size_t k = 0; k < sorted.size(); k++)
    {
        prefix += sorted[k];
        const double cand = (prefix - cap) / static_cast<double>(k + 1);
        if (k + 1 == sorted.size() || sorted[k + 1] <= cand)
        {
            tau = cand;
            break;
        }
    }
    for (auto &v : x)
        v = std::max(v - tau, 0.0);
}

double cfm_value_and_grad(const SubbandChannel &ch, const std::vector<double> &p, const std::vector<double> &r,
                          std::vector<double> *gp, std::vector<double> *gr)
{
    const int n = ch.n;
    double acc = 0.0;
    for (int i = 0; i < n; i++)
    {
        const size_t k = static_cast<size_t>(i);
        const double a_sr = ch.a_sr[k], a_sd = ch.a_sd[k], a_rd = ch.a_rd[k];
        const double big_a = a_sr + a_sd;
        const double den = 1.0 + big_a * p[k] + a_rd * r[k];
        const double s = a_rd * r[k] / den;
        const double g = a_sd * p[k] + a_sr * p[k] * s;
        acc += std::log1p(g);
        const double scale = 1.0 / (2.0 * n * (1.0 + g));
        if (gp != nullptr)
            (*gp)[k] = scale * (a_sd + a_sr * s - a_sr * big_a * p[k] * s / den);
        if (gr != nullptr)
            (*gr)[k] = scale * a_sr * p[k] * a_rd * (1.0 + big_a * p[k]) / (den * den);
    }
    return acc / (2.0 * n);
}

} // namespace

// ------------------------------------------------------------------------

MaximinSolution solve_df_maximin(const SubbandChannel &ch, double p_s_budget, double p_r_budget, CutMode mode)
{
    if (!(p_s_budget >= 0.0) || !(p_r_budget >= 0.0))
        throw InvalidArgumentError("power budgets must be nonnegative");
    const int n = ch.n;
    if (n <= 0)
        throw InvalidArgumentError("subband channel has no bands");

    MaximinSolution out;
    if (p_s_budget == 0.0)
    {
        out.alloc = PowerAllocation::uniform(n, 0.0, 0.0, 1.0);
        out.lambda_star = 1.0;
        out.cuts = (mode == CutMode::Df ? df_rate(ch, out.alloc) : cutset_rate(ch, out.alloc));
        out.rate = out.cuts.rate;
        out.gap = std::abs(out.cuts.c1 - out.cuts.c2);
        return out;
    }

    // The endpoint weights are kept strictly interior so the inner argmax
    // stays unique and its budget prices well defined.
    constexpr double kLamEps = 1e-9;
    auto cuts_at = [&](double lam, PowerAllocation *alloc_out) {
        double mu_s = 0.0, mu_r = 0.0;
        auto sol = match_budgets(ch, mode, lam, p_s_budget, p_r_budget, &mu_s, &mu_r);
        auto alloc = allocation_from_bands(sol.bands);
        auto cuts = (mode == CutMode::Df ? df_rate(ch, alloc) : cutset_rate(ch, alloc));
        if (alloc_out != nullptr)
            *alloc_out = std::move(alloc);
        return cuts;
    };

    const auto top = cuts_at(1.0 - kLamEps, nullptr);
    double lambda_final;
    bool boundary;
    if (top.c1 - top.c2 <= 0.0)
    {
        // Broadcast-limited: maximizing c1 alone already leaves c1 <= c2.
        lambda_final = 1.0 - kLamEps;
        boundary = true;
    }
    else
    {
        double lo = kLamEps, hi = 1.0 - kLamEps;
        for (int it = 0; it < kDefaultLambdaIters; it++)
        {
            const double mid = 0.5 * (lo + hi);
            const auto cuts = cuts_at(mid, nullptr);
            if (cuts.c1 - cuts.c2 < 0.0)
                lo = mid;
            else
                hi = mid;
        }
        lambda_final = 0.5 * (lo + hi);
        boundary = false;
    }

    out.cuts = cuts_at(lambda_final, &out.alloc);
    out.rate = out.cuts.rate;
    out.gap = std::abs(out.cuts.c1 - out.cuts.c2);
    out.lambda_star = boundary ? 1.0 : lambda_final;
    return out;
}

WaterfillSolution solve_df_waterfill(const SubbandChannel &ch, double p_t)
{
    if (!(p_t >= 0.0))
        throw InvalidArgumentError("total power budget must be nonnegative");
    const int n = ch.n;
    if (n <= 0 || ch.a_sr.size() != static_cast<size_t>(n))
        throw InvalidArgumentError("subband channel has inconsistent band count");

    // Per-band closed forms at water level nu. A band whose destination-side
    // gains both vanish cannot satisfy the per-band cut ordering with any
    // positive power, so it receives none.
    auto fill_band = [&](size_t k, double nu, double *p_s1, double *p_s2, double *p_r) {
        const double a_sr = ch.a_sr[k], a_sd = ch.a_sd[k], a_rd = ch.a_rd[k];
        *p_s1 = *p_s2 = *p_r = 0.0;
        if (a_sr <= 0.0)
            return;
        const double base = std::max(nu - 1.0 / a_sr, 0.0);
        if (base <= 0.0)
            return;
        if (a_sr < a_sd)
        {
            *p_s1 = base; // fresh information only; the relay stays silent
            return;
        }
        if (a_sd + a_rd <= 0.0)
            return;
        const double k2 = (a_sr - a_sd) / (a_sd + a_rd);
        *p_s1 = base;
        *p_s2 = a_sd * k2 * base / (a_sd + a_rd);
        *p_r = a_rd * k2 * base / (a_sd + a_rd);
    };

    auto total_at = [&](double nu) {
        double acc = 0.0;
        for (size_t k = 0; k < static_cast<size_t>(n); k++)
        {
            double p1 = 0.0, p2 = 0.0, pr = 0.0;
            fill_band(k, nu, &p1, &p2, &pr);
            acc += p1 + p2 + pr;
        }
        return acc / n;
    };

    double min_inv = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < static_cast<size_t>(n); k++)
        if (ch.a_sr[k] > 0.0)
            min_inv = std::min(min_inv, 1.0 / ch.a_sr[k]);

    WaterfillSolution out;
    double nu = 0.0;
    if (p_t == 0.0 || !std::isfinite(min_inv))
    {
        nu = std::isfinite(min_inv) ? min_inv : 0.0;
    }
    else
    {
        double lo = min_inv, hi = min_inv + static_cast<double>(n) * p_t + 1.0;
        for (int it = 0; it < 200; it++)
        {
            const double mid = 0.5 * (lo + hi);
            if (total_at(mid) < p_t)
                lo = mid;
            else
                hi = mid;
        }
        nu = 0.5 * (lo + hi);
        if (std::abs(total_at(nu) - p_t) > 1e-8 * std::max(p_t, 1.0))
        {
            std::ostringstream os;
            os << "water-fill bisection failed to exhaust the budget: used " << total_at(nu) << " of " << p_t
               << " at level " << nu;
            throw SolverError(os.str());
        }
    }

    out.nu_t = nu;
    out.p_s1.resize(static_cast<size_t>(n));
    out.p_s2.resize(static_cast<size_t>(n));
    double used = 0.0;
    for (size_t k = 0; k < static_cast<size_t>(n); k++)
    {
        double p1 = 0.0, p2 = 0.0, pr = 0.0;
        fill_band(k, nu, &p1, &p2, &pr);
        out.p_s1[k] = p1;
        out.p_s2[k] = p2;
        const double p_s = p1 + p2;
        out.alloc.p_s.push_back(p_s);
        out.alloc.p_r.push_back(pr);
        out.alloc.alpha.push_back(p_s > 0.0 ? std::clamp(p1 / p_s, 0.0, 1.0) : 1.0);
        used += p1 + p2 + pr;
    }
    out.total_used = used / n;
    out.rate = df_rate(ch, out.alloc).rate;
    return out;
}

double solve_alpha_star(double p_s, double p_r, double n1, double n2, double w)
{
    if (!(n1 > 0.0) || !(w > 0.0) || !(n2 >= 0.0) || !(p_s >= 0.0) || !(p_r >= 0.0))
        throw InvalidArgumentError("alpha* needs n1 > 0, w > 0 and nonnegative powers");
    if (p_s == 0.0)
        return 1.0;
    const double n_tot = n1 + n2;
    auto diff = [&](double alpha) {
        const double cross = 2.0 * std::sqrt(std::max(1.0 - alpha, 0.0) * p_s * p_r);
        return alpha * p_s / (n1 * w) - (p_s + p_r + cross) / (n_tot * w);
    };
    if (diff(1.0) <= 0.0)
        return 1.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12)
    {
        const double mid = 0.5 * (lo + hi);
        if (diff(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

CfModifiedSolution solve_cf_modified(const SubbandChannel &ch, double p_s_budget, double p_r_budget)
{
    if (!(p_s_budget >= 0.0) || !(p_r_budget >= 0.0))
        throw InvalidArgumentError("power budgets must be nonnegative");
    const int n = ch.n;
    if (n <= 0)
        throw InvalidArgumentError("subband channel has no bands");

    const double cap_s = static_cast<double>(n) * p_s_budget;
    const double cap_r = static_cast<double>(n) * p_r_budget;
    std::vector<double> p(static_cast<size_t>(n), p_s_budget);
    std::vector<double> r(static_cast<size_t>(n), p_r_budget);
    std::vector<double> gp(static_cast<size_t>(n)), gr(static_cast<size_t>(n));

    double f = cfm_value_and_grad(ch, p, r, &gp, &gr);
    double step = std::max(1.0, p_s_budget + p_r_budget);
    int iter = 0;
    int stale = 0;
    const int max_iter = 20000;
    for (; iter < max_iter && stale < 200; iter++)
    {
        std::vector<double> pn(static_cast<size_t>(n)), rn(static_cast<size_t>(n));
        double fn = -std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int half = 0; half < 60; half++)
        {
            for (size_t k = 0; k < static_cast<size_t>(n); k++)
            {
                pn[k] = p[k] + step * gp[k];
                rn[k] = r[k] + step * gr[k];
            }
            project_onto_budget(pn, cap_s);
            project_onto_budget(rn, cap_r);
            fn = cfm_value_and_grad(ch, pn, rn, nullptr, nullptr);
            if (fn >= f)
            {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            break;
        stale = (fn - f < 1e-15) ? stale + 1 : 0;
        p.swap(pn);
        r.swap(rn);
        f = cfm_value_and_grad(ch, p, r, &gp, &gr);
        step *= 1.25;
    }

    CfModifiedSolution out;
    out.alloc.p_s = p;
    out.alloc.p_r = r;
    out.alloc.alpha.assign(static_cast<size_t>(n), 1.0);
    out.rate = cf_modified_rate(ch, out.alloc);
    out.iterations = iter;
    return out;
}

double cf_kkt_relay_power(double lambda1, double lambda3, double a_sd, double a_rd, double p_s)
{
    if (a_rd <= 0.0)
        return 0.0;
    return std::max(lambda1 / (2.0 * lambda3) - (1.0 + a_sd * p_s) / a_rd, 0.0);
}

double cf_kkt_q(double lambda1, double a_sr, double a_sd, double p_s)
{
    if (a_sr * p_s <= 0.0)
        return std::numeric_limits<double>::infinity();
    return lambda1 / (1.0 - lambda1) * (1.0 + (a_sr + a_sd) * p_s) / (a_sr * p_s);
}

CfKktSolution solve_cf_kkt(const SubbandChannel &ch, double p_s_budget, double p_r_budget)
{
    if (!(p_s_budget > 0.0) || !(p_r_budget > 0.0))
        throw InvalidArgumentError("CF KKT solver needs strictly positive budgets");
    const int n = ch.n;
    if (n <= 0 || ch.noise_r.size() != static_cast<size_t>(n))
        throw InvalidArgumentError("CF KKT solver needs the raw per-band spectra");

    // Canonical rescale (gains times the source budget, budgets (1, ratio)):
    // the iteration then sees the same numbers for every jointly rescaled
    // problem, so scale equivariance holds by construction.
    const double scale = p_s_budget;
    KktGains g;
    g.n = n;
    g.a_sr.resize(static_cast<size_t>(n));
    g.a_sd.resize(static_cast<size_t>(n));
    g.a_rd.resize(static_cast<size_t>(n));
    for (size_t k = 0; k < static_cast<size_t>(n); k++)
    {
        g.a_sr[k] = ch.a_sr[k] * scale;
        g.a_sd[k] = ch.a_sd[k] * scale;
        g.a_rd[k] = ch.a_rd[k] * scale;
    }
    const double bs = 1.0;
    const double br = p_r_budget / scale;

    struct Start
    {
        double l1_lo, l1_hi;
        bool last_root;
    };
    const double eps = 1e-9;
    const Start starts[8] = {
        {eps, 1.0 - eps, false}, {eps, 1.0 - eps, true}, {eps, 0.5, false},      {eps, 0.5, true},
        {0.5, 1.0 - eps, false}, {0.5, 1.0 - eps, true}, {0.25, 0.75, false},    {0.25, 0.75, true},
    };

    CfKktSolution best;
    bool have_best = false;
    std::ostringstream history;

    for (int s = 0; s < 8; s++)
    {
        double lo = starts[s].l1_lo, hi = starts[s].l1_hi;
        const bool last_root = starts[s].last_root;
        double l2 = 0.0, l3 = 0.0;
        double l3_warm = -1.0; // relay-price seed carried across this start's probes

        auto slack_at = [&](double l1, KktState *st_out, double *l2_o, double *l3_o) {
            auto st = kkt_match_budgets(g, l1, bs, br, last_root, l2_o, l3_o, &l3_warm);
            const double slack = st.slack;
            if (st_out != nullptr)
                *st_out = std::move(st);
            return slack;
        };

        // The compression constraint is active at any optimum (the rate falls
        // as q grows), so saturate it by bisection on l1; slack increases
        // with l1. Fall back to the full bracket if the sub-bracket misses
        // the sign change.
        double s_lo = slack_at(lo, nullptr, &l2, &l3);
        double s_hi = slack_at(hi, nullptr, &l2, &l3);
        if (s_lo > 0.0 || s_hi < 0.0)
        {
            lo = eps;
            hi = 1.0 - eps;
            s_lo = slack_at(lo, nullptr, &l2, &l3);
            s_hi = slack_at(hi, nullptr, &l2, &l3);
        }
        KktState final_state;
        double l1 = hi, l2_f = 0.0, l3_f = 0.0;
        if (s_lo >= 0.0)
        {
            // Even the smallest weight satisfies the constraint (e.g. a dead
            // compression path): keep the low endpoint.
            l1 = lo;
            slack_at(l1, &final_state, &l2_f, &l3_f);
        }
        else
        {
            itp_refine([&](double mid) { return slack_at(mid, nullptr, &l2, &l3); }, lo, hi, s_lo, s_hi,
                       5e-13);
            l1 = hi; // feasible side
            slack_at(l1, &final_state, &l2_f, &l3_f);
        }

        // Primal refinement from the dual proposal; lambda1 is 2 theta of the
        // polished compression water level, the budget multipliers are re-fit
        // from the active bands' stationarity.
        std::vector<double> pp(static_cast<size_t>(n)), rr(static_cast<size_t>(n)), qq(static_cast<size_t>(n));
        int multi_roots = 0;
        for (size_t k = 0; k < static_cast<size_t>(n); k++)
        {
            pp[k] = final_state.bands[k].p_s;
            rr[k] = final_state.bands[k].p_r;
            if (final_state.bands[k].roots > 1)
                multi_roots++;
        }
        double theta = 0.25;
        kkt_polish(g, bs, br, pp, rr, qq, &theta);
        const double l1_fit = 2.0 * theta;

        double l3_fit = kMuLo, l2_fit = kMuLo;
        for (size_t k = 0; k < static_cast<size_t>(n); k++)
        {
            const double m = g.a_sd[k] * pp[k] + g.a_rd[k] * rr[k];
            l3_fit = std::max(l3_fit, 0.5 * l1_fit * g.a_rd[k] / (1.0 + m));
        }
        for (size_t k = 0; k < static_cast<size_t>(n); k++)
            l2_fit = std::max(l2_fit, kkt_stationarity(std::max(pp[k], 1e-14), g.a_sr[k], g.a_sd[k], g.a_rd[k],
                                                       l1_fit, 0.0, l3_fit));

        CfKktSolution cand;
        cand.lambda1 = l1_fit;
        cand.lambda2 = l2_fit / scale;
        cand.lambda3 = l3_fit / scale;
        cand.multi_root_bands = multi_roots;
        for (int i = 0; i < n; i++)
        {
            const size_t k = static_cast<size_t>(i);
            const double p_s = pp[k] * scale;
            cand.alloc.p_s.push_back(p_s);
            cand.alloc.p_r.push_back(rr[k] * scale);
            cand.alloc.alpha.push_back(1.0);
            const double qmax = cf_q_max(ch.a_sr[k], ch.a_sd[k], p_s);
            const double q_eff = std::min(qq[k], qmax * (1.0 - 1e-12));
            cand.comp.nhat.push_back(cf_nhat_from_q(q_eff, ch.a_sr[k], ch.a_sd[k], p_s) * ch.noise_r[k]);
        }
        const auto cf = cf_rate(ch, cand.alloc, cand.comp);
        cand.rate = cf.rate;
        cand.slack = cf.slack;

        // KKT residual in normalized (scale-free) units: stationarity of
        // every band carrying power, relative budget mismatches (when the
        // matching multiplier is active), constraint violation.
        double res = 0.0;
        double mean_s_n = 0.0, mean_r_n = 0.0;
        for (size_t k = 0; k < static_cast<size_t>(n); k++)
        {
            mean_s_n += pp[k] / n;
            mean_r_n += rr[k] / n;
            const double fi = kkt_stationarity(std::max(pp[k], 1e-14), g.a_sr[k], g.a_sd[k], g.a_rd[k], l1_fit,
                                               l2_fit, l3_fit);
            res = std::max(res, pp[k] > 1e-12 ? std::abs(fi) : std::max(fi, 0.0));
        }
        res = std::max(res, l2_fit > 2.0 * kMuLo ? std::abs(mean_s_n - bs) / bs : std::max(0.0, mean_s_n - bs));
        res = std::max(res, l3_fit > 2.0 * kMuLo ? std::abs(mean_r_n - br) / std::max(br, 1e-12)
                                                 : std::max(0.0, mean_r_n - br));
        res = std::max(res, std::max(0.0, -cand.slack));
        cand.residual = res;

        history << "start " << s << ": rate " << cand.rate << ", slack " << cand.slack << ", residual " << res
                << "; ";

        const double ms = mean_of(cand.alloc.p_s), mr = mean_of(cand.alloc.p_r);
        const bool feasible = cand.slack >= -1e-9 && ms <= p_s_budget * (1.0 + 1e-9) + 1e-12 &&
                              mr <= p_r_budget * (1.0 + 1e-9) + 1e-12;
        if (feasible && (!have_best || cand.rate > best.rate))
        {
            best = cand;
            have_best = true;
        }
    }

    if (!have_best)
        throw SolverError("CF KKT solve found no feasible point: " + history.str());
    return best;
}

} // namespace relaycap
