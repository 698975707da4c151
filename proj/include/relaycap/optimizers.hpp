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
// Power-allocation solvers over the decomposed channel:
//  - maximin DF / cut-set allocation via the lambda parametrization (outer
//    bisection on the weight, inner per-band closed forms under dual water
//    levels for the two mean-power budgets);
//  - the modified-DF water-fill under a single total power budget;
//  - the CF KKT system (non-convex: deterministic multi-start, best feasible
//    point kept, stationarity residual reported);
//  - the concave modified-CF allocation via projected gradient;
//  - the scalar alpha* fixed point of the flat degraded channel.
//
// All budgets are mean powers: (1/n) sum_i P(w_i) <= budget.

#ifndef RELAYCAP_OPTIMIZERS_HPP
#define RELAYCAP_OPTIMIZERS_HPP

#include <vector>

#include "relaycap/bounds.hpp"
#include "relaycap/channel.hpp"

namespace relaycap
{

// Which broadcast-cut gain the maximin solver balances against the MAC cut.
enum class CutMode
{
    Df,    // relay reception only: a_SR
    Cutset // joint relay+destination reception: a_SR + a_SD
};

struct MaximinSolution
{
    PowerAllocation alloc;
    double lambda_star = 0.0; // weight on the broadcast cut at the saddle
    double rate = 0.0;        // min(c1, c2) at alloc, nats per channel use
    double gap = 0.0;         // |c1 - c2| at alloc
    CutRates cuts;            // the two cuts at alloc
};

// Maximize min(c1, c2) over per-band (P_S, P_R, alpha) under mean-power
// budgets. Interior saddles return lambda_star in (0,1) with c1 = c2; a
// broadcast-limited channel returns lambda_star = 1 (c1 maximized, c1 <= c2).
// Throws SolverError if a dual bracket cannot be closed.
MaximinSolution solve_df_maximin(const SubbandChannel &ch, double p_s_budget, double p_r_budget,
                                 CutMode mode = CutMode::Df);

struct WaterfillSolution
{
    PowerAllocation alloc;      // p_s = p_s1 + p_s2, alpha = p_s1 / p_s
    std::vector<double> p_s1;   // source power on the fresh-information part
    std::vector<double> p_s2;   // source power on the coherent part
    double nu_t = 0.0;          // water level
    double total_used = 0.0;    // (1/n) sum of all per-band powers
    double rate = 0.0;          // resulting DF rate, nats per channel use
};

// Closed-form per-band DF allocation under a single total (source + relay)
// mean power budget: per band, either all power on the source (when the
// source-relay link is the weaker one) or the three-way coherent split; the
// water level is found by bisection on the budget.
WaterfillSolution solve_df_waterfill(const SubbandChannel &ch, double p_t);

// Coherence weight of the flat degraded channel: the alpha in [0,1] equating
// alpha P_S/(N_1 W) with (P_S + P_R + 2 sqrt((1-alpha) P_S P_R))/((N_1+N_2) W),
// or 1 when the relay cannot help (P_S/N_1 <= P_R/N_2 side). Bisection to
// 1e-12 on alpha.
double solve_alpha_star(double p_s, double p_r, double n1, double n2, double w);

struct CfModifiedSolution
{
    PowerAllocation alloc; // alpha fixed at 1 (CF uses independent inputs)
    double rate = 0.0;
    int iterations = 0;
};

// Maximize the modified-CF rate over (P_S, P_R) under mean-power budgets by
// projected gradient ascent on the concave objective.
CfModifiedSolution solve_cf_modified(const SubbandChannel &ch, double p_s_budget, double p_r_budget);

struct CfKktSolution
{
    PowerAllocation alloc;
    CompressionProfile comp; // quantization noises, absolute units
    double lambda1 = 0.0;    // compression-constraint multiplier, in (0,1)
    double lambda2 = 0.0;    // source budget multiplier
    double lambda3 = 0.0;    // relay budget multiplier
    double rate = 0.0;       // CF rate at (alloc, comp)
    double slack = 0.0;      // compression slack at (alloc, comp)
    double residual = 0.0;   // max KKT violation over all bands
    int multi_root_bands = 0; // bands whose stationarity had several roots
};

// Solve the CF allocation KKT system: per band, the relay power is a water
// fill independent of the incoming link, the compression ratio q follows the
// closed form in lambda1, and the source power solves the scalar stationarity
// condition; multipliers are matched by nested bisection and the compression
// constraint saturated by the outer lambda1 bisection. The problem is
// non-convex: eight deterministic starts are tried and the best feasible
// point returned. Throws SolverError if no feasible point is found.
CfKktSolution solve_cf_kkt(const SubbandChannel &ch, double p_s_budget, double p_r_budget);

// Per-band KKT closed forms, exposed for tests and diagnostics.
// Relay water fill: [lambda1/(2 lambda3) - (1 + a_SD P_S)/a_RD]^+ ; note the
// absence of a_SR (the relay allocation ignores its incoming link quality).
double cf_kkt_relay_power(double lambda1, double lambda3, double a_sd, double a_rd, double p_s);
// Compression ratio: [lambda1/(1-lambda1)] (1 + (a_SR+a_SD) P_S)/(a_SR P_S),
// decreasing in a_SR.
double cf_kkt_q(double lambda1, double a_sr, double a_sd, double p_s);

} // namespace relaycap

#endif // RELAYCAP_OPTIMIZERS_HPP
