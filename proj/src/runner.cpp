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

#include "relaycap/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>
#include <thread>

#include "relaycap/bounds.hpp"
#include "relaycap/channel.hpp"
#include "relaycap/circulant.hpp"
#include "relaycap/errors.hpp"
#include "relaycap/models.hpp"
#include "relaycap/optimizers.hpp"

namespace relaycap
{

namespace
{

constexpr double kLn2 = 0.6931471805599453;

// Scalar parameters with registry defaults applied and (for sweep points)
// the swept field overridden.
using Params = std::map<std::string, double>;

std::string fmt12(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt6(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// RFC-4180 escaping: quote a field only when it contains a separator, a
// quote, or a line break (plain numeric output never does).
std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s)
    {
        if (c == '"')
            q += '"';
        q += c;
    }
    q += '"';
    return q;
}

SubbandChannel build_subband(const ScenarioConfig &cfg)
{
    if (cfg.model == ModelKind::ExplicitSubband)
        return SubbandChannel::from_gains(cfg.lists.at("a_sr"), cfg.lists.at("a_sd"),
                                          cfg.lists.at("a_rd"));
    CirculantChannel ch;
    ch.n = cfg.resolved_n();
    auto taps = [&](const char *re, const char *im) {
        std::vector<cplx> t;
        const auto &r = cfg.lists.at(re);
        const auto *i = cfg.lists.count(im) ? &cfg.lists.at(im) : nullptr;
        for (std::size_t l = 0; l < r.size(); ++l)
            t.emplace_back(r[l], i ? (*i)[l] : 0.0);
        return t;
    };
    ch.h_sr.taps = taps("h_sr_re", "h_sr_im");
    ch.h_sd.taps = taps("h_sd_re", "h_sd_im");
    ch.h_rd.taps = taps("h_rd_re", "h_rd_im");
    ch.noise_r.lags = cfg.lists.at("noise_r");
    ch.noise_d.lags = cfg.lists.at("noise_d");
    return subband_decompose(ch);
}

UnderwaterSpec build_underwater(const ScenarioConfig &cfg, const Params &p)
{
    UnderwaterSpec spec = underwater_layout(p.at("a"), p.at("h"), p.at("d_sd"));
    spec.f_c = p.at("f_c");
    spec.w = p.at("w");
    spec.k = p.at("k");
    spec.a_0 = p.at("a_0");
    spec.s = p.at("s");
    spec.wind = p.at("wind");
    spec.l_sr = tap_count(spec.w, p.at("coherence_sr"));
    spec.l_sd = tap_count(spec.w, p.at("coherence_sd"));
    spec.l_rd = tap_count(spec.w, p.at("coherence_rd"));
    spec.n = cfg.resolved_n();
    spec.seed = cfg.seed;
    return spec;
}

const char *cut_tag(double c1, double c2, double scale)
{
    const double tol = 1e-6 * std::max(1.0, scale);
    if (std::abs(c1 - c2) <= tol)
        return "balanced";
    return c1 < c2 ? binding_name(Binding::BroadcastCut) : binding_name(Binding::MacCut);
}

struct BoundOutcome
{
    std::optional<double> value; // nats; empty when infeasible
    std::string binding = "none";
    double residual = 0.0;
    bool infeasible = false;
};

// Evaluate one bound on a decomposed channel under (P_S, P_R) budgets.
BoundOutcome eval_subband_bound(BoundKind b, const SubbandChannel &ch, double p_s, double p_r)
{
    BoundOutcome out;
    switch (b)
    {
    case BoundKind::Df:
    case BoundKind::Cutset:
    {
        const auto mode = b == BoundKind::Df ? CutMode::Df : CutMode::Cutset;
        const auto sol = solve_df_maximin(ch, p_s, p_r, mode);
        out.value = sol.rate;
        out.binding = cut_tag(sol.cuts.c1, sol.cuts.c2, sol.rate);
        break;
    }
    case BoundKind::DfWaterfill:
    {
        const double p_t = p_s + p_r;
        const auto sol = solve_df_waterfill(ch, p_t);
        out.value = sol.rate;
        const auto cuts = df_rate(ch, sol.alloc);
        out.binding = cut_tag(cuts.c1, cuts.c2, sol.rate);
        out.residual = std::abs(sol.total_used - p_t) / std::max(1.0, p_t);
        break;
    }
    case BoundKind::CfKkt:
    {
        const auto sol = solve_cf_kkt(ch, p_s, p_r);
        out.value = sol.rate;
        out.binding = sol.slack <= 1e-8 * std::max(1.0, sol.rate)
                          ? binding_name(Binding::CompressionConstraint)
                          : "power-budget";
        out.residual = sol.residual;
        break;
    }
    case BoundKind::CfModified:
    {
        const auto sol = solve_cf_modified(ch, p_s, p_r);
        out.value = sol.rate;
        out.binding = binding_name(Binding::CompressionConstraint);
        break;
    }
    }
    return out;
}

ResultRow evaluate_point(const ScenarioConfig &cfg, const Params &params)
{
    ResultRow row;
    switch (cfg.model)
    {
    case ModelKind::ExplicitSubband:
    case ModelKind::Circulant:
    {
        // Budgets may be swept, so rebuild from the parameter map; the
        // channel itself has no sweepable scalars.
        const auto ch = build_subband(cfg);
        bool first = true;
        for (BoundKind b : cfg.bounds)
        {
            const auto r = eval_subband_bound(b, ch, params.at("p_s"), params.at("p_r"));
            row.values.push_back(r.value);
            row.residual = std::max(row.residual, r.residual);
            if (first)
                row.binding = r.binding;
            first = false;
        }
        break;
    }
    case ModelKind::LowpassEqual:
    case ModelKind::LowpassUnequal:
    {
        LowpassRelaySpec spec;
        spec.n_1 = params.at("n_1");
        spec.n_2 = params.at("n_2");
        spec.p_s = params.at("p_s");
        spec.p_r = params.at("p_r");
        if (cfg.model == ModelKind::LowpassEqual)
        {
            spec.w = spec.w_sr = spec.w_sd = spec.w_rd = params.at("w");
            const auto r = equal_bandwidth_capacity(spec);
            row.values.push_back(r.capacity);
            row.binding = r.alpha_star >= 1.0 - 1e-9 ? binding_name(Binding::BroadcastCut)
                                                     : "balanced";
        }
        else
        {
            spec.w_sd = params.at("w_sd");
            spec.w_sr = params.at("w_sr");
            spec.w_rd = params.at("w_rd");
            spec.w = spec.w_sd;
            const auto r = unequal_bandwidth_capacity(spec);
            row.values.push_back(r.capacity);
        }
        break;
    }
    case ModelKind::Underwater:
    {
        const auto spec = build_underwater(cfg, params);
        const auto avg =
            underwater_average_rates(spec, params.at("p_t"), cfg.resolved_draws());
        row.values.push_back(avg.df);      // df-waterfill column
        row.values.push_back(avg.direct);  // baseline columns, always emitted
        row.values.push_back(avg.two_hop);
        break;
    }
    case ModelKind::Asynchronous:
    {
        AsynchGeometry geo;
        geo.d = params.at("d");
        geo.alpha_att = params.at("alpha_att");
        const auto b =
            asynch_bounds(geo, cfg.resolved_n(), params.at("p_s"), params.at("p_r"));
        for (BoundKind k : cfg.bounds)
        {
            if (k == BoundKind::Df)
                row.values.emplace_back(b.df);
            else if (k == BoundKind::Cutset)
                row.values.emplace_back(b.cutset);
            else if (b.cf_feasible)
                row.values.emplace_back(b.cf);
            else
            {
                row.values.emplace_back(std::nullopt);
                row.status = "infeasible";
            }
        }
        break;
    }
    }

    // Sandwich check: achievable bounds must not exceed the cut-set bound
    // beyond numerical tolerance; tag the row for downstream inspection.
    std::optional<double> cutset;
    for (std::size_t i = 0; i < cfg.bounds.size(); ++i)
        if (cfg.bounds[i] == BoundKind::Cutset && i < row.values.size())
            cutset = row.values[i];
    if (cutset && row.status == "ok")
    {
        const double tol = 1e-9 * std::max(1.0, std::abs(*cutset));
        for (std::size_t i = 0; i < cfg.bounds.size(); ++i)
            if (cfg.bounds[i] != BoundKind::Cutset && i < row.values.size() &&
                row.values[i] && *row.values[i] > *cutset + tol)
                row.status = "residual";
    }

    // The deliverable never contains NaN; a non-finite rate is a solver bug.
    for (const auto &v : row.values)
        if (v && !std::isfinite(*v))
            throw SolverError("non-finite rate produced at a sweep point");
    return row;
}

std::vector<std::string> column_names(const ScenarioConfig &cfg)
{
    std::vector<std::string> cols;
    for (BoundKind b : cfg.bounds)
        cols.push_back(bound_name(b));
    if (cfg.model == ModelKind::Underwater)
    {
        cols.push_back("direct");
        cols.push_back("two-hop");
    }
    return cols;
}

std::string render_csv(const ScenarioConfig &cfg, const RunOutput &out, bool bits)
{
    std::string text;
    const std::string sweep_hdr =
        cfg.sweep ? "sweep:" + cfg.sweep->parameter : std::string("sweep:none");
    text += csv_field(sweep_hdr);
    for (const auto &c : out.columns)
        text += "," + csv_field(c + " (" + out.unit + ")");
    text += ",binding,residual,status\r\n";
    for (const auto &row : out.rows)
    {
        text += row.sweep_value ? fmt12(*row.sweep_value) : std::string("none");
        for (const auto &v : row.values)
        {
            text += ",";
            if (v)
                text += fmt12(bits ? *v / kLn2 : *v);
        }
        text += "," + csv_field(row.binding);
        text += "," + fmt12(row.residual);
        text += "," + csv_field(row.status) + "\r\n";
    }
    return text;
}

std::string render_summary(const ScenarioConfig &cfg, const RunOutput &out, int jobs, bool bits)
{
    std::ostringstream s;
    s << "scenario: model=" << model_name(cfg.model) << " n=" << cfg.resolved_n()
      << " seed=" << cfg.seed;
    if (cfg.model == ModelKind::Underwater)
        s << " draws=" << cfg.resolved_draws();
    s << "\n";
    if (cfg.sweep)
        s << "sweep: " << cfg.sweep->parameter << " from " << fmt6(cfg.sweep->start) << " to "
          << fmt6(cfg.sweep->stop) << " in " << cfg.sweep->steps << " steps\n";
    else
        s << "sweep: none\n";
    s << "unit: " << out.unit << "\n\n";

    auto cell = [](const std::string &v) {
        std::string c = v;
        if (c.size() < 14)
            c.insert(0, 14 - c.size(), ' ');
        return c;
    };
    s << cell(cfg.sweep ? cfg.sweep->parameter : "point");
    for (const auto &c : out.columns)
        s << cell(c);
    s << cell("binding") << cell("residual") << cell("status") << cell("ms") << "\n";
    for (const auto &row : out.rows)
    {
        s << cell(row.sweep_value ? fmt6(*row.sweep_value) : "none");
        for (const auto &v : row.values)
            s << cell(v ? fmt6(bits ? *v / kLn2 : *v) : "-");
        s << cell(row.binding) << cell(fmt6(row.residual)) << cell(row.status)
          << cell(fmt6(row.wall_ms)) << "\n";
    }
    s << "\ntotal: " << fmt6(out.total_ms) << " ms over " << out.rows.size()
      << (out.rows.size() == 1 ? " point" : " points") << " (jobs=" << jobs << ")\n";
    return s.str();
}

} // namespace

RunOutput run_scenario(const ScenarioConfig &cfg, int jobs, bool bits)
{
    {
        ValidationReport rep = validate_scenario(cfg);
        if (!rep.ok())
            throw ConfigError("invalid scenario: " + rep.violations.front() +
                              (rep.violations.size() > 1
                                   ? " (+" + std::to_string(rep.violations.size() - 1) +
                                         " more; run validate)"
                                   : ""));
    }
    if (jobs < 1)
        throw InvalidArgumentError("job count must be at least 1");

    // Base parameters: registry defaults overlaid with the config scalars.
    const Params base = effective_parameters(cfg);

    const int points = cfg.sweep ? cfg.sweep->steps : 1;
    std::vector<ResultRow> rows(points);
    std::vector<std::exception_ptr> errors(points);

    const auto t0 = std::chrono::steady_clock::now();
    auto eval_one = [&](int i) {
        const auto p0 = std::chrono::steady_clock::now();
        ResultRow row;
        Params params = base;
        if (cfg.sweep)
        {
            const auto &sw = *cfg.sweep;
            const double v =
                sw.start + (sw.stop - sw.start) * static_cast<double>(i) / (sw.steps - 1);
            params[sw.parameter] = v;
            row = evaluate_point(cfg, params);
            row.sweep_value = v;
        }
        else
            row = evaluate_point(cfg, params);
        row.index = i;
        row.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - p0)
                          .count();
        rows[i] = std::move(row);
    };

    if (jobs == 1 || points == 1)
    {
        for (int i = 0; i < points; ++i)
        {
            try
            {
                eval_one(i);
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }
    }
    else
    {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (int i = next.fetch_add(1); i < points; i = next.fetch_add(1))
            {
                try
                {
                    eval_one(i);
                }
                catch (...)
                {
                    errors[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        const int nthreads = std::min(jobs, points);
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }

    for (int i = 0; i < points; ++i)
        if (errors[i])
        {
            std::string context = "point " + std::to_string(i);
            if (cfg.sweep && rows[i].sweep_value)
                context += " (" + cfg.sweep->parameter + " = " + fmt6(*rows[i].sweep_value) + ")";
            else if (cfg.sweep)
            {
                const auto &sw = *cfg.sweep;
                context += " (" + sw.parameter + " = " +
                           fmt6(sw.start + (sw.stop - sw.start) * static_cast<double>(i) /
                                               (sw.steps - 1)) +
                           ")";
            }
            try
            {
                std::rethrow_exception(errors[i]);
            }
            catch (const std::exception &e)
            {
                throw SolverError("sweep " + context + ": " + e.what());
            }
        }

    RunOutput out;
    out.columns = column_names(cfg);
    const bool per_second =
        cfg.model == ModelKind::LowpassEqual || cfg.model == ModelKind::LowpassUnequal;
    out.unit = std::string(bits ? "bits" : "nats") + (per_second ? "/s" : "/channel-use");
    out.rows = std::move(rows);
    out.total_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    out.csv = render_csv(cfg, out, bits);
    out.summary = render_summary(cfg, out, jobs, bits);
    return out;
}

} // namespace relaycap
