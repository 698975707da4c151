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

#include "relaycap/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "relaycap/circulant.hpp"
#include "relaycap/errors.hpp"

namespace relaycap
{

namespace
{

struct ScalarField
{
    const char *name;
    bool required;
    double def; // used when !required
};

struct ListField
{
    const char *name;
    bool required;
};

// How the scenario-level band count applies to a model.
enum class NPolicy
{
    FromLists,   // derived from the gain lists; explicit n must match
    Required,    // must be given
    Defaulted64, // optional, default 64
    Unused       // not meaningful; giving one is a violation
};

struct ModelRegistry
{
    std::vector<ScalarField> scalars;
    std::vector<ListField> lists;
    NPolicy n_policy;
    bool draws_allowed;
};

const ModelRegistry &registry(ModelKind m)
{
    static const ModelRegistry explicit_subband{
        {{"p_s", true, 0.0}, {"p_r", true, 0.0}},
        {{"a_sr", true}, {"a_sd", true}, {"a_rd", true}},
        NPolicy::FromLists,
        false};
    static const ModelRegistry circulant{
        {{"p_s", true, 0.0}, {"p_r", true, 0.0}},
        {{"h_sr_re", true},
         {"h_sr_im", false},
         {"h_sd_re", true},
         {"h_sd_im", false},
         {"h_rd_re", true},
         {"h_rd_im", false},
         {"noise_r", true},
         {"noise_d", true}},
        NPolicy::Required,
        false};
    static const ModelRegistry lowpass_equal{
        {{"w", true, 0.0},
         {"n_1", true, 0.0},
         {"n_2", true, 0.0},
         {"p_s", true, 0.0},
         {"p_r", true, 0.0}},
        {},
        NPolicy::Unused,
        false};
    static const ModelRegistry lowpass_unequal{
        {{"w_sd", true, 0.0},
         {"w_sr", true, 0.0},
         {"w_rd", true, 0.0},
         {"n_1", true, 0.0},
         {"n_2", true, 0.0},
         {"p_s", true, 0.0},
         {"p_r", true, 0.0}},
        {},
        NPolicy::Unused,
        false};
    static const ModelRegistry underwater{
        {{"a", true, 0.0},
         {"h", false, 0.25},
         {"d_sd", false, 1.0},
         {"f_c", false, 27.0},
         {"w", false, 10.0},
         {"k", false, 1.5},
         {"a_0", false, 1.0},
         {"s", false, 0.0},
         {"wind", false, 10.0},
         {"p_t", true, 0.0},
         {"coherence_sr", false, 10.0 / 3.0},
         {"coherence_sd", false, 5.0},
         {"coherence_rd", false, 10.0 / 3.0}},
        {},
        NPolicy::Defaulted64,
        true};
    static const ModelRegistry asynchronous{
        {{"d", true, 0.0},
         {"alpha_att", false, 2.0},
         {"p_s", true, 0.0},
         {"p_r", true, 0.0}},
        {},
        NPolicy::Defaulted64,
        false};
    switch (m)
    {
    case ModelKind::ExplicitSubband:
        return explicit_subband;
    case ModelKind::Circulant:
        return circulant;
    case ModelKind::LowpassEqual:
        return lowpass_equal;
    case ModelKind::LowpassUnequal:
        return lowpass_unequal;
    case ModelKind::Underwater:
        return underwater;
    case ModelKind::Asynchronous:
        return asynchronous;
    }
    return explicit_subband; // unreachable
}

std::string trim(const std::string &s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

bool valid_key(const std::string &k)
{
    if (k.empty())
        return false;
    for (char c : k)
        if (!(std::islower(static_cast<unsigned char>(c)) ||
              std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
            return false;
    return true;
}

std::vector<std::string> split_commas(const std::string &s)
{
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, ','))
        out.push_back(trim(cur));
    if (!s.empty() && s.back() == ',')
        out.push_back("");
    return out;
}

bool parse_double(const std::string &tok, double &out)
{
    if (tok.empty())
        return false;
    errno = 0;
    char *end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    return errno == 0 && end == tok.c_str() + tok.size() && std::isfinite(out);
}

bool parse_int(const std::string &tok, long long &out)
{
    if (tok.empty())
        return false;
    errno = 0;
    char *end = nullptr;
    out = std::strtoll(tok.c_str(), &end, 10);
    return errno == 0 && end == tok.c_str() + tok.size();
}

bool parse_u64(const std::string &tok, std::uint64_t &out)
{
    if (tok.empty() || tok[0] == '-')
        return false;
    errno = 0;
    char *end = nullptr;
    out = std::strtoull(tok.c_str(), &end, 10);
    return errno == 0 && end == tok.c_str() + tok.size();
}

// Effective scalar value: explicit setting, else registry default.
double effective(const ScenarioConfig &cfg, const std::string &name)
{
    auto it = cfg.scalars.find(name);
    if (it != cfg.scalars.end())
        return it->second;
    for (const auto &f : registry(cfg.model).scalars)
        if (name == f.name)
            return f.def;
    return 0.0;
}

void require_finite_nonneg(const std::map<std::string, double> &vals, const char *name,
                           const std::string &prefix, std::vector<std::string> &out)
{
    auto it = vals.find(name);
    if (it == vals.end())
        return; // missing-required is reported separately
    if (!(it->second >= 0.0))
        out.push_back(prefix + "." + name + ": must be nonnegative (got " +
                      std::to_string(it->second) + ")");
}

void require_positive(const std::map<std::string, double> &vals, const char *name,
                      const std::string &prefix, std::vector<std::string> &out)
{
    auto it = vals.find(name);
    if (it == vals.end())
        return;
    if (!(it->second > 0.0))
        out.push_back(prefix + "." + name + ": must be positive (got " +
                      std::to_string(it->second) + ")");
}

// Value-level invariants of the model parameters. `vals` holds every scalar
// with defaults applied (and a sweep override, when checking endpoints);
// `prefix` labels the report entries.
void check_model_values(const ScenarioConfig &cfg, const std::map<std::string, double> &vals,
                        const std::string &prefix, std::vector<std::string> &out)
{
    switch (cfg.model)
    {
    case ModelKind::ExplicitSubband:
    {
        require_finite_nonneg(vals, "p_s", prefix, out);
        require_finite_nonneg(vals, "p_r", prefix, out);
        std::size_t len = 0;
        bool first = true;
        for (const char *name : {"a_sr", "a_sd", "a_rd"})
        {
            auto it = cfg.lists.find(name);
            if (it == cfg.lists.end())
                continue;
            if (first)
            {
                len = it->second.size();
                first = false;
            }
            else if (it->second.size() != len)
                out.push_back(prefix + "." + name + ": length " +
                              std::to_string(it->second.size()) +
                              " does not match the other gain lists (" + std::to_string(len) +
                              ")");
            for (double g : it->second)
                if (!(g >= 0.0) || !std::isfinite(g))
                {
                    out.push_back(prefix + "." + name +
                                  ": gains must be finite and nonnegative");
                    break;
                }
        }
        if (!first && len < 2)
            out.push_back(prefix + ".a_sr: violates n >= 2 (got " + std::to_string(len) +
                          " bands)");
        if (cfg.n && !first && static_cast<std::size_t>(*cfg.n) != len)
            out.push_back("scenario.n: does not match the gain-list length (" +
                          std::to_string(*cfg.n) + " vs " + std::to_string(len) + ")");
        break;
    }
    case ModelKind::Circulant:
    {
        require_finite_nonneg(vals, "p_s", prefix, out);
        require_finite_nonneg(vals, "p_r", prefix, out);
        const int n = cfg.n.value_or(0);
        auto list_len = [&](const char *name) -> std::size_t {
            auto it = cfg.lists.find(name);
            return it == cfg.lists.end() ? 0 : it->second.size();
        };
        for (const char *re : {"h_sr_re", "h_sd_re", "h_rd_re"})
        {
            const std::string im = std::string(re).substr(0, 5) + "im";
            const std::size_t lre = list_len(re), lim = list_len(im.c_str());
            if (lre == 0)
                continue;
            if (lim != 0 && lim != lre)
                out.push_back(prefix + "." + im + ": length " + std::to_string(lim) +
                              " does not match " + re + " (" + std::to_string(lre) + ")");
            if (n >= 2 && lre > static_cast<std::size_t>(n))
                out.push_back(prefix + "." + re + ": " + std::to_string(lre) +
                              " taps exceed the block length n=" + std::to_string(n));
        }
        for (const char *nz : {"noise_r", "noise_d"})
        {
            const std::size_t l = list_len(nz);
            if (l == 0)
                continue;
            if (n >= 2 && l > static_cast<std::size_t>(n))
                out.push_back(prefix + "." + nz + ": " + std::to_string(l) +
                              " lags exceed the block length n=" + std::to_string(n));
            const auto &lags = cfg.lists.at(nz);
            if (!(lags[0] > 0.0))
                out.push_back(prefix + "." + nz + ": zero-lag autocorrelation must be positive");
        }
        break;
    }
    case ModelKind::LowpassEqual:
        require_positive(vals, "w", prefix, out);
        require_positive(vals, "n_1", prefix, out);
        require_positive(vals, "n_2", prefix, out);
        require_finite_nonneg(vals, "p_s", prefix, out);
        require_finite_nonneg(vals, "p_r", prefix, out);
        break;
    case ModelKind::LowpassUnequal:
    {
        require_positive(vals, "w_sd", prefix, out);
        require_positive(vals, "w_sr", prefix, out);
        require_positive(vals, "w_rd", prefix, out);
        require_positive(vals, "n_1", prefix, out);
        require_positive(vals, "n_2", prefix, out);
        require_finite_nonneg(vals, "p_s", prefix, out);
        require_finite_nonneg(vals, "p_r", prefix, out);
        const double wsd = vals.at("w_sd"), wsr = vals.at("w_sr"), wrd = vals.at("w_rd");
        if (wsd > wsr || wsd > wrd)
            out.push_back(prefix + ".w_sd: the shared band cannot exceed either link band");
        break;
    }
    case ModelKind::Underwater:
    {
        require_finite_nonneg(vals, "a", prefix, out);
        require_finite_nonneg(vals, "h", prefix, out);
        require_positive(vals, "d_sd", prefix, out);
        require_positive(vals, "f_c", prefix, out);
        require_positive(vals, "w", prefix, out);
        require_positive(vals, "k", prefix, out);
        require_positive(vals, "a_0", prefix, out);
        require_finite_nonneg(vals, "wind", prefix, out);
        require_finite_nonneg(vals, "p_t", prefix, out);
        require_positive(vals, "coherence_sr", prefix, out);
        require_positive(vals, "coherence_sd", prefix, out);
        require_positive(vals, "coherence_rd", prefix, out);
        const double s = vals.at("s");
        if (!(s >= 0.0 && s <= 1.0))
            out.push_back(prefix + ".s: shipping activity must lie in [0, 1]");
        const double a = vals.at("a"), h = vals.at("h"), d_sd = vals.at("d_sd");
        if (std::hypot(a, h) <= 0.0)
            out.push_back(prefix + ".a: source-relay distance must be positive (a=h=0)");
        if (std::hypot(d_sd - a, h) <= 0.0)
            out.push_back(prefix + ".a: relay-destination distance must be positive");
        if (!(vals.at("f_c") - vals.at("w") / 2.0 > 0.0))
            out.push_back(prefix + ".w: band edge f_c - w/2 must stay above zero frequency");
        break;
    }
    case ModelKind::Asynchronous:
    {
        require_finite_nonneg(vals, "p_s", prefix, out);
        require_finite_nonneg(vals, "p_r", prefix, out);
        const double d = vals.at("d");
        if (!(d > 0.0 && d < 1.0))
            out.push_back(prefix + ".d: relay position must lie strictly inside (0, 1)");
        break;
    }
    }
}

std::map<std::string, double> effective_scalars(const ScenarioConfig &cfg)
{
    std::map<std::string, double> vals;
    for (const auto &f : registry(cfg.model).scalars)
        vals[f.name] = effective(cfg, f.name);
    return vals;
}

} // namespace

const char *model_name(ModelKind m)
{
    switch (m)
    {
    case ModelKind::ExplicitSubband:
        return "explicit-subband";
    case ModelKind::Circulant:
        return "circulant";
    case ModelKind::LowpassEqual:
        return "lowpass-equal";
    case ModelKind::LowpassUnequal:
        return "lowpass-unequal";
    case ModelKind::Underwater:
        return "underwater";
    case ModelKind::Asynchronous:
        return "asynchronous";
    }
    return "unknown";
}

const char *bound_name(BoundKind b)
{
    switch (b)
    {
    case BoundKind::Df:
        return "df";
    case BoundKind::DfWaterfill:
        return "df-waterfill";
    case BoundKind::CfKkt:
        return "cf-kkt";
    case BoundKind::CfModified:
        return "cf-modified";
    case BoundKind::Cutset:
        return "cutset";
    }
    return "unknown";
}

std::optional<ModelKind> model_from_name(const std::string &name)
{
    for (ModelKind m : {ModelKind::ExplicitSubband, ModelKind::Circulant, ModelKind::LowpassEqual,
                        ModelKind::LowpassUnequal, ModelKind::Underwater, ModelKind::Asynchronous})
        if (name == model_name(m))
            return m;
    return std::nullopt;
}

std::optional<BoundKind> bound_from_name(const std::string &name)
{
    for (BoundKind b : {BoundKind::Df, BoundKind::DfWaterfill, BoundKind::CfKkt,
                        BoundKind::CfModified, BoundKind::Cutset})
        if (name == bound_name(b))
            return b;
    return std::nullopt;
}

int ScenarioConfig::resolved_n() const
{
    switch (registry(model).n_policy)
    {
    case NPolicy::FromLists:
    {
        if (n)
            return *n;
        auto it = lists.find("a_sr");
        return it == lists.end() ? 0 : static_cast<int>(it->second.size());
    }
    case NPolicy::Required:
        return n.value_or(0);
    case NPolicy::Defaulted64:
        return n.value_or(64);
    case NPolicy::Unused:
        return 2;
    }
    return 0;
}

int ScenarioConfig::resolved_draws() const
{
    return draws.value_or(500);
}

std::vector<std::string> sweepable_fields(ModelKind model)
{
    std::vector<std::string> out;
    for (const auto &f : registry(model).scalars)
        out.push_back(f.name);
    return out;
}

std::map<std::string, double> effective_parameters(const ScenarioConfig &cfg)
{
    return effective_scalars(cfg);
}

std::vector<BoundKind> allowed_bounds(ModelKind model)
{
    switch (model)
    {
    case ModelKind::ExplicitSubband:
    case ModelKind::Circulant:
        return {BoundKind::Df, BoundKind::DfWaterfill, BoundKind::CfKkt, BoundKind::CfModified,
                BoundKind::Cutset};
    case ModelKind::LowpassEqual:
    case ModelKind::LowpassUnequal:
        return {BoundKind::Df};
    case ModelKind::Underwater:
        return {BoundKind::DfWaterfill};
    case ModelKind::Asynchronous:
        return {BoundKind::Df, BoundKind::CfKkt, BoundKind::Cutset};
    }
    return {};
}

ScenarioConfig parse_scenario_text(const std::string &text, const std::string &origin,
                                   ValidationReport &syntax)
{
    ScenarioConfig cfg;
    cfg.source_path = origin;
    auto flag = [&](int line, const std::string &msg) {
        syntax.violations.push_back(origin + ":" + std::to_string(line) + ": " + msg);
    };

    enum class Section
    {
        None,
        Scenario,
        Model,
        Sweep,
        Unknown
    };
    Section section = Section::None;
    std::set<std::string> seen_sections;
    std::set<std::string> seen_keys; // "<section>/<key>"

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    bool model_set = false;
    while (std::getline(in, raw))
    {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r')
            raw.pop_back();
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';')
            continue;
        if (line.front() == '[')
        {
            if (line.back() != ']')
            {
                flag(lineno, "malformed section header '" + line + "'");
                section = Section::Unknown;
                continue;
            }
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (!seen_sections.insert(name).second)
                flag(lineno, "duplicate section [" + name + "]");
            if (name == "scenario")
                section = Section::Scenario;
            else if (name == "model")
                section = Section::Model;
            else if (name == "sweep")
            {
                section = Section::Sweep;
                if (!cfg.sweep)
                    cfg.sweep = SweepSpec{};
            }
            else
            {
                flag(lineno, "unknown section [" + name + "] (expected scenario, model, or sweep)");
                section = Section::Unknown;
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
        {
            flag(lineno, "expected 'key = value', got '" + line + "'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!valid_key(key))
        {
            flag(lineno, "invalid key '" + key + "' (lowercase letters, digits, underscores)");
            continue;
        }
        if (section == Section::None)
        {
            flag(lineno, "key '" + key + "' appears before any section header");
            continue;
        }
        if (section == Section::Unknown)
            continue; // already reported the section itself
        const std::string sect_name = section == Section::Scenario ? "scenario"
                                      : section == Section::Model  ? "model"
                                                                   : "sweep";
        if (!seen_keys.insert(sect_name + "/" + key).second)
        {
            flag(lineno, "duplicate key '" + sect_name + "." + key + "'");
            continue;
        }

        if (section == Section::Scenario)
        {
            if (key == "model")
            {
                auto m = model_from_name(value);
                if (!m)
                    flag(lineno, "scenario.model: unknown model '" + value + "'");
                else
                {
                    cfg.model = *m;
                    model_set = true;
                }
            }
            else if (key == "bounds")
            {
                for (const auto &tok : split_commas(value))
                {
                    auto b = bound_from_name(tok);
                    if (!b)
                        flag(lineno, "scenario.bounds: unknown bound '" + tok + "'");
                    else if (std::find(cfg.bounds.begin(), cfg.bounds.end(), *b) !=
                             cfg.bounds.end())
                        flag(lineno, "scenario.bounds: bound '" + tok + "' listed twice");
                    else
                        cfg.bounds.push_back(*b);
                }
            }
            else if (key == "n")
            {
                long long v;
                if (!parse_int(value, v))
                    flag(lineno, "scenario.n: expected an integer, got '" + value + "'");
                else
                    cfg.n = static_cast<int>(v);
            }
            else if (key == "draws")
            {
                long long v;
                if (!parse_int(value, v))
                    flag(lineno, "scenario.draws: expected an integer, got '" + value + "'");
                else
                    cfg.draws = static_cast<int>(v);
            }
            else if (key == "seed")
            {
                std::uint64_t v;
                if (!parse_u64(value, v))
                    flag(lineno, "scenario.seed: expected an unsigned integer, got '" + value +
                                     "'");
                else
                    cfg.seed = v;
            }
            else if (key == "output")
                cfg.output = value;
            else
                flag(lineno, "scenario." + key + ": unknown key");
        }
        else if (section == Section::Sweep)
        {
            if (key == "parameter")
                cfg.sweep->parameter = value;
            else if (key == "start" || key == "stop")
            {
                double v;
                if (!parse_double(value, v))
                    flag(lineno, "sweep." + key + ": expected a number, got '" + value + "'");
                else
                    (key == "start" ? cfg.sweep->start : cfg.sweep->stop) = v;
            }
            else if (key == "steps")
            {
                long long v;
                if (!parse_int(value, v))
                    flag(lineno, "sweep.steps: expected an integer, got '" + value + "'");
                else
                    cfg.sweep->steps = static_cast<int>(v);
            }
            else
                flag(lineno, "sweep." + key + ": unknown key");
        }
        else // model section: every value is a number or a comma list
        {
            const auto toks = split_commas(value);
            std::vector<double> parsed;
            bool ok = !toks.empty();
            for (const auto &tok : toks)
            {
                double v;
                if (!parse_double(tok, v))
                {
                    ok = false;
                    break;
                }
                parsed.push_back(v);
            }
            if (!ok)
                flag(lineno, "model." + key + ": expected a number or comma-separated numbers, got '" +
                                 value + "'");
            else if (parsed.size() == 1)
                cfg.scalars[key] = parsed[0];
            else
                cfg.lists[key] = std::move(parsed);
        }
    }
    if (!model_set)
        syntax.violations.push_back(origin + ": scenario.model: required key is missing");
    else
    {
        // A lone number is a legal one-element list where the model expects a
        // list (memoryless link, white noise); promote it now that the model
        // (and hence each key's type) is known.
        for (const auto &f : registry(cfg.model).lists)
        {
            auto it = cfg.scalars.find(f.name);
            if (it == cfg.scalars.end())
                continue;
            cfg.lists[f.name] = {it->second};
            cfg.scalars.erase(it);
        }
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::string &path, ValidationReport &syntax)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        syntax.violations.push_back(path + ": cannot open config file");
        return {};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path, syntax);
}

ValidationReport validate_scenario(const ScenarioConfig &cfg)
{
    ValidationReport rep;
    auto &out = rep.violations;
    const ModelRegistry &reg = registry(cfg.model);

    // Bounds: nonempty, and every entry available for this model.
    if (cfg.bounds.empty())
        out.push_back("scenario.bounds: at least one bound must be requested");
    const auto allowed = allowed_bounds(cfg.model);
    for (BoundKind b : cfg.bounds)
        if (std::find(allowed.begin(), allowed.end(), b) == allowed.end())
        {
            std::string names;
            for (BoundKind a : allowed)
                names += std::string(names.empty() ? "" : ", ") + bound_name(a);
            out.push_back(std::string("scenario.bounds: '") + bound_name(b) +
                          "' is not available for model '" + model_name(cfg.model) +
                          "' (available: " + names + ")");
        }

    // Band count policy.
    switch (reg.n_policy)
    {
    case NPolicy::FromLists:
        if (cfg.n && *cfg.n < 2)
            out.push_back("scenario.n: violates n >= 2 (got " + std::to_string(*cfg.n) + ")");
        break;
    case NPolicy::Required:
        if (!cfg.n)
            out.push_back("scenario.n: required for model '" + std::string(model_name(cfg.model)) +
                          "'");
        else if (*cfg.n < 2)
            out.push_back("scenario.n: violates n >= 2 (got " + std::to_string(*cfg.n) + ")");
        break;
    case NPolicy::Defaulted64:
        if (cfg.n && *cfg.n < 2)
            out.push_back("scenario.n: violates n >= 2 (got " + std::to_string(*cfg.n) + ")");
        break;
    case NPolicy::Unused:
        if (cfg.n)
            out.push_back("scenario.n: not meaningful for model '" +
                          std::string(model_name(cfg.model)) + "'");
        break;
    }

    // Draw count policy.
    if (cfg.draws && !reg.draws_allowed)
        out.push_back("scenario.draws: only meaningful for model 'underwater'");
    if (reg.draws_allowed && cfg.resolved_draws() < 1)
        out.push_back("scenario.draws: must be at least 1 (got " +
                      std::to_string(cfg.resolved_draws()) + ")");

    // Field registry: unknown keys, required keys, scalar/list shape.
    for (const auto &[key, val] : cfg.scalars)
    {
        (void)val;
        const bool is_scalar = std::any_of(reg.scalars.begin(), reg.scalars.end(),
                                           [&](const ScalarField &f) { return key == f.name; });
        const bool is_list = std::any_of(reg.lists.begin(), reg.lists.end(),
                                         [&](const ListField &f) { return key == f.name; });
        if (!is_scalar && !is_list)
            out.push_back("model." + key + ": unknown field for model '" +
                          model_name(cfg.model) + "'");
    }
    for (const auto &[key, val] : cfg.lists)
    {
        (void)val;
        const bool is_list = std::any_of(reg.lists.begin(), reg.lists.end(),
                                         [&](const ListField &f) { return key == f.name; });
        if (!is_list)
        {
            const bool is_scalar = std::any_of(reg.scalars.begin(), reg.scalars.end(),
                                               [&](const ScalarField &f) { return key == f.name; });
            out.push_back("model." + key +
                          (is_scalar ? ": expected a single number, got a list"
                                     : ": unknown field for model '" +
                                           std::string(model_name(cfg.model)) + "'"));
        }
    }
    for (const auto &f : reg.scalars)
        if (f.required && !cfg.scalars.count(f.name) && !cfg.lists.count(f.name))
            out.push_back(std::string("model.") + f.name + ": required field is missing");
    for (const auto &f : reg.lists)
    {
        if (cfg.lists.count(f.name))
            continue;
        if (cfg.scalars.count(f.name))
            out.push_back(std::string("model.") + f.name +
                          ": expected a comma-separated list (violates n >= 2)");
        else if (f.required)
            out.push_back(std::string("model.") + f.name + ": required field is missing");
    }

    // Value invariants at the base parameter point.
    const auto vals = effective_scalars(cfg);
    const bool fields_ok = out.empty();
    check_model_values(cfg, vals, "model", out);

    // The circulant construction has nontrivial feasibility (noise spectra
    // must stay positive); exercise the real constructor when the field-level
    // checks passed, so spectral problems surface at validate time.
    if (cfg.model == ModelKind::Circulant && fields_ok && out.empty() && cfg.n && *cfg.n >= 2)
    {
        try
        {
            CirculantChannel ch;
            ch.n = *cfg.n;
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
            (void)subband_decompose(ch);
        }
        catch (const Error &e)
        {
            out.push_back(std::string("model: ") + e.what());
        }
    }

    // Sweep: shape, sweepable parameter, and model validity at both ends.
    if (cfg.sweep)
    {
        const auto &sw = *cfg.sweep;
        if (sw.steps < 2)
            out.push_back("sweep.steps: violates steps >= 2 when sweeping (got " +
                          std::to_string(sw.steps) + ")");
        if (!std::isfinite(sw.start) || !std::isfinite(sw.stop))
            out.push_back("sweep.start: start and stop must be finite");
        const auto fields = sweepable_fields(cfg.model);
        if (std::find(fields.begin(), fields.end(), sw.parameter) == fields.end())
        {
            std::string names;
            for (const auto &f : fields)
                names += (names.empty() ? "" : ", ") + f;
            out.push_back("sweep.parameter: '" + sw.parameter +
                          "' is not a sweepable scalar field of model '" + model_name(cfg.model) +
                          "' (sweepable: " + names + ")");
        }
        else if (fields_ok)
        {
            for (double endpoint : {sw.start, sw.stop})
            {
                auto v = vals;
                v[sw.parameter] = endpoint;
                std::vector<std::string> end_viol;
                check_model_values(cfg, v, "sweep", end_viol);
                char buf[64];
                std::snprintf(buf, sizeof buf, "%g", endpoint);
                for (const auto &msg : end_viol)
                    out.push_back(msg + " [at " + sw.parameter + " = " + buf + "]");
                if (endpoint == sw.stop)
                    break;
            }
            // Deduplicate identical endpoint messages (start == stop etc.).
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
        }
    }

    return rep;
}

} // namespace relaycap
