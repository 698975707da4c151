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

#ifndef RELAYCAP_CONFIG_HPP
#define RELAYCAP_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

// Declarative scenario configs: a flat key-value text format (see
// docs/config.md for the grammar) describing one channel model, the rate
// bounds to compute, and an optional one-parameter sweep. Parsing and
// validation are separate passes so `validate` can always produce a full
// report instead of stopping at the first problem.

namespace relaycap
{

enum class ModelKind
{
    ExplicitSubband, // per-band gain triples given directly
    Circulant,       // ISI taps + noise autocorrelations, DFT-decomposed
    LowpassEqual,    // flat lowpass links, equal bandwidths
    LowpassUnequal,  // flat lowpass links, unequal bandwidths
    Underwater,      // acoustic fading scenario, averaged over draws
    Asynchronous     // phase-uncertain line network
};

enum class BoundKind
{
    Df,          // maximin decode-forward rate
    DfWaterfill, // decode-forward under a single total power budget
    CfKkt,       // compress-forward, full KKT allocation
    CfModified,  // compress-forward with the closed-form compression profile
    Cutset       // cut-set upper bound
};

const char *model_name(ModelKind m);
const char *bound_name(BoundKind b);
std::optional<ModelKind> model_from_name(const std::string &name);
std::optional<BoundKind> bound_from_name(const std::string &name);

// Optional one-parameter sweep: `parameter` must name a sweepable scalar of
// the model section; the grid is `steps` uniform points from start to stop.
struct SweepSpec
{
    std::string parameter;
    double start = 0.0;
    double stop = 0.0;
    int steps = 0;
};

// One scenario: a model, its numeric parameters (kept as generic maps so a
// sweep can override any scalar), the requested bounds, and run settings.
struct ScenarioConfig
{
    ModelKind model = ModelKind::ExplicitSubband;
    std::vector<BoundKind> bounds;
    std::optional<SweepSpec> sweep;
    std::optional<int> n;     // band count, where the model uses one
    std::optional<int> draws; // fading draws (underwater only)
    std::uint64_t seed = 1;
    std::string output; // CSV path; empty = derive from the config filename

    std::map<std::string, double> scalars;
    std::map<std::string, std::vector<double>> lists;

    std::string source_path; // where this config was loaded from

    // Effective values after per-model defaulting.
    int resolved_n() const;
    int resolved_draws() const;
};

struct ValidationReport
{
    std::vector<std::string> violations; // "<section>.<field>: <message>"
    bool ok() const { return violations.empty(); }
};

// Parse config text. Grammar or type problems are appended to `syntax`
// (field-path messages); the returned config carries everything that did
// parse. `origin` labels messages (usually the file path).
ScenarioConfig parse_scenario_text(const std::string &text, const std::string &origin,
                                   ValidationReport &syntax);

// Read and parse a config file. A missing/unreadable file becomes a
// violation in `syntax` rather than an exception.
ScenarioConfig load_scenario(const std::string &path, ValidationReport &syntax);

// Semantic validation: model field registry (required/unknown keys), value
// invariants, bound availability, and sweep well-formedness including model
// validity at both sweep endpoints. Never throws; returns the full list.
ValidationReport validate_scenario(const ScenarioConfig &cfg);

// Scalar fields (with defaults applied) a sweep may override for `model`.
std::vector<std::string> sweepable_fields(ModelKind model);

// Every scalar parameter of the model with registry defaults applied to the
// fields the config leaves unset.
std::map<std::string, double> effective_parameters(const ScenarioConfig &cfg);

// Bounds the runner can compute for `model`, in canonical column order.
std::vector<BoundKind> allowed_bounds(ModelKind model);

} // namespace relaycap

#endif // RELAYCAP_CONFIG_HPP
