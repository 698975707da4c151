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

#ifndef RELAYCAP_RUNNER_HPP
#define RELAYCAP_RUNNER_HPP

#include <optional>
#include <string>
#include <vector>

#include "relaycap/config.hpp"

// Scenario execution: expand the sweep grid, evaluate every point (optionally
// on a thread pool), and render a deterministic CSV plus a human-readable
// summary. The CSV is byte-identical for identical (config, seed) regardless
// of the job count; wall-clock timings therefore appear only in the summary.

namespace relaycap
{

// One sweep point. Rate values are stored in nats (per channel use, or per
// second for the bandwidth models) and converted at render time; a missing
// value (infeasible compress-forward point) renders as an empty CSV cell.
struct ResultRow
{
    int index = 0;
    std::optional<double> sweep_value;         // empty when the run has no sweep
    std::vector<std::optional<double>> values; // one per output column
    std::string binding = "none";              // constraint tag of the first bound
    double residual = 0.0;                     // max solver residual across bounds
    std::string status = "ok";                 // ok | infeasible | residual
    double wall_ms = 0.0;                      // per-point wall time (summary only)
};

struct RunOutput
{
    std::vector<std::string> columns; // bound columns (plus baseline columns)
    std::string unit;                 // e.g. "bits/channel-use"
    std::vector<ResultRow> rows;      // ordered by sweep index
    std::string csv;                  // deterministic rendering of the rows
    std::string summary;              // human table, includes timings
    double total_ms = 0.0;
};

// Execute a validated scenario. Throws ConfigError when validation fails
// (message carries the first violation), SolverError when a point fails to
// evaluate (message carries the sweep context). `jobs` >= 1 bounds the
// number of worker threads; `bits` selects bit units for rendered rates.
RunOutput run_scenario(const ScenarioConfig &cfg, int jobs = 1, bool bits = true);

} // namespace relaycap

#endif // RELAYCAP_RUNNER_HPP
