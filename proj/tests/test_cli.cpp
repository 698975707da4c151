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

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "relaycap/config.hpp"
#include "relaycap/errors.hpp"
#include "relaycap/models.hpp"
#include "relaycap/runner.hpp"

using namespace relaycap;
namespace fs = std::filesystem;

namespace
{

constexpr double kLn2 = 0.6931471805599453;

ScenarioConfig parse_ok(const std::string &text)
{
    ValidationReport syntax;
    auto cfg = parse_scenario_text(text, "mem", syntax);
    INFO((syntax.violations.empty() ? "" : syntax.violations.front()));
    REQUIRE(syntax.ok());
    return cfg;
}

std::vector<std::string> parse_errors(const std::string &text)
{
    ValidationReport syntax;
    (void)parse_scenario_text(text, "mem", syntax);
    return syntax.violations;
}

bool any_contains(const std::vector<std::string> &msgs, const std::string &needle)
{
    for (const auto &m : msgs)
        if (m.find(needle) != std::string::npos)
            return true;
    return false;
}

// Split a CSV body into lines, requiring CRLF terminators on every line.
std::vector<std::string> csv_lines(const std::string &csv)
{
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < csv.size())
    {
        const auto crlf = csv.find("\r\n", pos);
        REQUIRE(crlf != std::string::npos); // every line ends in CRLF
        lines.push_back(csv.substr(pos, crlf - pos));
        pos = crlf + 2;
    }
    return lines;
}

std::vector<std::string> split_fields(const std::string &line)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, ','))
        out.push_back(cur);
    if (!line.empty() && line.back() == ',')
        out.push_back("");
    return out;
}

const char *kTinySweep =
    "[scenario]\n"
    "model = circulant\n"
    "bounds = df, cutset\n"
    "n = 8\n"
    "[model]\n"
    "h_sr_re = 1, 0.4\n"
    "h_sd_re = 0.8, 0.1\n"
    "h_rd_re = 1.1\n"
    "noise_r = 1.0, 0.2\n"
    "noise_d = 1.0, 0.1\n"
    "p_s = 4\n"
    "p_r = 2\n"
    "[sweep]\n"
    "parameter = p_s\n"
    "start = 2\n"
    "stop = 6\n"
    "steps = 4\n";

} // namespace

TEST_CASE("config grammar: malformed lines are flagged with file and line", "[cli]")
{
    const auto v = parse_errors("[scenario\n"
                                "model = circulant\n"
                                "just some words\n");
    REQUIRE(any_contains(v, "mem:1:"));
    REQUIRE(any_contains(v, "malformed section header"));
    REQUIRE(any_contains(v, "mem:3:"));
    REQUIRE(any_contains(v, "expected 'key = value'"));
}

TEST_CASE("config grammar: keys must follow a section header", "[cli]")
{
    const auto v = parse_errors("model = circulant\n[scenario]\nmodel = circulant\n");
    REQUIRE(any_contains(v, "mem:1:"));
    REQUIRE(any_contains(v, "before any section header"));
}

TEST_CASE("config grammar: duplicate sections and keys are rejected", "[cli]")
{
    const auto dup_sect = parse_errors("[scenario]\nmodel = circulant\n[scenario]\n");
    REQUIRE(any_contains(dup_sect, "duplicate section [scenario]"));

    const auto dup_key = parse_errors("[scenario]\nmodel = circulant\n[model]\np_s = 1\np_s = 2\n");
    REQUIRE(any_contains(dup_key, "mem:5:"));
    REQUIRE(any_contains(dup_key, "duplicate key 'model.p_s'"));
}

TEST_CASE("config grammar: unknown names are rejected with context", "[cli]")
{
    REQUIRE(any_contains(parse_errors("[scenario]\nmodel = fancy\n"),
                         "unknown model 'fancy'"));
    REQUIRE(any_contains(parse_errors("[scenario]\nmodel = circulant\nbounds = df, zf\n"),
                         "unknown bound 'zf'"));
    REQUIRE(any_contains(parse_errors("[scenario]\nmodel = circulant\nbounds = df, df\n"),
                         "bound 'df' listed twice"));
    REQUIRE(any_contains(parse_errors("[weather]\ntemp = 3\n"), "unknown section [weather]"));
    REQUIRE(any_contains(parse_errors("[scenario]\nmodel = circulant\nn = few\n"),
                         "scenario.n: expected an integer"));
    REQUIRE(any_contains(parse_errors("[scenario]\nmodel = circulant\n[model]\np_s = inf\n"),
                         "expected a number"));
    REQUIRE(any_contains(parse_errors("[scenario]\nbounds = df\n"),
                         "scenario.model: required key is missing"));
}

TEST_CASE("validation: band count below two is a violation", "[cli]")
{
    auto cfg = parse_ok("[scenario]\n"
                        "model = circulant\n"
                        "bounds = df\n"
                        "n = 1\n"
                        "[model]\n"
                        "h_sr_re = 1\n"
                        "h_sd_re = 1\n"
                        "h_rd_re = 1\n"
                        "noise_r = 1\n"
                        "noise_d = 1\n"
                        "p_s = 1\n"
                        "p_r = 1\n");
    const auto rep = validate_scenario(cfg);
    REQUIRE_FALSE(rep.ok());
    REQUIRE(any_contains(rep.violations, "scenario.n: violates n >= 2"));
}

TEST_CASE("validation: sweeping a nonexistent field names the field", "[cli]")
{
    auto cfg = parse_ok(std::string(kTinySweep));
    cfg.sweep->parameter = "bogus_knob";
    const auto rep = validate_scenario(cfg);
    REQUIRE_FALSE(rep.ok());
    REQUIRE(any_contains(rep.violations, "sweep.parameter: 'bogus_knob'"));
    REQUIRE(any_contains(rep.violations, "not a sweepable scalar field"));
}

TEST_CASE("validation: sweep endpoints are checked with context", "[cli]")
{
    auto cfg = parse_ok(std::string(kTinySweep));
    cfg.sweep->start = -1.0;
    const auto rep = validate_scenario(cfg);
    REQUIRE_FALSE(rep.ok());
    REQUIRE(any_contains(rep.violations, "[at p_s = -1]"));

    cfg.sweep->start = 2.0;
    cfg.sweep->steps = 1;
    const auto rep2 = validate_scenario(cfg);
    REQUIRE(any_contains(rep2.violations, "sweep.steps: violates steps >= 2"));
}

TEST_CASE("validation: bounds must be available for the model", "[cli]")
{
    auto cfg = parse_ok("[scenario]\n"
                        "model = underwater\n"
                        "bounds = cf-kkt\n"
                        "[model]\n"
                        "a = 0.3\n"
                        "p_t = 100\n");
    const auto rep = validate_scenario(cfg);
    REQUIRE_FALSE(rep.ok());
    REQUIRE(any_contains(rep.violations, "'cf-kkt' is not available for model 'underwater'"));
    REQUIRE(any_contains(rep.violations, "df-waterfill")); // the availability list

    // The canonical availability lists stay in sync with what the runner
    // can actually evaluate.
    REQUIRE(allowed_bounds(ModelKind::Underwater) ==
            std::vector<BoundKind>{BoundKind::DfWaterfill});
    REQUIRE(allowed_bounds(ModelKind::LowpassEqual) == std::vector<BoundKind>{BoundKind::Df});
    REQUIRE(allowed_bounds(ModelKind::Circulant).size() == 5);
    REQUIRE(allowed_bounds(ModelKind::Asynchronous) ==
            std::vector<BoundKind>{BoundKind::Df, BoundKind::CfKkt, BoundKind::Cutset});
}

TEST_CASE("validation: draw count is an underwater-only knob", "[cli]")
{
    auto cfg = parse_ok(std::string(kTinySweep));
    cfg.draws = 10;
    const auto rep = validate_scenario(cfg);
    REQUIRE(any_contains(rep.violations, "scenario.draws: only meaningful for model 'underwater'"));
}

TEST_CASE("validation: the report lists every violation, not just the first", "[cli]")
{
    auto cfg = parse_ok("[scenario]\n"
                        "model = lowpass-unequal\n"
                        "bounds = df\n"
                        "[model]\n"
                        "w_sd = 3\n"
                        "w_sr = 2\n"
                        "w_rd = 1.5\n"
                        "n_1 = 1\n"
                        "n_2 = 0\n"
                        "p_s = -4\n"
                        "p_r = 4\n");
    const auto rep = validate_scenario(cfg);
    REQUIRE(rep.violations.size() >= 3);
    REQUIRE(any_contains(rep.violations, "model.w_sd"));
    REQUIRE(any_contains(rep.violations, "model.n_2"));
    REQUIRE(any_contains(rep.violations, "model.p_s"));
}

TEST_CASE("defaults: optional fields resolve to their documented values", "[cli]")
{
    auto cfg = parse_ok("[scenario]\n"
                        "model = underwater\n"
                        "bounds = df-waterfill\n"
                        "[model]\n"
                        "a = 0.3\n"
                        "p_t = 100\n");
    REQUIRE(validate_scenario(cfg).ok());
    const auto p = effective_parameters(cfg);
    CHECK(p.at("h") == 0.25);
    CHECK(p.at("d_sd") == 1.0);
    CHECK(p.at("f_c") == 27.0);
    CHECK(p.at("w") == 10.0);
    CHECK(p.at("k") == 1.5);
    CHECK(p.at("a_0") == 1.0);
    CHECK(p.at("s") == 0.0);
    CHECK(p.at("wind") == 10.0);
    CHECK(p.at("coherence_sd") == 5.0);
    CHECK(p.at("coherence_sr") == Catch::Approx(10.0 / 3.0));
    CHECK(cfg.resolved_n() == 64);
    CHECK(cfg.resolved_draws() == 500);
    CHECK(cfg.seed == 1);
}

TEST_CASE("fixture configs in the repository validate clean", "[cli]")
{
    int seen = 0;
    for (const auto &entry : fs::directory_iterator(RELAYCAP_CONFIG_DIR))
    {
        if (entry.path().extension() != ".cfg")
            continue;
        ++seen;
        ValidationReport syntax;
        const auto cfg = load_scenario(entry.path().string(), syntax);
        INFO(entry.path().string());
        INFO((syntax.violations.empty() ? "" : syntax.violations.front()));
        REQUIRE(syntax.ok());
        const auto rep = validate_scenario(cfg);
        INFO((rep.violations.empty() ? "" : rep.violations.front()));
        REQUIRE(rep.ok());
    }
    REQUIRE(seen >= 6);
}

TEST_CASE("runner: CSV is byte-identical across runs and job counts", "[cli]")
{
    const auto cfg = parse_ok(std::string(kTinySweep));
    REQUIRE(validate_scenario(cfg).ok());
    const auto a = run_scenario(cfg, 1);
    const auto b = run_scenario(cfg, 1);
    const auto c = run_scenario(cfg, 8);
    REQUIRE(a.csv == b.csv);
    REQUIRE(a.csv == c.csv);
    REQUIRE(a.rows.size() == 4);
}

TEST_CASE("runner: CSV dialect is CRLF with 12 significant digits", "[cli]")
{
    const auto cfg = parse_ok(std::string(kTinySweep));
    const auto out = run_scenario(cfg, 1);
    const auto lines = csv_lines(out.csv);
    REQUIRE(lines.size() == 5); // header + 4 sweep points
    REQUIRE(lines[0] ==
            "sweep:p_s,df (bits/channel-use),cutset (bits/channel-use),binding,residual,status");
    for (std::size_t i = 1; i < lines.size(); ++i)
    {
        const auto f = split_fields(lines[i]);
        REQUIRE(f.size() == 6);
        // Numeric cells round-trip through %.12g unchanged (12 significant
        // digits, no locale surprises).
        for (std::size_t j = 0; j < 3; ++j)
        {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.12g", std::strtod(f[j].c_str(), nullptr));
            REQUIRE(f[j] == buf);
        }
        REQUIRE((f[3] == "broadcast-cut" || f[3] == "MAC-cut" || f[3] == "balanced"));
        REQUIRE(f[5] == "ok");
    }
}

TEST_CASE("runner: sweep grid is uniform, inclusive, and ordered", "[cli]")
{
    const auto cfg = parse_ok(std::string(kTinySweep));
    const auto out = run_scenario(cfg, 8);
    REQUIRE(out.rows.size() == 4);
    for (std::size_t i = 0; i < out.rows.size(); ++i)
    {
        REQUIRE(out.rows[i].index == static_cast<int>(i));
        REQUIRE(out.rows[i].sweep_value);
        const double expected = 2.0 + (6.0 - 2.0) * static_cast<double>(i) / 3.0;
        REQUIRE(*out.rows[i].sweep_value == expected);
    }
    // More source power never hurts either bound.
    for (std::size_t i = 1; i < out.rows.size(); ++i)
        for (std::size_t j = 0; j < 2; ++j)
            REQUIRE(*out.rows[i].values[j] >= *out.rows[i - 1].values[j]);
}

TEST_CASE("runner: achievable bounds stay under the cut-set bound row-wise", "[cli]")
{
    const auto cfg = parse_ok("[scenario]\n"
                              "model = asynchronous\n"
                              "bounds = df, cf-kkt, cutset\n"
                              "n = 16\n"
                              "[model]\n"
                              "d = 0.5\n"
                              "alpha_att = 2\n"
                              "p_s = 10\n"
                              "p_r = 10\n"
                              "[sweep]\n"
                              "parameter = d\n"
                              "start = 0.1\n"
                              "stop = 0.9\n"
                              "steps = 5\n");
    const auto out = run_scenario(cfg, 1, /*bits=*/false);
    REQUIRE(out.rows.size() == 5);
    for (const auto &row : out.rows)
    {
        REQUIRE(row.status == "ok");
        REQUIRE(row.values.size() == 3);
        const double cutset = *row.values[2];
        const double tol = 1e-9 * std::max(1.0, cutset);
        REQUIRE(*row.values[0] <= cutset + tol); // df
        REQUIRE(*row.values[1] <= cutset + tol); // cf
    }
}

TEST_CASE("runner: unit labels follow the model and the nats switch", "[cli]")
{
    const auto lowpass = parse_ok("[scenario]\n"
                                  "model = lowpass-equal\n"
                                  "bounds = df\n"
                                  "[model]\n"
                                  "w = 1\n"
                                  "n_1 = 1\n"
                                  "n_2 = 1\n"
                                  "p_s = 2\n"
                                  "p_r = 1\n");
    const auto bits = run_scenario(lowpass, 1, true);
    const auto nats = run_scenario(lowpass, 1, false);
    REQUIRE(bits.unit == "bits/s");
    REQUIRE(nats.unit == "nats/s");
    REQUIRE(bits.csv.find("df (bits/s)") != std::string::npos);
    REQUIRE(nats.csv.find("df (nats/s)") != std::string::npos);

    // Stored rows are unit-free (nats); only the rendering converts.
    REQUIRE(*bits.rows[0].values[0] == *nats.rows[0].values[0]);
    const double bits_cell =
        std::strtod(split_fields(csv_lines(bits.csv)[1])[1].c_str(), nullptr);
    const double nats_cell =
        std::strtod(split_fields(csv_lines(nats.csv)[1])[1].c_str(), nullptr);
    REQUIRE(nats_cell / bits_cell == Catch::Approx(kLn2).epsilon(1e-10));

    const auto subband = parse_ok(std::string(kTinySweep));
    REQUIRE(run_scenario(subband, 1, true).unit == "bits/channel-use");
    REQUIRE(run_scenario(subband, 1, false).unit == "nats/channel-use");
}

TEST_CASE("runner: lowpass rows pass the closed forms through unchanged", "[cli]")
{
    ValidationReport syntax;
    const auto cfg =
        load_scenario(std::string(RELAYCAP_CONFIG_DIR) + "/lowpass-equal.cfg", syntax);
    REQUIRE(syntax.ok());
    const auto out = run_scenario(cfg, 1, /*bits=*/false);
    REQUIRE(out.rows.size() == 1);
    REQUIRE_FALSE(out.rows[0].sweep_value);

    const auto p = effective_parameters(cfg);
    LowpassRelaySpec spec;
    spec.w = spec.w_sr = spec.w_sd = spec.w_rd = p.at("w");
    spec.n_1 = p.at("n_1");
    spec.n_2 = p.at("n_2");
    spec.p_s = p.at("p_s");
    spec.p_r = p.at("p_r");
    REQUIRE(*out.rows[0].values[0] == equal_bandwidth_capacity(spec).capacity);

    // And the CSV sentinel for a sweep-free run.
    REQUIRE(csv_lines(out.csv)[0].rfind("sweep:none,", 0) == 0);
    REQUIRE(split_fields(csv_lines(out.csv)[1])[0] == "none");
}

TEST_CASE("runner: underwater rows carry the baseline columns", "[cli]")
{
    const auto cfg = parse_ok("[scenario]\n"
                              "model = underwater\n"
                              "bounds = df-waterfill\n"
                              "n = 8\n"
                              "seed = 7\n"
                              "draws = 2\n"
                              "[model]\n"
                              "a = 0.3\n"
                              "p_t = 100\n");
    REQUIRE(validate_scenario(cfg).ok());
    const auto out = run_scenario(cfg, 1);
    REQUIRE(out.columns ==
            std::vector<std::string>{"df-waterfill", "direct", "two-hop"});
    REQUIRE(out.rows.size() == 1);
    const auto &row = out.rows[0];
    REQUIRE(row.values.size() == 3);
    for (const auto &v : row.values)
    {
        REQUIRE(v);
        REQUIRE(std::isfinite(*v));
        REQUIRE(*v > 0.0);
    }
    REQUIRE(row.binding == "none"); // averaged over draws: no single binding cut
    REQUIRE(row.residual == 0.0);
    REQUIRE(csv_lines(out.csv)[0] ==
            "sweep:none,df-waterfill (bits/channel-use),direct (bits/channel-use),"
            "two-hop (bits/channel-use),binding,residual,status");

    // Different seeds draw different fading profiles.
    auto other = cfg;
    other.seed = 8;
    REQUIRE(*run_scenario(other, 1).rows[0].values[0] != *row.values[0]);
}

TEST_CASE("runner: invalid scenarios and job counts are rejected", "[cli]")
{
    auto cfg = parse_ok(std::string(kTinySweep));
    REQUIRE_THROWS_AS(run_scenario(cfg, 0), InvalidArgumentError);
    cfg.n = 1;
    REQUIRE_THROWS_AS(run_scenario(cfg, 1), ConfigError);
}

TEST_CASE("cli process: exit codes, written files, and determinism", "[cli]")
{
    const fs::path tmp =
        fs::temp_directory_path() / ("relaycap_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    auto shell = [&](const std::string &args) {
        const std::string cmd = std::string(RELAYCAP_CLI_PATH) + " " + args + " > " +
                                (tmp / "out.txt").string() + " 2>&1";
        const int status = std::system(cmd.c_str());
        REQUIRE(status != -1);
        return WEXITSTATUS(status);
    };
    auto slurp = [&](const fs::path &p) {
        std::ifstream f(p, std::ios::binary);
        REQUIRE(f.good());
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    auto write_file = [&](const fs::path &p, const std::string &text) {
        std::ofstream f(p);
        f << text;
    };

    // A clean fixture validates with exit 0.
    REQUIRE(shell("validate " + std::string(RELAYCAP_CONFIG_DIR) + "/colored-isi.cfg") == 0);

    // Violations: exit 2 and one "violation:" line per finding.
    write_file(tmp / "bad.cfg", "[scenario]\nmodel = circulant\nbounds = df\nn = 1\n"
                                "[model]\nh_sr_re = 1\nh_sd_re = 1\nh_rd_re = 1\n"
                                "noise_r = 1\nnoise_d = 1\np_s = 1\np_r = -2\n");
    REQUIRE(shell("validate " + (tmp / "bad.cfg").string()) == 2);
    const auto report = slurp(tmp / "out.txt");
    REQUIRE(report.find("violation: scenario.n: violates n >= 2") != std::string::npos);
    REQUIRE(report.find("model.p_r") != std::string::npos);
    REQUIRE(shell("run " + (tmp / "bad.cfg").string()) == 2);

    // Solver-level failure (valid config, rate blows up): exit 3 with context.
    write_file(tmp / "huge.cfg", "[scenario]\nmodel = explicit-subband\nbounds = df\n"
                                 "[model]\na_sr = 1e308, 1e308\na_sd = 1e300, 1e300\n"
                                 "a_rd = 1, 1\np_s = 1e308\np_r = 1\n");
    REQUIRE(shell("run " + (tmp / "huge.cfg").string() + " --output " + tmp.string()) == 3);

    // I/O failure: the output directory collides with a regular file.
    write_file(tmp / "blocker", "");
    write_file(tmp / "tiny.cfg", std::string(kTinySweep) + "\n");
    REQUIRE(shell("run " + (tmp / "tiny.cfg").string() + " --output " +
                  (tmp / "blocker" / "sub").string()) == 4);

    // Conflicting unit flags are a usage error.
    REQUIRE(shell("run " + (tmp / "tiny.cfg").string() + " --bits --nats") == 2);

    // Successful runs: byte-identical CSV across runs and job counts.
    for (const char *sub : {"a", "b", "c"})
        fs::create_directories(tmp / sub);
    REQUIRE(shell("run " + (tmp / "tiny.cfg").string() + " --output " + (tmp / "a").string()) ==
            0);
    REQUIRE(shell("run " + (tmp / "tiny.cfg").string() + " --output " + (tmp / "b").string()) ==
            0);
    REQUIRE(shell("run " + (tmp / "tiny.cfg").string() + " --jobs 8 --output " +
                  (tmp / "c").string()) == 0);
    const auto csv_a = slurp(tmp / "a" / "tiny.csv");
    REQUIRE(csv_a == slurp(tmp / "b" / "tiny.csv"));
    REQUIRE(csv_a == slurp(tmp / "c" / "tiny.csv"));
    REQUIRE(csv_a.find("\r\n") != std::string::npos);

    // Seed and draw overrides change the underwater average.
    write_file(tmp / "uw.cfg", "[scenario]\nmodel = underwater\nbounds = df-waterfill\n"
                               "n = 8\nseed = 1\ndraws = 2\noutput = uw.csv\n"
                               "[model]\na = 0.3\np_t = 100\n");
    REQUIRE(shell("run " + (tmp / "uw.cfg").string() + " --output " + (tmp / "a").string()) == 0);
    REQUIRE(shell("run " + (tmp / "uw.cfg").string() + " --seed 9 --output " +
                  (tmp / "b").string()) == 0);
    REQUIRE(shell("run " + (tmp / "uw.cfg").string() + " --draws 3 --output " +
                  (tmp / "c").string()) == 0);
    const auto uw_a = slurp(tmp / "a" / "uw.csv");
    REQUIRE(uw_a != slurp(tmp / "b" / "uw.csv"));
    REQUIRE(uw_a != slurp(tmp / "c" / "uw.csv"));

    fs::remove_all(tmp);
}
