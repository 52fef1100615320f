// SPDX-License-Identifier: Apache-2.0
//
// sixdma: statistical channel estimation for six-dimensional movable antennas
// Copyright (C) 2026 The sixdma Authors
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

// Command-line front end: runs seeded sweeps and summarizes result files.
//
//   sixdma run --config exp.toml [--seed S] [--trials T] [--sweep pilot|snr] [--out dir]
//              [--threads n] [--verbose]
//   sixdma run --default [...]
//   sixdma summarize --in results.csv
//   sixdma export (--config exp.toml | --default) [--trial t] [--value-index i] --out dir
//   sixdma config --default
//
// Exit codes: 0 success, 2 configuration error, 3 runtime failure.
// SIXDMA_THREADS sets the worker count when --threads is not given.

#include "sixdma/baselines.hpp"
#include "sixdma/experiment.hpp"
#include "sixdma/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace
{
    using namespace sixdma;

    constexpr int exit_config = 2;
    constexpr int exit_runtime = 3;

    struct ConfigSource
    {
        std::string path;
        bool use_default = false;
    };

    ExperimentConfig load(const ConfigSource &src)
    {
        if (src.use_default == !src.path.empty())
            throw ConfigError("<cli>", 0, "give exactly one of --config <path> or --default");
        return src.use_default ? ExperimentConfig{} : load_config(src.path);
    }

    std::size_t thread_count(const std::optional<std::size_t> &cli)
    {
        if (cli)
            return std::max<std::size_t>(1, *cli);
        if (const char *env = std::getenv("SIXDMA_THREADS"))
        {
            char *end = nullptr;
            const auto v = std::strtoull(env, &end, 10);
            if (end == env || *end != '\0' || v == 0)
                throw ConfigError("SIXDMA_THREADS", 0, "SIXDMA_THREADS: expected a positive integer");
            return std::size_t(v);
        }
        return 1;
    }

    void write_file(const std::filesystem::path &path, const std::string &content)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + path.string());
        out << content;
        if (!out)
            throw std::runtime_error("error while writing " + path.string());
    }

    template <typename Writer, typename Rows>
    std::string render(Writer writer, const Rows &rows)
    {
        std::ostringstream os;
        writer(os, rows);
        return os.str();
    }

    struct RunOptions
    {
        ConfigSource source;
        std::optional<std::uint64_t> seed;
        std::optional<std::size_t> trials;
        std::optional<std::string> sweep;
        std::optional<std::string> out;
        std::optional<std::size_t> threads;
        bool verbose = false;
    };

    int run(const RunOptions &o)
    {
        ExperimentConfig cfg = load(o.source);
        if (o.seed)
            cfg.master_seed = *o.seed;
        if (o.trials)
            cfg.trials = *o.trials;
        if (o.sweep)
        {
            SweepAxis axis;
            try
            {
                axis = parse_axis(*o.sweep);
            }
            catch (const std::invalid_argument &e)
            {
                throw ConfigError("--sweep", 0, std::string("--sweep: ") + e.what());
            }
            if (axis != cfg.axis)
            {
                cfg.axis = axis;
                cfg.values = default_sweep_values(axis);
            }
        }
        if (o.out)
            cfg.output = *o.out;
        cfg.validate();
        const auto threads = thread_count(o.threads);

        std::filesystem::create_directories(cfg.output);
        write_file(cfg.output / "config.toml", to_toml(cfg));

        const auto result = run_experiment(cfg, threads, o.verbose);
        const auto summary = summarize(result.rows);

        write_file(cfg.output / "results.csv", render(write_results_csv, result.rows));
        write_file(cfg.output / "summary.csv", render(write_summary_csv, summary));
        write_file(cfg.output / "timings.csv", render(write_timings_csv, result.rows));
        if (o.verbose)
            write_file(cfg.output / "diagnostics.csv", render(write_diagnostics_csv, result.diagnostics));

        print_summary_table(std::cout, summary, cfg.axis == SweepAxis::pilot_length ? "pilot_len" : "snr_db");
        std::size_t failures = 0;
        for (const auto &r : result.rows)
            if (!r.error.empty())
            {
                ++failures;
                if (o.verbose)
                    std::cerr << "trial " << r.trial << " at " << r.sweep_value << " (" << to_string(r.method)
                              << ") failed: " << r.error << "\n";
            }
        if (failures > 0)
            std::cerr << failures << " of " << result.rows.size() << " runs failed, see results.csv\n";
        std::cout << "wrote " << (cfg.output / "results.csv").string() << "\n";
        return 0;
    }

    int summarize_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open " + path);
        const auto rows = read_results_csv(in);
        const auto summary = summarize(rows);
        std::cout << render(write_summary_csv, summary) << "\n";
        print_summary_table(std::cout, summary, "value");
        return 0;
    }

    struct ExportOptions
    {
        ConfigSource source;
        std::size_t trial = 0;
        std::size_t value_index = 0;
        std::string out;
    };

    // Scenario, measurement blocks and fitted user models of one trial
    int export_trial(const ExportOptions &o)
    {
        const ExperimentConfig cfg = load(o.source);
        cfg.validate();
        if (o.value_index >= cfg.values.size())
            throw ConfigError("--value-index", 0, "--value-index: out of range for the configured sweep");
        if (o.trial >= cfg.trials)
            throw ConfigError("--trial", 0, "--trial: out of range for the configured trial count");

        const auto seed = trial_seed(cfg.master_seed, cfg.axis, o.trial);
        const auto scenario = generate_scenario(cfg.scenario, seed);
        const auto inputs = prepare_trial(scenario, cfg.pilot_length_at(o.value_index), cfg.snr_at(o.value_index),
                                          seed);
        PipelineConfig pcfg;
        pcfg.estimator = cfg.estimator;
        pcfg.grid_points = cfg.grid_points;
        const auto result = run_proposed(scenario, inputs, pcfg, 1);

        const std::filesystem::path dir = o.out;
        std::filesystem::create_directories(dir);
        write_file(dir / "scenario.json", to_json(scenario).dump(2) + "\n");
        write_blocks(dir / "blocks.cmat", result.blocks);
        write_file(dir / "models.json", to_json(result.models).dump(2) + "\n");
        std::cout << "wrote scenario.json, blocks.cmat and models.json to " << dir.string() << "\n";
        return 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"sixdma: statistical channel estimation for six-dimensional movable antennas"};
    app.require_subcommand(1);

    RunOptions run_opts;
    auto *run_cmd = app.add_subcommand("run", "Run a seeded parameter sweep and write CSV results");
    auto *cfg_opt = run_cmd->add_option("--config", run_opts.source.path, "TOML experiment configuration");
    auto *def_opt = run_cmd->add_flag("--default", run_opts.source.use_default, "Use the built-in default setup");
    cfg_opt->excludes(def_opt);
    run_cmd->add_option("--seed", run_opts.seed, "Master seed");
    run_cmd->add_option("--trials", run_opts.trials, "Monte Carlo trials per sweep value");
    run_cmd->add_option("--sweep", run_opts.sweep, "Sweep axis: pilot or snr");
    run_cmd->add_option("--out", run_opts.out, "Output directory");
    run_cmd->add_option("--threads", run_opts.threads, "Worker threads (default: SIXDMA_THREADS or 1)");
    run_cmd->add_flag("--verbose", run_opts.verbose, "Write per-sweep objectives to diagnostics.csv");

    std::string summarize_in;
    auto *sum_cmd = app.add_subcommand("summarize", "Median and mean NMSE of a results CSV");
    sum_cmd->add_option("--in", summarize_in, "results.csv written by run")->required();

    ExportOptions export_opts;
    auto *exp_cmd = app.add_subcommand("export", "Write the scenario, measurements and models of one trial");
    auto *exp_cfg = exp_cmd->add_option("--config", export_opts.source.path, "TOML experiment configuration");
    auto *exp_def = exp_cmd->add_flag("--default", export_opts.source.use_default, "Use the built-in default setup");
    exp_cfg->excludes(exp_def);
    exp_cmd->add_option("--trial", export_opts.trial, "Trial index");
    exp_cmd->add_option("--value-index", export_opts.value_index, "Index into the sweep values");
    exp_cmd->add_option("--out", export_opts.out, "Output directory")->required();

    auto *config_cmd = app.add_subcommand("config", "Print the default configuration as TOML");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try
    {
        if (run_cmd->parsed())
            return run(run_opts);
        if (sum_cmd->parsed())
            return summarize_file(summarize_in);
        if (exp_cmd->parsed())
            return export_trial(export_opts);
        if (config_cmd->parsed())
        {
            std::cout << to_toml(ExperimentConfig{});
            return 0;
        }
    }
    catch (const ConfigError &e)
    {
        std::cerr << "configuration error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_runtime;
}
