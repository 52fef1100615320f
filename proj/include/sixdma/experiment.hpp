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

#ifndef SIXDMA_EXPERIMENT_HPP
#define SIXDMA_EXPERIMENT_HPP

#include "sixdma/estimator.hpp"
#include "sixdma/scenario.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sixdma
{
    enum class SweepAxis
    {
        pilot_length,
        snr
    };

    enum class Method
    {
        proposed,
        exhaustive
    };

    std::string to_string(SweepAxis axis);  // "pilot" / "snr"
    std::string to_string(Method method);   // "proposed" / "exhaustive"
    SweepAxis parse_axis(std::string_view text);   // Also accepts "pilot_length"
    Method parse_method(std::string_view text);

    // Default sweep values of an axis: pilot lengths 10..90 step 20, SNR 0..30 dB step 10
    std::vector<double> default_sweep_values(SweepAxis axis);

    // Invalid configuration. line() is the 1-based line in the source file, 0 if unknown.
    class ConfigError : public std::runtime_error
    {
    public:
        ConfigError(std::string field, std::size_t line, const std::string &message);

        const std::string &field() const { return field_; }
        std::size_t line() const { return line_; }

    private:
        std::string field_;
        std::size_t line_;
    };

    struct ExperimentConfig
    {
        ScenarioConfig scenario;
        EstimatorConfig estimator;
        std::size_t grid_points = 500; // G

        SweepAxis axis = SweepAxis::pilot_length;
        std::vector<double> values = default_sweep_values(SweepAxis::pilot_length);
        std::size_t pilot_length = 70; // used when sweeping SNR
        double snr_db = 30.0;          // used when sweeping the pilot length

        std::size_t trials = 20;
        std::uint64_t master_seed = 20250101;
        std::filesystem::path output = "results";
        std::vector<Method> methods = {Method::proposed, Method::exhaustive};

        // Throws ConfigError
        void validate() const;

        std::size_t pilot_length_at(std::size_t sweep_index) const;
        double snr_at(std::size_t sweep_index) const;
    };

    bool operator==(const ExperimentConfig &a, const ExperimentConfig &b);

    // TOML reading and writing. Unknown keys, wrong types and invalid values raise ConfigError
    // naming the field and the line. Missing keys keep their defaults.
    ExperimentConfig parse_config(std::string_view toml_text, const std::string &source_name = "<config>");
    ExperimentConfig load_config(const std::filesystem::path &path);
    std::string to_toml(const ExperimentConfig &cfg);

    // Child seed of one trial: derive_seed(master, {axis index, trial}). The sweep value does
    // not enter, so all values of a sweep share the scenario and random streams of a trial and
    // adding sweep values leaves existing trials untouched.
    std::uint64_t trial_seed(std::uint64_t master_seed, SweepAxis axis, std::size_t trial);

    struct ResultRow
    {
        std::size_t sweep_index = 0;
        double sweep_value = 0.0;
        Method method = Method::proposed;
        std::size_t trial = 0;
        std::uint64_t seed = 0;
        double nmse = 0.0;       // NaN for failed trials
        double wall_time_ms = 0.0;
        std::size_t measured_poses = 0;
        std::string error;       // empty on success
    };

    // Per-sweep objective values of one pose, kept when requested
    struct DiagnosticRow
    {
        std::size_t sweep_index = 0;
        Method method = Method::proposed;
        std::size_t trial = 0;
        std::size_t pose_index = 0;
        std::vector<double> objectives;
    };

    struct ExperimentOutput
    {
        std::vector<ResultRow> rows;           // sorted by (sweep index, trial, method)
        std::vector<DiagnosticRow> diagnostics;
    };

    // Runs every sweep value x trial x method. Work units execute on `threads` workers; the
    // output order does not depend on the schedule. Failed trials become rows with an error.
    ExperimentOutput run_experiment(const ExperimentConfig &cfg, std::size_t threads = 1,
                                    bool keep_diagnostics = false);

    struct SummaryRow
    {
        double sweep_value = 0.0;
        Method method = Method::proposed;
        std::size_t trials = 0; // successful rows
        std::size_t failures = 0;
        double median_nmse = 0.0;
        double mean_nmse = 0.0;
    };

    // Median and mean NMSE per (sweep value, method), ordered by sweep value then method.
    // Throws std::invalid_argument on empty input.
    std::vector<SummaryRow> summarize(const std::vector<ResultRow> &rows);

    double median(std::vector<double> values);

    // CSV files. results and summary are deterministic; wall times go to a separate file.
    void write_results_csv(std::ostream &os, const std::vector<ResultRow> &rows);
    void write_timings_csv(std::ostream &os, const std::vector<ResultRow> &rows);
    void write_summary_csv(std::ostream &os, const std::vector<SummaryRow> &rows);
    void write_diagnostics_csv(std::ostream &os, const std::vector<DiagnosticRow> &rows);
    // First column is headed by `value_label`, e.g. "pilot_len" or "snr_db"
    void print_summary_table(std::ostream &os, const std::vector<SummaryRow> &rows, std::string_view value_label);

    // Reads a results CSV written by write_results_csv. Throws std::runtime_error on bad input.
    std::vector<ResultRow> read_results_csv(std::istream &is);
}

#endif
