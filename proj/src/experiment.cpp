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

#include "sixdma/experiment.hpp"
#include "sixdma/baselines.hpp"
#include "sixdma/csv.hpp"
#include "sixdma/metrics.hpp"
#include "sixdma/parallel.hpp"
#include "sixdma/pipeline.hpp"

#include <toml.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

namespace sixdma
{
    std::string to_string(SweepAxis axis)
    {
        return axis == SweepAxis::pilot_length ? "pilot" : "snr";
    }

    std::string to_string(Method method)
    {
        return method == Method::proposed ? "proposed" : "exhaustive";
    }

    SweepAxis parse_axis(std::string_view text)
    {
        if (text == "pilot" || text == "pilot_length")
            return SweepAxis::pilot_length;
        if (text == "snr")
            return SweepAxis::snr;
        throw std::invalid_argument("unknown sweep axis '" + std::string(text) + "' (expected pilot or snr)");
    }

    Method parse_method(std::string_view text)
    {
        if (text == "proposed")
            return Method::proposed;
        if (text == "exhaustive")
            return Method::exhaustive;
        throw std::invalid_argument("unknown method '" + std::string(text) + "' (expected proposed or exhaustive)");
    }

    std::vector<double> default_sweep_values(SweepAxis axis)
    {
        if (axis == SweepAxis::pilot_length)
            return {10, 30, 50, 70, 90};
        return {0, 10, 20, 30};
    }

    ConfigError::ConfigError(std::string field, std::size_t line, const std::string &message)
        : std::runtime_error(message), field_(std::move(field)), line_(line)
    {
    }

    void ExperimentConfig::validate() const
    {
        auto fail = [](const std::string &field, const std::string &what)
        { throw ConfigError(field, 0, field + ": " + what); };

        // Component validators report "<table>.<field>: message"
        auto rethrow = [](const std::invalid_argument &e)
        {
            const std::string msg = e.what();
            const auto colon = msg.find(':');
            throw ConfigError(colon == std::string::npos ? std::string() : msg.substr(0, colon), 0, msg);
        };
        try
        {
            scenario.validate();
            estimator.validate();
        }
        catch (const std::invalid_argument &e)
        {
            rethrow(e);
        }

        if (grid_points < 1)
            fail("reconstruction.grid_points", "must be at least 1");
        if (values.empty())
            fail("sweep.values", "must not be empty");
        for (std::size_t i = 0; i < values.size(); ++i)
        {
            if (!std::isfinite(values[i]))
                fail("sweep.values", "must be finite");
            if (i > 0 && !(values[i] > values[i - 1]))
                fail("sweep.values", "must be strictly increasing");
            if (axis == SweepAxis::pilot_length && (values[i] < 1.0 || values[i] != std::floor(values[i])))
                fail("sweep.values", "pilot lengths must be positive integers");
        }
        if (pilot_length < 1)
            fail("sweep.pilot_length", "must be at least 1");
        if (!std::isfinite(snr_db))
            fail("sweep.snr_db", "must be finite");
        if (trials < 1)
            fail("trials", "must be at least 1");
        if (methods.empty())
            fail("methods", "must name at least one method");
        for (std::size_t i = 0; i < methods.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (methods[i] == methods[j])
                    fail("methods", "lists " + to_string(methods[i]) + " twice");
    }

    std::size_t ExperimentConfig::pilot_length_at(std::size_t sweep_index) const
    {
        return axis == SweepAxis::pilot_length ? std::size_t(values.at(sweep_index)) : pilot_length;
    }

    double ExperimentConfig::snr_at(std::size_t sweep_index) const
    {
        return axis == SweepAxis::snr ? values.at(sweep_index) : snr_db;
    }

    bool operator==(const ExperimentConfig &a, const ExperimentConfig &b)
    {
        return a.scenario == b.scenario && a.estimator == b.estimator && a.grid_points == b.grid_points &&
               a.axis == b.axis && a.values == b.values && a.pilot_length == b.pilot_length &&
               a.snr_db == b.snr_db && a.trials == b.trials && a.master_seed == b.master_seed &&
               a.output == b.output && a.methods == b.methods;
    }

    // ---------- TOML ----------

    namespace
    {
        class TomlReader
        {
        public:
            explicit TomlReader(std::string source) : source_(std::move(source)) {}

            [[noreturn]] void fail(const std::string &field, std::size_t line, const std::string &what) const
            {
                std::ostringstream os;
                os << source_;
                if (line > 0)
                    os << ':' << line;
                os << ": " << field << ": " << what;
                throw ConfigError(field, line, os.str());
            }

            static std::size_t line_of(const toml::node &n) { return std::size_t(n.source().begin.line); }

            std::size_t note(const std::string &field, const toml::node &n)
            {
                return lines_[field] = line_of(n);
            }

            std::size_t line_of_field(const std::string &field) const
            {
                const auto it = lines_.find(field);
                return it == lines_.end() ? 0 : it->second;
            }

            void check_keys(const toml::table &t, const std::string &prefix,
                            std::initializer_list<std::string_view> allowed) const
            {
                for (const auto &[k, v] : t)
                    if (std::find(allowed.begin(), allowed.end(), k.str()) == allowed.end())
                        fail(prefix + std::string(k.str()), line_of(v), "unknown key");
            }

            const toml::table *table(const toml::table &parent, const std::string &key)
            {
                const toml::node *n = parent.get(key);
                if (!n)
                    return nullptr;
                if (!n->is_table())
                    fail(key, line_of(*n), "expected a table");
                lines_[key] = line_of(*n);
                return n->as_table();
            }

            template <typename T>
            void get(const toml::table &t, const std::string &prefix, const std::string &key, T &out)
            {
                const toml::node *n = t.get(key);
                if (!n)
                    return;
                const std::string field = prefix + key;
                const auto line = line_of(*n);
                lines_[field] = line;
                convert(*n, field, line, out);
            }

        private:
            void convert(const toml::node &n, const std::string &field, std::size_t line, double &out) const
            {
                if (auto v = n.value<double>(); v && (n.is_floating_point() || n.is_integer()))
                    out = *v;
                else
                    fail(field, line, "expected a number");
            }

            void convert(const toml::node &n, const std::string &field, std::size_t line, std::size_t &out) const
            {
                const auto v = n.is_integer() ? n.value<std::int64_t>() : std::nullopt;
                if (!v)
                    fail(field, line, "expected an integer");
                if (*v < 0)
                    fail(field, line, "must be non-negative");
                out = std::size_t(*v);
            }

            void convert(const toml::node &n, const std::string &field, std::size_t line, bool &out) const
            {
                if (!n.is_boolean())
                    fail(field, line, "expected true or false");
                out = *n.value<bool>();
            }

            void convert(const toml::node &n, const std::string &field, std::size_t line, std::string &out) const
            {
                if (!n.is_string())
                    fail(field, line, "expected a string");
                out = *n.value<std::string>();
            }

            std::string source_;
            std::map<std::string, std::size_t> lines_;
        };

        std::string toml_string(const std::string &s)
        {
            std::ostringstream os;
            os << toml::value<std::string>(s);
            return os.str();
        }

        // TOML floats need a fraction or exponent to stay floats
        std::string toml_float(double v)
        {
            std::string s = csv::format_double(v);
            if (s.find_first_of(".eEna") == std::string::npos)
                s += ".0";
            return s;
        }

        std::string toml_values(const std::vector<double> &values, bool integers)
        {
            std::string s = "[";
            for (std::size_t i = 0; i < values.size(); ++i)
            {
                if (i > 0)
                    s += ", ";
                s += integers ? std::to_string(std::int64_t(values[i])) : toml_float(values[i]);
            }
            return s + "]";
        }
    }

    ExperimentConfig parse_config(std::string_view toml_text, const std::string &source_name)
    {
        TomlReader r(source_name);
        toml::table root;
        try
        {
            root = toml::parse(toml_text, source_name);
        }
        catch (const toml::parse_error &e)
        {
            r.fail("<syntax>", std::size_t(e.source().begin.line), std::string(e.description()));
        }

        ExperimentConfig cfg;
        r.check_keys(root, "", {"master_seed", "trials", "output", "methods", "sweep", "scenario", "estimator",
                                "reconstruction"});

        if (const auto *n = root.get("master_seed"))
        {
            // TOML integers are signed 64-bit; the seed is their two's-complement bit pattern
            if (!n->is_integer())
                r.fail("master_seed", r.note("master_seed", *n), "expected an integer");
            cfg.master_seed = std::uint64_t(*n->value<std::int64_t>());
        }
        r.get(root, "", "trials", cfg.trials);
        std::string output = cfg.output.string();
        r.get(root, "", "output", output);
        cfg.output = output;
        if (const auto *n = root.get("methods"))
        {
            const auto line = r.note("methods", *n);
            if (!n->is_array())
                r.fail("methods", line, "expected an array of strings");
            cfg.methods.clear();
            for (const auto &m : *n->as_array())
            {
                if (!m.is_string())
                    r.fail("methods", line, "expected an array of strings");
                try
                {
                    cfg.methods.push_back(parse_method(*m.value<std::string>()));
                }
                catch (const std::invalid_argument &e)
                {
                    r.fail("methods", line, e.what());
                }
            }
        }

        if (const auto *t = r.table(root, "sweep"))
        {
            r.check_keys(*t, "sweep.", {"axis", "values", "pilot_length", "snr_db"});
            bool values_given = false;
            if (const auto *n = t->get("axis"))
            {
                std::string axis;
                r.get(*t, "sweep.", "axis", axis);
                try
                {
                    cfg.axis = parse_axis(axis);
                }
                catch (const std::invalid_argument &e)
                {
                    r.fail("sweep.axis", TomlReader::line_of(*n), e.what());
                }
            }
            if (const auto *n = t->get("values"))
            {
                const auto line = r.note("sweep.values", *n);
                if (!n->is_array())
                    r.fail("sweep.values", line, "expected an array of numbers");
                cfg.values.clear();
                for (const auto &v : *n->as_array())
                {
                    const auto d = v.value<double>();
                    if (!d || !(v.is_integer() || v.is_floating_point()))
                        r.fail("sweep.values", line, "expected an array of numbers");
                    cfg.values.push_back(*d);
                }
                values_given = true;
            }
            if (!values_given)
                cfg.values = default_sweep_values(cfg.axis);
            r.get(*t, "sweep.", "pilot_length", cfg.pilot_length);
            r.get(*t, "sweep.", "snr_db", cfg.snr_db);
        }

        if (const auto *t = r.table(root, "scenario"))
        {
            auto &s = cfg.scenario;
            r.check_keys(*t, "scenario.",
                         {"users", "paths_per_user", "scatter_radius", "regular_fraction", "annulus_inner",
                          "annulus_outer", "hotspots", "wavelength", "antennas_x", "antennas_y", "antenna_spacing",
                          "surfaces", "measurement_poses", "evaluation_poses", "site_radius", "reference_gain",
                          "reference_distance", "pathloss_exponent", "random_rotations", "coherence_blocks"});
            const std::string p = "scenario.";
            r.get(*t, p, "users", s.users);
            r.get(*t, p, "paths_per_user", s.paths_per_user);
            r.get(*t, p, "scatter_radius", s.scatter_radius);
            r.get(*t, p, "regular_fraction", s.regular_fraction);
            r.get(*t, p, "annulus_inner", s.annulus_inner);
            r.get(*t, p, "annulus_outer", s.annulus_outer);
            r.get(*t, p, "wavelength", s.wavelength);
            r.get(*t, p, "antennas_x", s.antennas_x);
            r.get(*t, p, "antennas_y", s.antennas_y);
            r.get(*t, p, "antenna_spacing", s.antenna_spacing);
            r.get(*t, p, "surfaces", s.surfaces);
            r.get(*t, p, "measurement_poses", s.measurement_poses);
            r.get(*t, p, "evaluation_poses", s.evaluation_poses);
            r.get(*t, p, "site_radius", s.site_radius);
            r.get(*t, p, "reference_gain", s.reference_gain);
            r.get(*t, p, "reference_distance", s.reference_distance);
            r.get(*t, p, "pathloss_exponent", s.pathloss_exponent);
            r.get(*t, p, "random_rotations", s.random_rotations);
            r.get(*t, p, "coherence_blocks", s.coherence_blocks);
            if (const auto *n = t->get("hotspots"))
            {
                const auto line = r.note("scenario.hotspots", *n);
                if (!n->is_array())
                    r.fail("scenario.hotspots", line, "expected an array of {distance, radius} tables");
                s.hotspots.clear();
                for (const auto &h : *n->as_array())
                {
                    if (!h.is_table())
                        r.fail("scenario.hotspots", TomlReader::line_of(h), "expected a {distance, radius} table");
                    const auto &ht = *h.as_table();
                    r.check_keys(ht, "scenario.hotspots.", {"distance", "radius"});
                    if (!ht.contains("distance") || !ht.contains("radius"))
                        r.fail("scenario.hotspots", TomlReader::line_of(h), "each hotspot needs distance and radius");
                    HotspotSpec spec;
                    r.get(ht, "scenario.hotspots.", "distance", spec.distance);
                    r.get(ht, "scenario.hotspots.", "radius", spec.radius);
                    s.hotspots.push_back(spec);
                }
            }
        }

        if (const auto *t = r.table(root, "estimator"))
        {
            auto &e = cfg.estimator;
            r.check_keys(*t, "estimator.", {"sweeps", "tolerance", "refresh_period", "threshold_mode", "threshold"});
            r.get(*t, "estimator.", "sweeps", e.sweeps);
            r.get(*t, "estimator.", "tolerance", e.tolerance);
            r.get(*t, "estimator.", "refresh_period", e.refresh_period);
            r.get(*t, "estimator.", "threshold", e.threshold);
            if (const auto *n = t->get("threshold_mode"))
            {
                std::string mode;
                r.get(*t, "estimator.", "threshold_mode", mode);
                if (mode == "relative")
                    e.threshold_mode = ThresholdMode::relative;
                else if (mode == "absolute")
                    e.threshold_mode = ThresholdMode::absolute;
                else
                    r.fail("estimator.threshold_mode", TomlReader::line_of(*n), "expected relative or absolute");
            }
        }

        if (const auto *t = r.table(root, "reconstruction"))
        {
            r.check_keys(*t, "reconstruction.", {"grid_points"});
            r.get(*t, "reconstruction.", "grid_points", cfg.grid_points);
        }

        try
        {
            cfg.validate();
        }
        catch (const ConfigError &e)
        {
            // Attach the line of the offending key, falling back to its table
            auto line = r.line_of_field(e.field());
            if (line == 0)
                line = r.line_of_field(e.field().substr(0, e.field().find('.')));
            std::string what = e.what();
            if (const auto pos = what.find(": "); pos != std::string::npos)
                what = what.substr(pos + 2);
            r.fail(e.field(), line, what);
        }
        return cfg;
    }

    ExperimentConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError("<file>", 0, path.string() + ": cannot open configuration file");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_config(ss.str(), path.string());
    }

    std::string to_toml(const ExperimentConfig &cfg)
    {
        const auto &s = cfg.scenario;
        const auto &e = cfg.estimator;
        std::ostringstream os;
        os << "# sixdma experiment configuration\n";
        os << "master_seed = " << std::int64_t(cfg.master_seed) << "\n";
        os << "trials = " << cfg.trials << "\n";
        os << "output = " << toml_string(cfg.output.string()) << "\n";
        os << "methods = [";
        for (std::size_t i = 0; i < cfg.methods.size(); ++i)
            os << (i ? ", " : "") << '"' << to_string(cfg.methods[i]) << '"';
        os << "]\n\n";

        os << "[sweep]\n";
        os << "axis = \"" << to_string(cfg.axis) << "\"\n";
        os << "values = " << toml_values(cfg.values, cfg.axis == SweepAxis::pilot_length) << "\n";
        os << "pilot_length = " << cfg.pilot_length << "  # used when sweeping the SNR\n";
        os << "snr_db = " << toml_float(cfg.snr_db) << "  # used when sweeping the pilot length\n\n";

        os << "[scenario]\n";
        os << "users = " << s.users << "\n";
        os << "paths_per_user = " << s.paths_per_user << "\n";
        os << "scatter_radius = " << toml_float(s.scatter_radius) << "\n";
        os << "regular_fraction = " << toml_float(s.regular_fraction) << "\n";
        os << "annulus_inner = " << toml_float(s.annulus_inner) << "\n";
        os << "annulus_outer = " << toml_float(s.annulus_outer) << "\n";
        os << "hotspots = [";
        for (std::size_t i = 0; i < s.hotspots.size(); ++i)
            os << (i ? ", " : "") << "{ distance = " << toml_float(s.hotspots[i].distance)
               << ", radius = " << toml_float(s.hotspots[i].radius) << " }";
        os << "]\n";
        os << "wavelength = " << toml_float(s.wavelength) << "\n";
        os << "antennas_x = " << s.antennas_x << "\n";
        os << "antennas_y = " << s.antennas_y << "\n";
        os << "antenna_spacing = " << toml_float(s.antenna_spacing) << "\n";
        os << "surfaces = " << s.surfaces << "\n";
        os << "measurement_poses = " << s.measurement_poses << "\n";
        os << "evaluation_poses = " << s.evaluation_poses << "\n";
        os << "site_radius = " << toml_float(s.site_radius) << "\n";
        os << "reference_gain = " << toml_float(s.reference_gain) << "\n";
        os << "reference_distance = " << toml_float(s.reference_distance) << "\n";
        os << "pathloss_exponent = " << toml_float(s.pathloss_exponent) << "\n";
        os << "random_rotations = " << (s.random_rotations ? "true" : "false") << "\n";
        os << "coherence_blocks = " << s.coherence_blocks << "\n\n";

        os << "[estimator]\n";
        os << "sweeps = " << e.sweeps << "\n";
        os << "tolerance = " << toml_float(e.tolerance) << "\n";
        os << "refresh_period = " << e.refresh_period << "\n";
        os << "threshold_mode = \"" << (e.threshold_mode == ThresholdMode::relative ? "relative" : "absolute")
           << "\"\n";
        os << "threshold = " << toml_float(e.threshold) << "\n\n";

        os << "[reconstruction]\n";
        os << "grid_points = " << cfg.grid_points << "\n";
        return os.str();
    }

    // ---------- Running ----------

    std::uint64_t trial_seed(std::uint64_t master_seed, SweepAxis axis, std::size_t trial)
    {
        return derive_seed(master_seed, {axis == SweepAxis::pilot_length ? 0u : 1u, std::uint64_t(trial)});
    }

    namespace
    {
        struct UnitOutput
        {
            std::vector<ResultRow> rows;
            std::vector<DiagnosticRow> diagnostics;
        };

        void keep_traces(UnitOutput &out, const PowerEstimate &est, std::size_t sweep_index, Method method,
                         std::size_t trial)
        {
            for (const auto &t : est.traces)
                out.diagnostics.push_back({sweep_index, method, trial, t.pose_index, t.sweep_objectives});
        }

        UnitOutput run_unit(const ExperimentConfig &cfg, std::size_t sweep_index, std::size_t trial,
                            bool keep_diagnostics)
        {
            using clock = std::chrono::steady_clock;
            UnitOutput out;
            const auto seed = trial_seed(cfg.master_seed, cfg.axis, trial);

            std::optional<Scenario> scenario;
            std::optional<TrialInputs> inputs;
            std::string setup_error;
            try
            {
                scenario = generate_scenario(cfg.scenario, seed);
                inputs = prepare_trial(*scenario, cfg.pilot_length_at(sweep_index), cfg.snr_at(sweep_index), seed);
            }
            catch (const std::exception &e)
            {
                setup_error = e.what();
            }

            PipelineConfig pcfg;
            pcfg.estimator = cfg.estimator;
            pcfg.grid_points = cfg.grid_points;

            for (const auto method : cfg.methods)
            {
                ResultRow row;
                row.sweep_index = sweep_index;
                row.sweep_value = cfg.values[sweep_index];
                row.method = method;
                row.trial = trial;
                row.seed = seed;
                row.measured_poses = method == Method::proposed ? cfg.scenario.measurement_poses
                                                                : cfg.scenario.evaluation_poses;
                const auto t0 = clock::now();
                try
                {
                    if (!setup_error.empty())
                        throw std::runtime_error(setup_error);
                    if (method == Method::proposed)
                    {
                        const auto r = run_proposed(*scenario, *inputs, pcfg, 1);
                        row.nmse = nmse(inputs->grid_truth, r.grid_estimate);
                        if (keep_diagnostics)
                            keep_traces(out, r.step_one, sweep_index, method, trial);
                    }
                    else
                    {
                        const auto est = exhaustive_estimate(*scenario, inputs->pilots, inputs->sigma2,
                                                             cfg.estimator, inputs->seed, 1);
                        row.nmse = nmse(inputs->grid_truth, est.power);
                        if (keep_diagnostics)
                            keep_traces(out, est, sweep_index, method, trial);
                    }
                }
                catch (const std::exception &e)
                {
                    row.nmse = std::numeric_limits<double>::quiet_NaN();
                    row.error = e.what();
                    if (row.error.empty())
                        row.error = "unknown error";
                }
                row.wall_time_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
                out.rows.push_back(std::move(row));
            }
            return out;
        }
    }

    ExperimentOutput run_experiment(const ExperimentConfig &cfg, std::size_t threads, bool keep_diagnostics)
    {
        cfg.validate();
        const std::size_t units = cfg.values.size() * cfg.trials;
        std::vector<UnitOutput> results(units);

        // Units are laid out by (sweep index, trial), so concatenation is already sorted
        parallel_for(units, threads, [&](std::size_t u)
                     { results[u] = run_unit(cfg, u / cfg.trials, u % cfg.trials, keep_diagnostics); });

        ExperimentOutput out;
        for (auto &r : results)
        {
            std::move(r.rows.begin(), r.rows.end(), std::back_inserter(out.rows));
            std::move(r.diagnostics.begin(), r.diagnostics.end(), std::back_inserter(out.diagnostics));
        }
        return out;
    }

    // ---------- Summaries and CSV ----------

    double median(std::vector<double> values)
    {
        if (values.empty())
            throw std::invalid_argument("median: empty input");
        const auto n = values.size();
        auto mid = values.begin() + std::ptrdiff_t(n / 2);
        std::nth_element(values.begin(), mid, values.end());
        if (n % 2 == 1)
            return *mid;
        const double upper = *mid;
        const double lower = *std::max_element(values.begin(), mid);
        return 0.5 * (lower + upper);
    }

    std::vector<SummaryRow> summarize(const std::vector<ResultRow> &rows)
    {
        if (rows.empty())
            throw std::invalid_argument("summarize: no result rows");

        std::map<std::pair<double, int>, std::vector<const ResultRow *>> groups;
        for (const auto &r : rows)
            groups[{r.sweep_value, int(r.method)}].push_back(&r);

        std::vector<SummaryRow> out;
        for (const auto &[key, members] : groups)
        {
            SummaryRow s;
            s.sweep_value = key.first;
            s.method = Method(key.second);
            std::vector<double> values;
            for (const auto *r : members)
            {
                if (r->error.empty() && std::isfinite(r->nmse))
                    values.push_back(r->nmse);
                else
                    ++s.failures;
            }
            s.trials = values.size();
            if (values.empty())
                s.median_nmse = s.mean_nmse = std::numeric_limits<double>::quiet_NaN();
            else
            {
                double sum = 0.0;
                for (double v : values)
                    sum += v;
                s.mean_nmse = sum / double(values.size());
                s.median_nmse = median(std::move(values));
            }
            out.push_back(s);
        }
        return out;
    }

    namespace
    {
        const csv::Record results_header = {"sweep_index", "sweep_value", "method", "trial",
                                            "seed", "measured_poses", "nmse", "error"};
    }

    void write_results_csv(std::ostream &os, const std::vector<ResultRow> &rows)
    {
        csv::write_record(os, results_header);
        for (const auto &r : rows)
            csv::write_record(os, {std::to_string(r.sweep_index), csv::format_double(r.sweep_value),
                                   to_string(r.method), std::to_string(r.trial), std::to_string(r.seed),
                                   std::to_string(r.measured_poses),
                                   r.error.empty() ? csv::format_double(r.nmse) : std::string(), r.error});
    }

    void write_timings_csv(std::ostream &os, const std::vector<ResultRow> &rows)
    {
        csv::write_record(os, {"sweep_index", "sweep_value", "method", "trial", "wall_time_ms"});
        for (const auto &r : rows)
            csv::write_record(os, {std::to_string(r.sweep_index), csv::format_double(r.sweep_value),
                                   to_string(r.method), std::to_string(r.trial), csv::format_double(r.wall_time_ms)});
    }

    void write_summary_csv(std::ostream &os, const std::vector<SummaryRow> &rows)
    {
        csv::write_record(os, {"sweep_value", "method", "trials", "failures", "median_nmse", "mean_nmse"});
        for (const auto &s : rows)
            csv::write_record(os, {csv::format_double(s.sweep_value), to_string(s.method), std::to_string(s.trials),
                                   std::to_string(s.failures), csv::format_double(s.median_nmse),
                                   csv::format_double(s.mean_nmse)});
    }

    void write_diagnostics_csv(std::ostream &os, const std::vector<DiagnosticRow> &rows)
    {
        csv::write_record(os, {"sweep_index", "method", "trial", "pose_index", "sweep", "objective"});
        for (const auto &d : rows)
            for (std::size_t i = 0; i < d.objectives.size(); ++i)
                csv::write_record(os, {std::to_string(d.sweep_index), to_string(d.method), std::to_string(d.trial),
                                       std::to_string(d.pose_index), std::to_string(i + 1),
                                       csv::format_double(d.objectives[i])});
    }

    void print_summary_table(std::ostream &os, const std::vector<SummaryRow> &rows, std::string_view value_label)
    {
        const auto flags = os.flags();
        os << std::left << std::setw(12) << value_label
           << std::setw(12) << "method" << std::right << std::setw(8) << "trials" << std::setw(8) << "failed"
           << std::setw(14) << "median_nmse" << std::setw(14) << "mean_nmse" << "\n";
        for (const auto &s : rows)
        {
            os << std::left << std::setw(12) << csv::format_double(s.sweep_value) << std::setw(12)
               << to_string(s.method) << std::right << std::setw(8) << s.trials << std::setw(8) << s.failures
               << std::scientific << std::setprecision(4) << std::setw(14) << s.median_nmse << std::setw(14)
               << s.mean_nmse << "\n";
            os.flags(flags);
        }
        os.flags(flags);
    }

    std::vector<ResultRow> read_results_csv(std::istream &is)
    {
        std::ostringstream ss;
        ss << is.rdbuf();
        const auto records = csv::parse(ss.str());
        if (records.empty() || records.front() != results_header)
            throw std::runtime_error("results csv: missing or unexpected header");

        auto to_size = [](const std::string &s, std::size_t line)
        {
            std::size_t pos = 0;
            unsigned long long v = 0;
            try
            {
                v = std::stoull(s, &pos);
            }
            catch (const std::exception &)
            {
                pos = 0;
            }
            if (s.empty() || pos != s.size() || s.front() == '-')
                throw std::runtime_error("results csv: line " + std::to_string(line) + ": bad integer '" + s + "'");
            return std::uint64_t(v);
        };

        std::vector<ResultRow> rows;
        for (std::size_t i = 1; i < records.size(); ++i)
        {
            const auto &rec = records[i];
            const auto line = i + 1;
            if (rec.size() != results_header.size())
                throw std::runtime_error("results csv: line " + std::to_string(line) + ": expected " +
                                         std::to_string(results_header.size()) + " fields");
            try
            {
                ResultRow r;
                r.sweep_index = std::size_t(to_size(rec[0], line));
                r.sweep_value = csv::parse_double(rec[1]);
                r.method = parse_method(rec[2]);
                r.trial = std::size_t(to_size(rec[3], line));
                r.seed = to_size(rec[4], line);
                r.measured_poses = std::size_t(to_size(rec[5], line));
                r.error = rec[7];
                r.nmse = rec[6].empty() ? std::numeric_limits<double>::quiet_NaN() : csv::parse_double(rec[6]);
                rows.push_back(std::move(r));
            }
            catch (const std::invalid_argument &e)
            {
                throw std::runtime_error("results csv: line " + std::to_string(line) + ": " + e.what());
            }
        }
        return rows;
    }
}
