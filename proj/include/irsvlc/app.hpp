// SPDX-License-Identifier: Apache-2.0
/**
 * @file app.hpp
 * @brief Experiment orchestration behind the `simulate` and `sweep` commands
 *
 * Output files:
 *  - curves.csv   `snr_db,scenario,blocker_density,ser`, sorted by
 *                 (density, scenario, snr_db)
 *  - summary.json effective config, required SNR per (scenario, density),
 *                 pairwise gaps, trial count, seed, wall-clock
 *  - config.ini   effective config; re-running from it reproduces the CSV
 *  - curves.svg   optional log-scale chart
 */
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "config.hpp"
#include "errors.hpp"
#include "json.hpp"
#include "scene.hpp"
#include "simulator.hpp"

namespace irsvlc::app {

/// --threads, then IRSVLC_THREADS, then the hardware concurrency.
inline unsigned resolve_threads(std::optional<unsigned> flag)
{
    if (flag && *flag > 0) {
        return *flag;
    }
    if (char const* env = std::getenv("IRSVLC_THREADS")) {
        try {
            auto v = parse_u64(env, "IRSVLC_THREADS");
            if (v > 0) {
                return static_cast<unsigned>(v);
            }
        } catch (ConfigError const&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct CurveResult {
    double density = 0.0;
    SerCurve curve;
    RequiredSnr required;
};

struct Gap {
    double density = 0.0;
    Scenario without = Scenario::LosNlos;
    Scenario with = Scenario::LosNlosIrs;
    std::optional<double> gap_db;
};

struct RunSummary {
    RunConfig config;
    std::vector<CurveResult> curves; //!< sorted by (density, scenario)
    std::vector<Gap> gaps;
    double wall_clock_seconds = 0.0;

    CurveResult const* find(Scenario s, double density) const
    {
        for (auto const& c : curves) {
            if (c.curve.scenario == s && c.density == density) {
                return &c;
            }
        }
        return nullptr;
    }
};

/// Run every (density, scenario) combination of the config.
inline RunSummary simulate(RunConfig const& config, unsigned threads)
{
    validate(config);
    auto start = std::chrono::steady_clock::now();
    RunSummary out;
    out.config = config;

    std::vector<double> densities = config.densities;
    std::sort(densities.begin(), densities.end());
    densities.erase(std::unique(densities.begin(), densities.end()), densities.end());
    std::vector<Scenario> scenarios = config.scenarios;
    std::sort(scenarios.begin(), scenarios.end());
    scenarios.erase(std::unique(scenarios.begin(), scenarios.end()), scenarios.end());

    for (double density : densities) {
        SceneParameters params = config.scene;
        params.blockers.density = density;
        Scene scene = build_scene(params);
        TrialSet set = run_trials(scene, config.trials, config.seed, threads);
        for (Scenario s : scenarios) {
            SerCurve curve = ser_curve(set, s, config.grid, config.normalization);
            out.curves.push_back({density, curve, required_snr(curve, config.target_ser)});
        }
        auto add_gap = [&](Scenario without, Scenario with) {
            auto const* a = out.find(without, density);
            auto const* b = out.find(with, density);
            if (!a || !b) {
                return;
            }
            Gap g{density, without, with, std::nullopt};
            if (a->required.snr_db && b->required.snr_db) {
                g.gap_db = *a->required.snr_db - *b->required.snr_db;
            }
            out.gaps.push_back(g);
        };
        add_gap(Scenario::LosOnly, Scenario::LosNlos);
        add_gap(Scenario::LosNlos, Scenario::LosNlosIrs);
    }
    out.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

namespace detail {
inline std::string fmt(char const* pattern, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

inline void write_file(std::filesystem::path const& path, std::string const& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw OutputError("cannot open '" + path.string() + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw OutputError("failed writing '" + path.string() + "'");
    }
}

inline void ensure_dir(std::filesystem::path const& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw OutputError("cannot create output directory '" + dir.string() + "'");
    }
}

inline nlohmann::json snr_json(std::optional<double> v)
{
    return v ? nlohmann::json(*v) : nlohmann::json("unreachable");
}
} // namespace detail

inline std::string curves_csv(RunSummary const& s)
{
    std::string out = "snr_db,scenario,blocker_density,ser\n";
    for (auto const& c : s.curves) {
        for (auto const& p : c.curve.points) {
            out += detail::fmt("%.4f", p.snr_db) + "," + to_string(c.curve.scenario) + ","
                   + detail::fmt("%.6g", c.density) + "," + detail::fmt("%.10e", p.ser) + "\n";
        }
    }
    return out;
}

inline nlohmann::json config_json(RunConfig const& c)
{
    nlohmann::json j = nlohmann::json::object();
    for (auto const& [section, keys] : config_entries(c)) {
        for (auto const& [k, v] : keys) {
            j[section][k] = v;
        }
    }
    return j;
}

inline nlohmann::json summary_json(RunSummary const& s)
{
    nlohmann::json j;
    j["config"] = config_json(s.config);
    j["trials"] = s.config.trials;
    j["seed"] = s.config.seed;
    j["target_ser"] = s.config.target_ser;
    j["wall_clock_seconds"] = s.wall_clock_seconds;
    j["results"] = nlohmann::json::array();
    for (auto const& c : s.curves) {
        j["results"].push_back({{"scenario", to_string(c.curve.scenario)},
                                {"blocker_density", c.density},
                                {"required_snr_db", detail::snr_json(c.required.snr_db)},
                                {"non_monotone", c.required.non_monotone}});
    }
    j["gaps"] = nlohmann::json::array();
    for (auto const& g : s.gaps) {
        j["gaps"].push_back({{"blocker_density", g.density},
                             {"without", to_string(g.without)},
                             {"with", to_string(g.with)},
                             {"gap_db", g.gap_db ? nlohmann::json(*g.gap_db) : nlohmann::json()}});
    }
    return j;
}

/// Self-contained SVG line chart, SER on a log axis.
inline std::string curves_svg(RunSummary const& s)
{
    constexpr double width = 800, height = 520, left = 80, right = 200, top = 30, bottom = 60;
    double x_min = s.config.grid.start_db;
    double x_max = std::max(s.config.grid.stop_db, x_min + 1e-9);
    double y_floor = 1e-8;
    for (auto const& c : s.curves) {
        for (auto const& p : c.curve.points) {
            if (p.ser > 0.0) {
                y_floor = std::min(y_floor, p.ser);
            }
        }
    }
    double log_lo = std::max(std::floor(std::log10(y_floor)), -12.0);
    double log_hi = 0.0;
    auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * (width - left - right); };
    auto py = [&](double ser) {
        double l = std::clamp(std::log10(std::max(ser, 1e-300)), log_lo, log_hi);
        return top + (log_hi - l) / (log_hi - log_lo) * (height - top - bottom);
    };
    char const* colors[] = {"#d62728", "#1f77b4", "#2ca02c"};

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"520\" "
                      "font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"800\" height=\"520\" fill=\"white\"/>\n";
    for (double l = log_lo; l <= log_hi; l += 1.0) {
        double y = py(std::pow(10.0, l));
        svg += "<line x1=\"" + detail::fmt("%.2f", left) + "\" x2=\"" + detail::fmt("%.2f", width - right)
               + "\" y1=\"" + detail::fmt("%.2f", y) + "\" y2=\"" + detail::fmt("%.2f", y)
               + "\" stroke=\"#ddd\"/>\n";
        svg += "<text x=\"" + detail::fmt("%.2f", left - 8) + "\" y=\"" + detail::fmt("%.2f", y + 4)
               + "\" text-anchor=\"end\">1e" + detail::fmt("%.0f", l) + "</text>\n";
    }
    double x_step = (x_max - x_min) > 20 ? 5.0 : 1.0;
    for (double x = std::ceil(x_min / x_step) * x_step; x <= x_max + 1e-9; x += x_step) {
        svg += "<text x=\"" + detail::fmt("%.2f", px(x)) + "\" y=\""
               + detail::fmt("%.2f", height - bottom + 18) + "\" text-anchor=\"middle\">"
               + detail::fmt("%g", x) + "</text>\n";
    }
    svg += "<text x=\"" + detail::fmt("%.2f", (left + width - right) / 2) + "\" y=\""
           + detail::fmt("%.2f", height - 15)
           + "\" text-anchor=\"middle\">Average received SNR (dB)</text>\n";
    svg += "<text x=\"20\" y=\"" + detail::fmt("%.2f", (top + height - bottom) / 2)
           + "\" transform=\"rotate(-90 20 " + detail::fmt("%.2f", (top + height - bottom) / 2)
           + ")\" text-anchor=\"middle\">SER</text>\n";
    double ty = py(s.config.target_ser);
    svg += "<line x1=\"" + detail::fmt("%.2f", left) + "\" x2=\"" + detail::fmt("%.2f", width - right)
           + "\" y1=\"" + detail::fmt("%.2f", ty) + "\" y2=\"" + detail::fmt("%.2f", ty)
           + "\" stroke=\"black\" stroke-dasharray=\"2,3\"/>\n";

    double legend_y = top + 10;
    for (auto const& c : s.curves) {
        std::string color = colors[static_cast<int>(c.curve.scenario)];
        std::string dash = c.density == 0.0 ? " stroke-dasharray=\"6,4\"" : "";
        svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"" + dash
               + " points=\"";
        for (auto const& p : c.curve.points) {
            svg += detail::fmt("%.2f", px(p.snr_db)) + "," + detail::fmt("%.2f", py(p.ser)) + " ";
        }
        svg += "\"/>\n";
        double lx = width - right + 15;
        svg += "<line x1=\"" + detail::fmt("%.2f", lx) + "\" x2=\"" + detail::fmt("%.2f", lx + 25)
               + "\" y1=\"" + detail::fmt("%.2f", legend_y) + "\" y2=\"" + detail::fmt("%.2f", legend_y)
               + "\" stroke=\"" + color + "\" stroke-width=\"1.5\"" + dash + "/>\n";
        svg += "<text x=\"" + detail::fmt("%.2f", lx + 30) + "\" y=\"" + detail::fmt("%.2f", legend_y + 4)
               + "\">" + to_string(c.curve.scenario) + ", " + detail::fmt("%g", c.density)
               + "/m2</text>\n";
        legend_y += 18;
    }
    svg += "</svg>\n";
    return svg;
}

inline void write_outputs(RunSummary const& s, std::filesystem::path const& dir)
{
    detail::ensure_dir(dir);
    detail::write_file(dir / "curves.csv", curves_csv(s));
    detail::write_file(dir / "summary.json", summary_json(s).dump(2) + "\n");
    detail::write_file(dir / "config.ini", to_ini(s.config));
    if (s.config.svg) {
        detail::write_file(dir / "curves.svg", curves_svg(s));
    }
}

enum class SweepVariable { N, Density };

inline SweepVariable parse_sweep_variable(std::string const& text)
{
    if (text == "N" || text == "n") {
        return SweepVariable::N;
    }
    if (text == "density") {
        return SweepVariable::Density;
    }
    throw ConfigError("--vary", "expected N or density, got '" + text + "'");
}

struct SweepRow {
    double value = 0.0;
    Scenario scenario = Scenario::LosNlos;
    double density = 0.0;
    std::optional<double> required_db;
};

struct SweepResult {
    SweepVariable vary = SweepVariable::N;
    std::vector<SweepRow> rows;
    nlohmann::json report;
};

/**
 * @brief Re-run the simulation once per value of N or blocker density
 *
 * Writes curves_<var>_<value>.csv per value plus sweep.csv / sweep.json. The
 * report states, per (scenario, density), whether the required SNR is
 * non-increasing or non-decreasing along the sweep (unreachable = +inf).
 */
inline SweepResult sweep(RunConfig const& base, SweepVariable vary, std::vector<double> const& values,
                         unsigned threads, std::filesystem::path const& dir)
{
    if (values.empty()) {
        throw ConfigError("--values", "at least one value required");
    }
    std::vector<RunConfig> configs;
    for (double v : values) {
        RunConfig c = base;
        if (vary == SweepVariable::N) {
            if (!(v >= 1.0) || v != std::floor(v)) {
                throw ConfigError("--values", "N must be a positive integer");
            }
            c.scene.n_per_side = static_cast<std::size_t>(v);
        } else {
            c.densities = {v};
        }
        validate(c);
        configs.push_back(std::move(c));
    }
    detail::ensure_dir(dir);
    char const* name = vary == SweepVariable::N ? "N" : "density";

    SweepResult out;
    out.vary = vary;
    std::string csv = "vary,value,scenario,blocker_density,required_snr_db\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        RunSummary s = simulate(configs[i], threads);
        detail::write_file(dir / ("curves_" + std::string(name) + "_" + detail::fmt("%g", values[i]) + ".csv"),
                           curves_csv(s));
        for (auto const& c : s.curves) {
            out.rows.push_back({values[i], c.curve.scenario, c.density, c.required.snr_db});
            csv += std::string(name) + "," + detail::fmt("%g", values[i]) + ","
                   + to_string(c.curve.scenario) + "," + detail::fmt("%.6g", c.density) + ","
                   + (c.required.snr_db ? detail::fmt("%.6f", *c.required.snr_db) : "unreachable")
                   + "\n";
        }
    }

    nlohmann::json trends = nlohmann::json::array();
    for (Scenario sc : all_scenarios) {
        std::vector<double> densities;
        for (auto const& r : out.rows) {
            if (r.scenario == sc && std::find(densities.begin(), densities.end(), r.density) == densities.end()) {
                densities.push_back(r.density);
            }
        }
        if (vary == SweepVariable::Density) {
            densities = {-1.0}; // one series across all values
        }
        for (double d : densities) {
            std::vector<double> series;
            for (auto const& r : out.rows) {
                if (r.scenario == sc && (d < 0 || r.density == d)) {
                    series.push_back(r.required_db.value_or(INFINITY));
                }
            }
            if (series.empty()) {
                continue;
            }
            bool non_increasing = std::is_sorted(series.begin(), series.end(), std::greater<>{});
            bool non_decreasing = std::is_sorted(series.begin(), series.end());
            nlohmann::json entry{{"scenario", to_string(sc)},
                                 {"non_increasing", non_increasing},
                                 {"non_decreasing", non_decreasing}};
            if (d >= 0) {
                entry["blocker_density"] = d;
            }
            trends.push_back(entry);
        }
    }
    nlohmann::json rows = nlohmann::json::array();
    for (auto const& r : out.rows) {
        rows.push_back({{"value", r.value},
                        {"scenario", to_string(r.scenario)},
                        {"blocker_density", r.density},
                        {"required_snr_db", detail::snr_json(r.required_db)}});
    }
    out.report = {{"vary", name}, {"values", values}, {"config", config_json(base)},
                  {"rows", rows}, {"monotonicity", trends}};
    detail::write_file(dir / "sweep.csv", csv);
    detail::write_file(dir / "sweep.json", out.report.dump(2) + "\n");
    return out;
}

} // namespace irsvlc::app
