// SPDX-License-Identifier: Apache-2.0
/**
 * @file config.hpp
 * @brief Run configuration: INI-style file parsing, validation and echo
 *
 * Format: `[section]` headers followed by `key = value` lines; `#` and `;`
 * start comments. Every physical constant of the model is a key; omitted
 * keys keep their defaults.
 */
#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "scene.hpp"
#include "simulator.hpp"

namespace irsvlc {

struct RunConfig {
    SceneParameters scene;
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    SnrGrid grid{0.0, 40.0, 0.25};
    Normalization normalization = Normalization::PerScenario;
    std::vector<Scenario> scenarios{Scenario::LosOnly, Scenario::LosNlos, Scenario::LosNlosIrs};
    std::vector<double> densities{0.0, 1.0};
    double target_ser = soft_fec_limit;
    std::string out_dir = "out";
    bool svg = false;
};

namespace detail {
inline std::string_view trim(std::string_view s)
{
    auto const ws = " \t\r";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(std::string_view s)
{
    std::vector<std::string> out;
    while (!s.empty()) {
        auto comma = s.find(',');
        auto item = trim(s.substr(0, comma));
        if (!item.empty()) {
            out.emplace_back(item);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        s.remove_prefix(comma + 1);
    }
    return out;
}

inline std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct IniEntry {
    std::string value;
    int line = 0;
};
} // namespace detail

inline double parse_double(std::string_view text, std::string const& field, int line = 0)
{
    text = detail::trim(text);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ConfigError(field, "expected a number, got '" + std::string(text) + "'", line);
    }
    return v;
}

inline std::uint64_t parse_u64(std::string_view text, std::string const& field, int line = 0)
{
    text = detail::trim(text);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(field, "expected a non-negative integer, got '" + std::string(text) + "'",
                          line);
    }
    return v;
}

inline bool parse_bool(std::string_view text, std::string const& field, int line = 0)
{
    text = detail::trim(text);
    if (text == "true" || text == "1" || text == "yes") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no") {
        return false;
    }
    throw ConfigError(field, "expected true or false, got '" + std::string(text) + "'", line);
}

inline Scenario parse_scenario(std::string_view text, std::string const& field, int line = 0)
{
    for (Scenario s : all_scenarios) {
        if (text == to_string(s)) {
            return s;
        }
    }
    throw ConfigError(field, "unknown scenario '" + std::string(text) + "'", line);
}

inline IrsType parse_irs_type(std::string_view text, std::string const& field, int line = 0)
{
    for (IrsType t : {IrsType::None, IrsType::Mirror, IrsType::Metasurface}) {
        if (text == to_string(t)) {
            return t;
        }
    }
    throw ConfigError(field, "expected mirror, metasurface or none", line);
}

inline char const* to_string(Normalization n)
{
    return n == Normalization::PerScenario ? "per_scenario" : "baseline";
}

/// Range checks on everything before any computation starts.
inline void validate(RunConfig const& c)
{
    validate(c.scene);
    if (c.trials < 1) {
        throw ConfigError("run.trials", "must be >= 1");
    }
    c.grid.validate();
    if (c.scenarios.empty()) {
        throw ConfigError("run.scenarios", "at least one scenario required");
    }
    if (c.densities.empty()) {
        throw ConfigError("blockers.densities", "at least one density required");
    }
    for (double d : c.densities) {
        if (!(d >= 0.0)) {
            throw ConfigError("blockers.densities", "densities must be >= 0");
        }
    }
    if (!(c.target_ser > 0.0 && c.target_ser < 0.5)) {
        throw ConfigError("run.target_ser", "must lie in (0, 0.5)");
    }
}

/**
 * @brief Read a config from text, starting from the defaults
 *
 * Unknown sections or keys are errors, reported with their line number.
 */
inline RunConfig parse_config(std::string const& text)
{
    std::map<std::string, detail::IniEntry> entries;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find_first_of("#;"); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("", "malformed section header", line_no);
            }
            section = std::string(detail::trim(line.substr(1, line.size() - 2)));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("", "expected key = value", line_no);
        }
        std::string key = std::string(detail::trim(line.substr(0, eq)));
        std::string full = section.empty() ? key : section + "." + key;
        if (entries.count(full)) {
            throw ConfigError(full, "duplicate key", line_no);
        }
        entries[full] = {std::string(detail::trim(line.substr(eq + 1))), line_no};
    }

    RunConfig c;
    auto& s = c.scene;
    using Setter = std::function<void(std::string const&, std::string const&, int)>;
    auto num = [](double& target) -> Setter {
        return [&target](std::string const& v, std::string const& f, int l) {
            target = parse_double(v, f, l);
        };
    };
    std::map<std::string, Setter> setters{
        {"run.trials",
         [&](auto const& v, auto const& f, int l) { c.trials = parse_u64(v, f, l); }},
        {"run.seed", [&](auto const& v, auto const& f, int l) { c.seed = parse_u64(v, f, l); }},
        {"run.scenarios",
         [&](auto const& v, auto const& f, int l) {
             c.scenarios.clear();
             for (auto const& item : detail::split_list(v)) {
                 c.scenarios.push_back(parse_scenario(item, f, l));
             }
         }},
        {"run.target_ser", num(c.target_ser)},
        {"snr.start_db", num(c.grid.start_db)},
        {"snr.stop_db", num(c.grid.stop_db)},
        {"snr.step_db", num(c.grid.step_db)},
        {"snr.normalization",
         [&](auto const& v, auto const& f, int l) {
             if (v == "per_scenario") {
                 c.normalization = Normalization::PerScenario;
             } else if (v == "baseline") {
                 c.normalization = Normalization::Baseline;
             } else {
                 throw ConfigError(f, "expected per_scenario or baseline", l);
             }
         }},
        {"room.length", num(s.room.length)},
        {"room.width", num(s.room.width)},
        {"room.height", num(s.room.height)},
        {"ap.x", num(s.ap.position.x)},
        {"ap.y", num(s.ap.position.y)},
        {"ap.z", num(s.ap.position.z)},
        {"ap.lambertian_order", num(s.ap.lambertian_order)},
        {"ap.optical_power", num(s.ap.optical_power)},
        {"receiver.area", num(s.receiver_area)},
        {"receiver.fov_deg", num(s.receiver_fov_deg)},
        {"receiver.height", num(s.ue_height)},
        {"orientation.theta_mean_deg", num(s.orientation.theta_mean_deg)},
        {"orientation.theta_std_deg", num(s.orientation.theta_std_deg)},
        {"blockers.densities",
         [&](auto const& v, auto const& f, int l) {
             c.densities.clear();
             for (auto const& item : detail::split_list(v)) {
                 c.densities.push_back(parse_double(item, f, l));
             }
         }},
        {"surfaces.wall_reflectivity", num(s.wall_reflectivity)},
        {"surfaces.nlos_patch_size", num(s.nlos_patch_size)},
        {"surfaces.reflection_order",
         [&](auto const& v, auto const& f, int l) {
             s.reflection_order = static_cast<int>(parse_u64(v, f, l));
         }},
        {"irs.type",
         [&](auto const& v, auto const& f, int l) { s.irs_type = parse_irs_type(v, f, l); }},
        {"irs.n_per_side",
         [&](auto const& v, auto const& f, int l) { s.n_per_side = parse_u64(v, f, l); }},
        {"irs.element_width", num(s.element_width)},
        {"irs.element_height", num(s.element_height)},
        {"irs.mirror_reflectivity", num(s.mirror_reflectivity)},
        {"irs.msa_efficiency", num(s.msa_efficiency)},
        {"output.dir", [&](auto const& v, auto const&, int) { c.out_dir = v; }},
        {"output.svg",
         [&](auto const& v, auto const& f, int l) { c.svg = parse_bool(v, f, l); }},
    };

    for (auto const& [key, entry] : entries) {
        auto it = setters.find(key);
        if (it == setters.end()) {
            throw ConfigError(key, "unknown key", entry.line);
        }
        it->second(entry.value, key, entry.line);
    }
    try {
        validate(c);
    } catch (ConfigError const& e) {
        auto it = entries.find(e.field());
        if (it != entries.end() && e.line() == 0) {
            throw ConfigError(e.field(), std::string(e.what()).substr(e.field().size() + 2),
                              it->second.line);
        }
        throw;
    }
    return c;
}

inline RunConfig load_config(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("--config", "cannot read '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

/// Effective configuration as ordered (section, [(key, value)]) pairs.
inline std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>
config_entries(RunConfig const& c)
{
    using detail::format_double;
    auto const& s = c.scene;
    std::string scenarios;
    for (Scenario sc : c.scenarios) {
        scenarios += (scenarios.empty() ? "" : ", ") + std::string(to_string(sc));
    }
    std::string densities;
    for (double d : c.densities) {
        densities += (densities.empty() ? "" : ", ") + format_double(d);
    }
    return {
        {"run",
         {{"trials", std::to_string(c.trials)},
          {"seed", std::to_string(c.seed)},
          {"scenarios", scenarios},
          {"target_ser", format_double(c.target_ser)}}},
        {"snr",
         {{"start_db", format_double(c.grid.start_db)},
          {"stop_db", format_double(c.grid.stop_db)},
          {"step_db", format_double(c.grid.step_db)},
          {"normalization", to_string(c.normalization)}}},
        {"room",
         {{"length", format_double(s.room.length)},
          {"width", format_double(s.room.width)},
          {"height", format_double(s.room.height)}}},
        {"ap",
         {{"x", format_double(s.ap.position.x)},
          {"y", format_double(s.ap.position.y)},
          {"z", format_double(s.ap.position.z)},
          {"lambertian_order", format_double(s.ap.lambertian_order)},
          {"optical_power", format_double(s.ap.optical_power)}}},
        {"receiver",
         {{"area", format_double(s.receiver_area)},
          {"fov_deg", format_double(s.receiver_fov_deg)},
          {"height", format_double(s.ue_height)}}},
        {"orientation",
         {{"theta_mean_deg", format_double(s.orientation.theta_mean_deg)},
          {"theta_std_deg", format_double(s.orientation.theta_std_deg)}}},
        {"blockers", {{"densities", densities}}},
        {"surfaces",
         {{"wall_reflectivity", format_double(s.wall_reflectivity)},
          {"nlos_patch_size", format_double(s.nlos_patch_size)},
          {"reflection_order", std::to_string(s.reflection_order)}}},
        {"irs",
         {{"type", to_string(s.irs_type)},
          {"n_per_side", std::to_string(s.n_per_side)},
          {"element_width", format_double(s.element_width)},
          {"element_height", format_double(s.element_height)},
          {"mirror_reflectivity", format_double(s.mirror_reflectivity)},
          {"msa_efficiency", format_double(s.msa_efficiency)}}},
        {"output", {{"dir", c.out_dir}, {"svg", c.svg ? "true" : "false"}}},
    };
}

/// INI text that parse_config turns back into the same configuration.
inline std::string to_ini(RunConfig const& c)
{
    std::string out;
    for (auto const& [section, keys] : config_entries(c)) {
        out += (out.empty() ? "[" : "\n[") + section + "]\n";
        for (auto const& [k, v] : keys) {
            out += k + " = " + v + "\n";
        }
    }
    return out;
}

} // namespace irsvlc
