// SPDX-License-Identifier: Apache-2.0
/**
 * @file cli.hpp
 * @brief Command-line front end: `simulate`, `sweep`, `verify`
 *
 * Exit codes: 0 success, 1 verification failure, 2 invalid config or
 * arguments, 3 unwritable output path.
 */
#pragma once

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "app.hpp"
#include "config.hpp"
#include "verification.hpp"

namespace irsvlc::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_verify_failed = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_output = 3;

/// Parse and execute a command line; args excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Monte Carlo simulator for IRS-assisted indoor VLC links", "irsvlc"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<unsigned> threads;
    std::optional<std::string> out_dir;
    bool svg = false;
    std::string vary;
    std::vector<double> values;

    auto add_run_flags = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "INI configuration file");
        sub->add_option("--seed", seed, "master seed (overrides config)");
        sub->add_option("--trials", trials, "Monte Carlo trials (overrides config)");
        sub->add_option("--threads", threads, "worker threads");
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_flag("--svg", svg, "also write curves.svg");
    };
    auto* simulate = app.add_subcommand("simulate", "run all scenarios and densities");
    add_run_flags(simulate);
    auto* sweep = app.add_subcommand("sweep", "repeat the simulation over N or blocker density");
    add_run_flags(sweep);
    sweep->add_option("--vary", vary, "N or density")->required();
    sweep->add_option("--values", values, "comma-separated values")->delimiter(',');
    auto* verify = app.add_subcommand("verify", "run the oracle and property suites");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (CLI::CallForHelp const&) {
        out << app.help();
        return exit_ok;
    } catch (CLI::ParseError const& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    }

    if (verify->parsed()) {
        bool all = true;
        auto report = [&](std::vector<verification::CheckResult> const& results) {
            for (auto const& r : results) {
                out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
                all = all && r.passed;
            }
        };
        report(verification::oracle_suite());
        report(verification::property_suite());
        return all ? exit_ok : exit_verify_failed;
    }

    try {
        RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (seed) {
            config.seed = *seed;
        }
        if (trials) {
            config.trials = *trials;
        }
        if (out_dir) {
            config.out_dir = *out_dir;
        }
        if (svg) {
            config.svg = true;
        }
        validate(config);
        unsigned n_threads = app::resolve_threads(threads);

        if (simulate->parsed()) {
            app::RunSummary summary = app::simulate(config, n_threads);
            app::write_outputs(summary, config.out_dir);
            for (auto const& c : summary.curves) {
                out << to_string(c.curve.scenario) << " density=" << c.density << " required_snr_db=";
                if (c.required.snr_db) {
                    out << *c.required.snr_db;
                } else {
                    out << "unreachable";
                }
                out << (c.required.non_monotone ? " (non-monotone)" : "") << "\n";
            }
            out << "wrote " << config.out_dir << "\n";
        } else {
            app::SweepVariable var = app::parse_sweep_variable(vary);
            app::sweep(config, var, values, n_threads, config.out_dir);
            out << "wrote " << config.out_dir << "\n";
        }
    } catch (ConfigError const& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (OutputError const& e) {
        err << "output error: " << e.what() << "\n";
        return exit_output;
    }
    return exit_ok;
}

} // namespace irsvlc::cli
