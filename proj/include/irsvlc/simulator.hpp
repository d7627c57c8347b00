// SPDX-License-Identifier: Apache-2.0
/**
 * @file simulator.hpp
 * @brief Monte Carlo trials, OOK symbol error rate curves and SNR readout
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "channel.hpp"
#include "errors.hpp"
#include "irs.hpp"
#include "numeric.hpp"
#include "scene.hpp"

namespace irsvlc {

struct TrialGains {
    std::size_t index = 0;
    double h_los = 0.0;
    double h_nlos = 0.0;
    double h_irs = 0.0;
};

struct TrialSet {
    std::uint64_t seed = 0;
    std::vector<TrialGains> trials;
};

enum class Scenario { LosOnly, LosNlos, LosNlosIrs };

inline constexpr Scenario all_scenarios[] = {Scenario::LosOnly, Scenario::LosNlos,
                                             Scenario::LosNlosIrs};

inline char const* to_string(Scenario s)
{
    switch (s) {
    case Scenario::LosOnly: return "los";
    case Scenario::LosNlos: return "los_nlos";
    case Scenario::LosNlosIrs: return "los_nlos_irs";
    }
    return "?";
}

inline double effective_gain(TrialGains const& g, Scenario s)
{
    switch (s) {
    case Scenario::LosOnly: return g.h_los;
    case Scenario::LosNlos: return g.h_los + g.h_nlos;
    case Scenario::LosNlosIrs: return g.h_los + g.h_nlos + g.h_irs;
    }
    return 0.0;
}

/// Gains of one trial for a scene given the sampled receiver and blockers.
inline TrialGains evaluate_trial(Scene const& scene, std::span<WallPatch const> patches,
                                 PhotoDetector const& ue, std::span<OrientedBox const> blockers)
{
    TrialGains g;
    CompensatedSum los, nlos, irs;
    int const order = scene.params.reflection_order;
    for (Luminaire const& ap : scene.aps) {
        los.add(los_gain(ap, ue, blockers).value);
        if (order >= 1) {
            nlos.add(nlos_gain(ap, ue, patches, blockers).value);
        }
        if (order >= 2) {
            nlos.add(nlos_gain_second_order(ap, ue, patches, blockers).value);
        }
        for (MirrorArray const& a : scene.mirror_arrays) {
            irs.add(ma_gain(ap, a, ue, blockers).value);
        }
        for (MetasurfaceArray const& a : scene.metasurface_arrays) {
            irs.add(msa_gain(ap, a, ue, blockers).value);
        }
    }
    g.h_los = los.value();
    g.h_nlos = nlos.value();
    g.h_irs = irs.value();
    return g;
}

/**
 * @brief Run independent trials, each on its own (seed, index) substream
 *
 * Output is identical for any thread count.
 */
inline TrialSet
run_trials(Scene const& scene, std::size_t trials, std::uint64_t seed, unsigned threads = 1)
{
    if (trials < 1) {
        throw ArgumentError("run_trials: need at least one trial");
    }
    std::vector<WallPatch> const patches = wall_patches(
        scene.room(), scene.params.nlos_patch_size, scene.params.wall_reflectivity);

    TrialSet out{seed, std::vector<TrialGains>(trials)};
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < trials; t = next++) {
            auto rng = trial_stream(seed, t);
            PhotoDetector ue = sample_ue(rng, scene);
            std::vector<OrientedBox> blockers = sample_blockers(rng, scene);
            std::erase_if(blockers, [&](OrientedBox const& b) { return b.contains(ue.position); });
            TrialGains g = evaluate_trial(scene, patches, ue, blockers);
            g.index = t;
            out.trials[t] = g;
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
    }
    return out;
}

/// Gaussian upper-tail probability.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

struct SnrGrid {
    double start_db = 0.0;
    double stop_db = 40.0;
    double step_db = 0.25;

    void validate() const
    {
        if (!(step_db > 0.0)) {
            throw ConfigError("snr.step_db", "must be positive");
        }
        if (!(start_db <= stop_db)) {
            throw ConfigError("snr.start_db", "must not exceed snr.stop_db");
        }
    }

    std::vector<double> points() const
    {
        validate();
        auto n = static_cast<std::size_t>(std::floor((stop_db - start_db) / step_db + 1e-9)) + 1;
        std::vector<double> pts(n);
        for (std::size_t i = 0; i < n; ++i) {
            pts[i] = start_db + static_cast<double>(i) * step_db;
        }
        return pts;
    }
};

struct SerPoint {
    double snr_db = 0.0;
    double ser = 0.5;
    double std_error = 0.0; //!< Monte Carlo standard error of the mean
};

struct SerCurve {
    Scenario scenario = Scenario::LosNlos;
    std::vector<SerPoint> points;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
};

/// How the "average received SNR" axis is normalized.
enum class Normalization {
    PerScenario, //!< each scenario by its own mean-square gain
    Baseline,    //!< every scenario by the LOS+NLOS mean-square gain
};

inline double mean_square_gain(std::span<TrialGains const> gains, Scenario s)
{
    CompensatedSum acc;
    for (auto const& g : gains) {
        double h = effective_gain(g, s);
        acc.add(h * h);
    }
    return acc.value() / static_cast<double>(gains.size());
}

/**
 * @brief SER of OOK versus average SNR, averaged over the trial ensemble
 *
 * Each trial sees SNR avg * h_t^2 / reference_mean_square and errs with
 * probability Q(sqrt(SNR)). A zero reference gives SER 0.5 everywhere.
 */
inline SerCurve ser_curve(std::span<TrialGains const> gains, Scenario scenario,
                          SnrGrid const& grid, double reference_mean_square)
{
    if (gains.empty()) {
        throw ArgumentError("ser_curve: need at least one trial");
    }
    SerCurve curve;
    curve.scenario = scenario;
    curve.trials = gains.size();
    auto const n = static_cast<double>(gains.size());
    std::vector<double> ratio(gains.size());
    for (std::size_t t = 0; t < gains.size(); ++t) {
        double h = effective_gain(gains[t], scenario);
        ratio[t] = reference_mean_square > 0.0 ? h * h / reference_mean_square : 0.0;
    }
    std::vector<double> ser(gains.size());
    for (double snr_db : grid.points()) {
        double snr = std::pow(10.0, snr_db / 10.0);
        CompensatedSum sum;
        for (std::size_t t = 0; t < ratio.size(); ++t) {
            ser[t] = q_function(std::sqrt(snr * ratio[t]));
            sum.add(ser[t]);
        }
        double mean = sum.value() / n;
        CompensatedSum sq;
        for (double p : ser) {
            sq.add((p - mean) * (p - mean));
        }
        double var = gains.size() > 1 ? sq.value() / (n - 1.0) : 0.0;
        curve.points.push_back({snr_db, std::clamp(mean, 0.0, 0.5), std::sqrt(var / n)});
    }
    return curve;
}

inline SerCurve ser_curve(std::span<TrialGains const> gains, Scenario scenario,
                          SnrGrid const& grid,
                          Normalization norm = Normalization::PerScenario)
{
    if (gains.empty()) {
        throw ArgumentError("ser_curve: need at least one trial");
    }
    Scenario ref = norm == Normalization::PerScenario ? scenario : Scenario::LosNlos;
    return ser_curve(gains, scenario, grid, mean_square_gain(gains, ref));
}

inline SerCurve ser_curve(TrialSet const& set, Scenario scenario, SnrGrid const& grid,
                          Normalization norm = Normalization::PerScenario)
{
    SerCurve c = ser_curve(std::span<TrialGains const>(set.trials), scenario, grid, norm);
    c.seed = set.seed;
    return c;
}

inline constexpr double soft_fec_limit = 3.8e-3;

struct RequiredSnr {
    std::optional<double> snr_db; //!< empty when the curve never reaches the target
    bool non_monotone = false;    //!< curve rises above the target after crossing
};

/**
 * @brief Lowest SNR at which the curve reaches the target SER
 *
 * The first crossing is refined by interpolating log10(SER) linearly in dB
 * between the bracketing grid points.
 */
inline RequiredSnr required_snr(SerCurve const& curve, double target = soft_fec_limit)
{
    if (!(target > 0.0 && target < 0.5)) {
        throw ArgumentError("required_snr: target must lie in (0, 0.5)");
    }
    auto const& pts = curve.points;
    RequiredSnr out;
    auto hit = std::find_if(pts.begin(), pts.end(),
                            [&](SerPoint const& p) { return p.ser <= target; });
    if (hit == pts.end()) {
        return out;
    }
    out.non_monotone = std::any_of(hit, pts.end(), [&](SerPoint const& p) { return p.ser > target; });
    if (hit == pts.begin()) {
        out.snr_db = hit->snr_db;
        return out;
    }
    SerPoint const& lo = *(hit - 1);
    SerPoint const& hi = *hit;
    double frac;
    if (hi.ser > 0.0 && lo.ser > 0.0) {
        double a = std::log10(lo.ser);
        double b = std::log10(hi.ser);
        frac = (a - std::log10(target)) / (a - b);
    } else {
        frac = (lo.ser - target) / (lo.ser - hi.ser);
    }
    out.snr_db = lo.snr_db + std::clamp(frac, 0.0, 1.0) * (hi.snr_db - lo.snr_db);
    return out;
}

} // namespace irsvlc
