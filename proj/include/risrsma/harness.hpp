// SPDX-License-Identifier: Apache-2.0
//
// risrsma — downlink RIS-assisted RSMA link-level simulator
// Copyright (C) 2026 the risrsma authors
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
//
// Monte Carlo experiment engine. Each trial draws one channel realization and
// evaluates three schemes on it (paired comparison):
//   - conventional RSMA: direct links only, fixed split alpha_c = 0.5;
//   - RIS-RSMA: equal element split, coherent phases, same fixed split;
//   - ORIS-RSMA: the two-stage bisection allocator.
// Trials are keyed by (seed, trial_index), so the sweep is a pure function of
// the scenario; parallel execution cannot change any output bit.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "risrsma/channel.hpp"
#include "risrsma/optimizer.hpp"
#include "risrsma/rates.hpp"
#include "risrsma/scenario.hpp"

namespace risrsma {

/// Outcome of one paired trial at one SNR point.
struct TrialResult {
    double snr_db = 0.0;
    double sr_rsma = 0.0;      ///< conventional RSMA sum rate
    double sr_ris_rsma = 0.0;  ///< fixed-allocation RIS-RSMA sum rate
    double sr_oris_rsma = 0.0; ///< optimized RIS-RSMA sum rate
    int n_good = 0;
    int n_worst = 0;
    double alpha_c = 0.0;
    bool feasible = false;
    // instrumentation of the optimized scheme
    double oris_common_rate = 0.0;
    int opa_iterations = 0;
    int oris_iterations = 0;
};

/// Per-SNR aggregates. Sum rates are averaged over all trials; the allocation
/// quantities (n_good, n_worst, alpha_c) are averaged over feasible trials
/// only, since the infeasible fallback pins them at protective values.
/// Standard errors are sample standard deviation / sqrt(count); zero when
/// fewer than two samples exist, NaN means when no sample exists.
struct SnrAggregate {
    double snr_db = 0.0;
    double mean_sr_rsma = 0.0, se_sr_rsma = 0.0;
    double mean_sr_ris_rsma = 0.0, se_sr_ris_rsma = 0.0;
    double mean_sr_oris_rsma = 0.0, se_sr_oris_rsma = 0.0;
    double mean_n_good = 0.0, se_n_good = 0.0;
    double mean_n_worst = 0.0, se_n_worst = 0.0;
    double mean_alpha_c = 0.0, se_alpha_c = 0.0;
    std::size_t n_trials = 0;
    std::size_t n_feasible = 0;
    std::size_t n_infeasible = 0;
};

/// Full sweep output: aggregates plus the raw trials they were computed from,
/// grouped by SNR grid index.
struct SweepResult {
    std::vector<SnrAggregate> per_snr;
    std::vector<std::vector<TrialResult>> trials;
};

/// Runs the three schemes on one shared realization.
inline TrialResult run_trial(const ScenarioConfig& cfg, std::uint64_t trial_index,
                             double snr_db) {
    const ChannelRealization realization = sample_realization(cfg, trial_index);
    const NoiseModel noise = noise_from_snr_db(cfg.total_power, snr_db);
    const PowerSplit fixed_split = PowerSplit::equal_private(0.5, cfg.n_users);

    TrialResult trial;
    trial.snr_db = snr_db;

    std::vector<double> direct_gains(cfg.n_users);
    for (std::size_t k = 0; k < cfg.n_users; ++k)
        direct_gains[k] = direct_only_gain(realization, k);
    trial.sr_rsma =
        evaluate_rates_from_gains(direct_gains, fixed_split, cfg.total_power, noise)
            .sum_rate;

    const SegmentAssignment equal = equal_assignment(cfg);
    trial.sr_ris_rsma =
        evaluate_rates(realization, equal, fixed_split, cfg, noise).sum_rate;

    const Solution solution = oris_rsma(realization, cfg, noise);
    trial.sr_oris_rsma = solution.rates.sum_rate;
    trial.n_good = static_cast<int>(solution.partition.n_good);
    trial.n_worst = static_cast<int>(solution.partition.n_worst);
    trial.alpha_c = solution.split.alpha_c;
    trial.feasible = solution.feasible();
    trial.oris_common_rate = solution.rates.common;
    trial.opa_iterations = solution.opa_iterations;
    trial.oris_iterations = solution.oris_iterations;
    return trial;
}

namespace detail {

struct MeanSe {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double se = 0.0;
};

/// Two-pass mean and standard error in a fixed accumulation order.
template <typename Range>
inline MeanSe mean_se(const Range& values) {
    std::size_t n = 0;
    double sum = 0.0;
    for (double v : values) {
        sum += v;
        ++n;
    }
    if (n == 0)
        return {};
    MeanSe out;
    out.mean = sum / static_cast<double>(n);
    if (n < 2)
        return out;
    double sq = 0.0;
    for (double v : values)
        sq += (v - out.mean) * (v - out.mean);
    const double sd = std::sqrt(sq / static_cast<double>(n - 1));
    out.se = sd / std::sqrt(static_cast<double>(n));
    return out;
}

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("RISRSMA_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed >= 1 && parsed <= 256)
            return static_cast<unsigned>(parsed);
    }
    return 1;
}

inline SnrAggregate aggregate(double snr_db, const std::vector<TrialResult>& trials) {
    SnrAggregate agg;
    agg.snr_db = snr_db;
    agg.n_trials = trials.size();

    std::vector<double> values;
    values.reserve(trials.size());
    auto collect = [&](auto field, bool feasible_only) -> const std::vector<double>& {
        values.clear();
        for (const TrialResult& t : trials)
            if (!feasible_only || t.feasible)
                values.push_back(static_cast<double>(field(t)));
        return values;
    };

    MeanSe m;
    m = mean_se(collect([](const TrialResult& t) { return t.sr_rsma; }, false));
    agg.mean_sr_rsma = m.mean, agg.se_sr_rsma = m.se;
    m = mean_se(collect([](const TrialResult& t) { return t.sr_ris_rsma; }, false));
    agg.mean_sr_ris_rsma = m.mean, agg.se_sr_ris_rsma = m.se;
    m = mean_se(collect([](const TrialResult& t) { return t.sr_oris_rsma; }, false));
    agg.mean_sr_oris_rsma = m.mean, agg.se_sr_oris_rsma = m.se;

    m = mean_se(collect([](const TrialResult& t) { return t.n_good; }, true));
    agg.mean_n_good = m.mean, agg.se_n_good = m.se;
    agg.n_feasible = values.size();
    agg.n_infeasible = trials.size() - values.size();
    m = mean_se(collect([](const TrialResult& t) { return t.n_worst; }, true));
    agg.mean_n_worst = m.mean, agg.se_n_worst = m.se;
    m = mean_se(collect([](const TrialResult& t) { return t.alpha_c; }, true));
    agg.mean_alpha_c = m.mean, agg.se_alpha_c = m.se;
    return agg;
}

} // namespace detail

/// Runs n_trials paired trials at every SNR grid point and aggregates them.
/// n_threads = 0 consults the RISRSMA_THREADS environment variable (default
/// 1). Trials are assigned to threads by index and reduced in index order, so
/// the result is identical for any parallelism degree.
inline SweepResult sweep(const ScenarioConfig& cfg, unsigned n_threads = 0) {
    validate(cfg);
    const unsigned workers = detail::resolve_threads(n_threads);
    const std::size_t n_snr = cfg.snr_grid_db.size();

    SweepResult result;
    result.trials.assign(n_snr, std::vector<TrialResult>(cfg.n_trials));

    const std::size_t n_tasks = n_snr * cfg.n_trials;
    auto run_slice = [&](unsigned worker) {
        for (std::size_t task = worker; task < n_tasks; task += workers) {
            const std::size_t s = task / cfg.n_trials;
            const std::size_t t = task % cfg.n_trials;
            result.trials[s][t] = run_trial(cfg, t, cfg.snr_grid_db[s]);
        }
    };

    if (workers == 1) {
        run_slice(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(run_slice, w);
        for (auto& th : pool)
            th.join();
    }

    result.per_snr.reserve(n_snr);
    for (std::size_t s = 0; s < n_snr; ++s)
        result.per_snr.push_back(detail::aggregate(cfg.snr_grid_db[s], result.trials[s]));
    return result;
}

} // namespace risrsma
