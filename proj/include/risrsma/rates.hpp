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
// RSMA rate equations for one two-user group.
//
// Each user first decodes the common stream, treating both private streams
// as noise, then cancels it and decodes its own private stream with only the
// other user's private stream interfering. SINRs use the channel power gain.
// The common stream must be decodable by both users, so its rate is the
// per-user minimum. User totals add the full common rate to each user's
// private rate; the sum rate is the sum of the user totals.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "risrsma/channel.hpp"
#include "risrsma/scenario.hpp"

namespace risrsma {

/// Power allocation factors: alpha_c for the common stream and one private
/// factor per user. The private power is always divided equally, so
/// alpha_c + K * alpha_p = 1 holds by construction.
struct PowerSplit {
    double alpha_c = 0.0;
    std::vector<double> alpha_p;
    bool feasible = true; ///< whether the common-rate target was attainable

    /// Split with the given common factor and the remainder shared equally.
    static PowerSplit equal_private(double alpha_c, std::size_t n_users) {
        PowerSplit split;
        split.alpha_c = alpha_c;
        split.alpha_p.assign(n_users, (1.0 - alpha_c) / static_cast<double>(n_users));
        return split;
    }

    /// Split with the given per-user private factor; alpha_c absorbs the rest.
    static PowerSplit from_private(double alpha_p_each, std::size_t n_users) {
        PowerSplit split;
        split.alpha_c = 1.0 - static_cast<double>(n_users) * alpha_p_each;
        split.alpha_p.assign(n_users, alpha_p_each);
        return split;
    }

    double private_sum() const {
        double sum = 0.0;
        for (double a : alpha_p)
            sum += a;
        return sum;
    }
};

/// All rates of one evaluation, bits/s/Hz.
struct RateReport {
    std::vector<double> common_per_user;  ///< decodable common rate at each user
    double common = 0.0;                  ///< min over users
    std::vector<double> private_per_user;
    std::vector<double> user_total;       ///< common + own private, per user
    double sum_rate = 0.0;
};

/// Rate at which one user can decode the common stream, both private streams
/// acting as noise. Zero gain yields zero rate.
inline double common_rate_per_user(double gain, const PowerSplit& split,
                                   double p_total, const NoiseModel& noise) {
    const double signal = split.alpha_c * p_total * gain;
    const double interference = split.private_sum() * p_total * gain;
    return std::log2(1.0 + signal / (interference + noise.noise_power));
}

/// Common-stream rate of the group: the minimum over the per-user rates.
inline double common_rate(const std::vector<double>& per_user) {
    if (per_user.empty())
        throw std::invalid_argument("common_rate: needs at least one user");
    return *std::min_element(per_user.begin(), per_user.end());
}

/// Private-stream rate of one user after the common stream is cancelled;
/// only the other users' private streams interfere.
inline double private_rate(std::size_t user, double gain, const PowerSplit& split,
                           double p_total, const NoiseModel& noise) {
    const double signal = split.alpha_p[user] * p_total * gain;
    const double interference =
        (split.private_sum() - split.alpha_p[user]) * p_total * gain;
    return std::log2(1.0 + signal / (interference + noise.noise_power));
}

/// Fills a RateReport from per-user channel power gains.
inline RateReport evaluate_rates_from_gains(const std::vector<double>& gains,
                                            const PowerSplit& split,
                                            double p_total,
                                            const NoiseModel& noise) {
    const std::size_t n_users = gains.size();
    RateReport report;
    report.common_per_user.resize(n_users);
    report.private_per_user.resize(n_users);
    report.user_total.resize(n_users);

    for (std::size_t k = 0; k < n_users; ++k)
        report.common_per_user[k] = common_rate_per_user(gains[k], split, p_total, noise);
    report.common = common_rate(report.common_per_user);

    report.sum_rate = 0.0;
    for (std::size_t k = 0; k < n_users; ++k) {
        report.private_per_user[k] = private_rate(k, gains[k], split, p_total, noise);
        report.user_total[k] = report.common + report.private_per_user[k];
        report.sum_rate += report.user_total[k];
    }
    return report;
}

/// Evaluates all rates for one realization under the given element partition
/// and power split, with coherently aligned RIS phases.
inline RateReport evaluate_rates(const ChannelRealization& realization,
                                 const SegmentAssignment& assignment,
                                 const PowerSplit& split,
                                 const ScenarioConfig& cfg,
                                 const NoiseModel& noise) {
    std::vector<double> gains(cfg.n_users);
    for (std::size_t k = 0; k < cfg.n_users; ++k)
        gains[k] = effective_gain(realization, assignment, k);
    return evaluate_rates_from_gains(gains, split, cfg.total_power, noise);
}

/// Sum rate with the common stream credited at no more than the target rate.
/// This is the quantity the two-stage allocation search actually improves:
/// once the QoS constraint holds, extra decodable common rate carries no
/// payload, so candidates are compared by K * min(R_c, R_T) + sum of private
/// rates.
inline double qos_capped_sum_rate(const RateReport& report, double target_rate) {
    double sum = 0.0;
    const double credited = std::min(report.common, target_rate);
    for (double rp : report.private_per_user)
        sum += credited + rp;
    return sum;
}

} // namespace risrsma
