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

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace risrsma {

/// Raised for invalid scenario parameters or malformed configuration input.
/// The message names the offending key.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// All physical and solver parameters of one simulation scenario.
///
/// Per-user lists hold user 0 first (the far UE of the pair) and user 1
/// second (the near UE). Distances are normalized; powers are normalized
/// watts; rates are bits/s/Hz. Defaults reproduce the reference scenario:
/// 256 reflecting elements, two users, unit transmit power, a 2 bits/s/Hz
/// common-rate target and a 0-30 dB transmit-SNR sweep.
struct ScenarioConfig {
    std::size_t n_elements = 256;      ///< total RIS reflecting elements (N)
    std::size_t n_users = 2;           ///< users per group (fixed at 2)
    double total_power = 1.0;          ///< transmit power budget (P_T)
    double target_common_rate = 2.0;   ///< QoS floor for the common stream (R_T)
    std::vector<double> snr_grid_db = {0, 5, 10, 15, 20, 25, 30};
    std::vector<double> dist_bs_ue = {1.0, 0.5};   ///< BS->UE distance per user
    double dist_bs_ris = 0.4;                      ///< BS->RIS distance
    std::vector<double> dist_ris_ue = {0.6, 0.3};  ///< RIS->UE distance per user
    double pathloss_exponent = 2.0;
    double power_tolerance = 1e-6;     ///< bisection stopping width on alpha_p
    std::size_t element_threshold = 4; ///< minimum elements per user (N_th)
    std::size_t n_trials = 1000;       ///< Monte Carlo trials per SNR point
    std::uint64_t seed = 42;
};

/// Additive noise variance at the receiver (N_0).
struct NoiseModel {
    double noise_power = 1.0;
};

/// Transmit SNR (dB) fixes the noise power relative to the power budget.
inline NoiseModel noise_from_snr_db(double total_power, double snr_db) {
    return NoiseModel{total_power / std::pow(10.0, snr_db / 10.0)};
}

namespace detail {

inline void require(bool ok, const std::string& message) {
    if (!ok)
        throw ConfigError(message);
}

} // namespace detail

/// Checks every scenario invariant; throws ConfigError naming the first
/// violated key.
inline void validate(const ScenarioConfig& cfg) {
    using detail::require;

    require(cfg.n_users == 2, "n_users: must be 2 (one two-user group)");
    require(cfg.n_elements >= 2 * cfg.element_threshold,
            "n_elements: must be at least 2 * element_threshold so both users "
            "can receive element_threshold elements");
    require(cfg.n_elements % cfg.n_users == 0,
            "n_elements: must be divisible by n_users (equal split N/K is used "
            "by the power search and the fixed-allocation baseline)");
    require(cfg.element_threshold >= 1, "element_threshold: must be positive");
    require(cfg.total_power > 0.0, "total_power: must be positive");
    require(cfg.target_common_rate >= 0.0, "target_common_rate: must be nonnegative");
    require(cfg.power_tolerance > 0.0 && cfg.power_tolerance < 1.0,
            "power_tolerance: must lie in (0, 1)");
    require(cfg.pathloss_exponent > 0.0, "pathloss_exponent: must be positive");
    require(cfg.n_trials >= 1, "n_trials: must be at least 1");

    require(!cfg.snr_grid_db.empty(), "snr_grid_db: must not be empty");
    for (std::size_t i = 0; i + 1 < cfg.snr_grid_db.size(); ++i)
        require(cfg.snr_grid_db[i] < cfg.snr_grid_db[i + 1],
                "snr_grid_db: values must be strictly ascending");

    require(cfg.dist_bs_ris > 0.0, "dist_bs_ris: must be positive");
    require(cfg.dist_bs_ue.size() == cfg.n_users,
            "dist_bs_ue: needs one entry per user");
    require(cfg.dist_ris_ue.size() == cfg.n_users,
            "dist_ris_ue: needs one entry per user");
    for (double d : cfg.dist_bs_ue)
        require(d > 0.0, "dist_bs_ue: distances must be positive");
    for (double d : cfg.dist_ris_ue)
        require(d > 0.0, "dist_ris_ue: distances must be positive");
}

} // namespace risrsma
