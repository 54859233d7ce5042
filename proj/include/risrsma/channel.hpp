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
// Channel synthesis and effective-gain computation.
//
// Fading model: every link coefficient is an independent circularly-symmetric
// complex Gaussian with zero mean and variance d^-eta, d the normalized link
// distance. A realization is a pure function of (seed, trial_index), so trials
// can run in any order, on any number of threads, and reproduce bit-exactly.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "risrsma/scenario.hpp"

namespace risrsma {

/// One draw of all complex channel coefficients.
struct ChannelRealization {
    std::vector<std::complex<double>> bs_ris;              ///< BS->RIS, per element
    std::vector<std::vector<std::complex<double>>> ris_ue; ///< RIS->UE, [user][element]
    std::vector<std::complex<double>> bs_ue;               ///< BS->UE direct, per user

    std::size_t n_elements() const { return bs_ris.size(); }
    std::size_t n_users() const { return bs_ue.size(); }
};

/// Contiguous element block per user, as half-open index ranges covering
/// [0, N). User 0's block is anchored at index 0 and user 1's at index N;
/// the partition is fully described by the boundary between them. Growing a
/// user's share keeps their previous elements, which keeps the per-user gain
/// monotone in the share and lets the element bisection reuse the equal-split
/// point evaluated by the power search.
struct SegmentAssignment {
    std::vector<std::pair<std::size_t, std::size_t>> ranges; ///< [user] -> [begin, end)

    std::size_t count(std::size_t user) const {
        return ranges[user].second - ranges[user].first;
    }
    std::size_t n_users() const { return ranges.size(); }
};

/// Phase shift per assigned element, each in [0, 2*pi); the reflection
/// coefficient of element j is exp(i * phases[j]) (unit modulus).
struct PhaseProfile {
    std::vector<double> phases;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Engine seed for one trial; decorrelates consecutive (seed, trial) pairs.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t trial_index) {
    return mix64(mix64(seed) ^ (trial_index + 0xD1B54A32D192ED03ull));
}

inline double wrap_two_pi(double angle) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double wrapped = std::fmod(angle, two_pi);
    if (wrapped < 0.0)
        wrapped += two_pi;
    if (wrapped >= two_pi) // fmod can land exactly on 2*pi after the add
        wrapped = 0.0;
    return wrapped;
}

} // namespace detail

/// Draws one channel realization for the given trial. Deterministic in
/// (cfg.seed, trial_index); the draw order is fixed (BS->RIS elements, then
/// each user's RIS->UE elements, then the direct links).
inline ChannelRealization sample_realization(const ScenarioConfig& cfg,
                                             std::uint64_t trial_index) {
    std::mt19937_64 rng(detail::stream_seed(cfg.seed, trial_index));
    std::normal_distribution<double> unit_normal(0.0, 1.0);

    auto draw = [&](double distance) {
        // variance d^-eta split evenly between the real and imaginary parts
        const double sigma = std::sqrt(0.5 * std::pow(distance, -cfg.pathloss_exponent));
        const double re = unit_normal(rng);
        const double im = unit_normal(rng);
        return std::complex<double>(sigma * re, sigma * im);
    };

    ChannelRealization out;
    out.bs_ris.resize(cfg.n_elements);
    for (auto& coeff : out.bs_ris)
        coeff = draw(cfg.dist_bs_ris);

    out.ris_ue.resize(cfg.n_users);
    for (std::size_t user = 0; user < cfg.n_users; ++user) {
        out.ris_ue[user].resize(cfg.n_elements);
        for (auto& coeff : out.ris_ue[user])
            coeff = draw(cfg.dist_ris_ue[user]);
    }

    out.bs_ue.resize(cfg.n_users);
    for (std::size_t user = 0; user < cfg.n_users; ++user)
        out.bs_ue[user] = draw(cfg.dist_bs_ue[user]);

    return out;
}

/// Splits the N elements into two contiguous blocks with n_good of them on
/// the good user's side. Throws std::invalid_argument when either share
/// would drop below element_threshold.
inline SegmentAssignment assign_segments(const ScenarioConfig& cfg,
                                         std::size_t n_good,
                                         std::size_t good_user) {
    if (good_user >= cfg.n_users)
        throw std::invalid_argument("assign_segments: good_user out of range");
    if (n_good < cfg.element_threshold ||
        n_good > cfg.n_elements - cfg.element_threshold)
        throw std::invalid_argument(
            "assign_segments: n_good must lie in [element_threshold, "
            "n_elements - element_threshold]");

    const std::size_t boundary =
        good_user == 0 ? n_good : cfg.n_elements - n_good;
    SegmentAssignment out;
    out.ranges = {{0, boundary}, {boundary, cfg.n_elements}};
    return out;
}

/// Equal N/K split; this is the reference partition used by the power search
/// and by the fixed-allocation baseline.
inline SegmentAssignment equal_assignment(const ScenarioConfig& cfg) {
    return assign_segments(cfg, cfg.n_elements / cfg.n_users, 0);
}

/// Coherent alignment: each assigned element cancels the phase of its cascaded
/// path against the direct link, theta_j = arg(h_d) - arg(g_j * h_ris_j).
/// This is the unit-modulus optimum for a single-antenna cascade. A zero
/// direct link uses reference phase 0 (std::arg(0) == 0).
inline PhaseProfile align_phases(const ChannelRealization& realization,
                                 const SegmentAssignment& assignment,
                                 std::size_t user) {
    const auto [begin, end] = assignment.ranges[user];
    const double reference = std::arg(realization.bs_ue[user]);

    PhaseProfile out;
    out.phases.reserve(end - begin);
    for (std::size_t j = begin; j < end; ++j) {
        const std::complex<double> cascade =
            realization.bs_ris[j] * realization.ris_ue[user][j];
        out.phases.push_back(detail::wrap_two_pi(reference - std::arg(cascade)));
    }
    return out;
}

/// Channel power gain |h_k|^2 of the coherently aligned effective channel:
/// (|h_d| + sum over the user's block of |g_j| * |h_ris_j|)^2.
inline double effective_gain(const ChannelRealization& realization,
                             const SegmentAssignment& assignment,
                             std::size_t user) {
    const auto [begin, end] = assignment.ranges[user];
    double amplitude = std::abs(realization.bs_ue[user]);
    for (std::size_t j = begin; j < end; ++j)
        amplitude += std::abs(realization.bs_ris[j]) *
                     std::abs(realization.ris_ue[user][j]);
    return amplitude * amplitude;
}

/// Channel power gain without the RIS, |h_d|^2 (conventional baseline).
inline double direct_only_gain(const ChannelRealization& realization,
                               std::size_t user) {
    return std::norm(realization.bs_ue[user]);
}

} // namespace risrsma
