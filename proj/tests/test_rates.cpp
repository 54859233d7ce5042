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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "risrsma/channel.hpp"
#include "risrsma/rates.hpp"

using namespace risrsma;

namespace {

// independent scalar route used as the oracle for the implementation path
long double oracle_common(long double ac, long double ap_sum, long double p,
                          long double g, long double n0) {
    return std::log2(1.0L + ac * p * g / (ap_sum * p * g + n0));
}

long double oracle_private(long double ap_self, long double ap_other, long double p,
                           long double g, long double n0) {
    return std::log2(1.0L + ap_self * p * g / (ap_other * p * g + n0));
}

bool close_rel(double actual, long double expected, double rel = 1e-12) {
    return std::abs(actual - static_cast<double>(expected)) <=
           rel * std::abs(static_cast<double>(expected));
}

} // namespace

TEST_CASE("PowerSplit keeps the power budget") {
    const PowerSplit a = PowerSplit::equal_private(0.5, 2);
    CHECK(a.alpha_c == 0.5);
    CHECK(a.alpha_p == std::vector<double>{0.25, 0.25});
    CHECK(std::abs(a.alpha_c + a.private_sum() - 1.0) <= 1e-9);
    CHECK(a.feasible);

    const PowerSplit b = PowerSplit::from_private(0.225, 2);
    CHECK(b.alpha_c == Catch::Approx(0.55));
    CHECK(std::abs(b.alpha_c + b.private_sum() - 1.0) <= 1e-9);
    CHECK(b.alpha_p[0] == b.alpha_p[1]);
}

TEST_CASE("common_rate_per_user matches the scalar formula") {
    const NoiseModel noise{0.1};

    SECTION("half power to the common stream") {
        const PowerSplit split = PowerSplit::equal_private(0.5, 2);
        const double rate = common_rate_per_user(1.0, split, 1.0, noise);
        CHECK(close_rel(rate, oracle_common(0.5L, 0.5L, 1.0L, 1.0L, 0.1L)));
        CHECK(rate == Catch::Approx(0.8744691179161411).epsilon(1e-12));
    }

    SECTION("no common power, no common rate") {
        const PowerSplit split = PowerSplit::equal_private(0.0, 2);
        CHECK(common_rate_per_user(1.0, split, 1.0, noise) == 0.0);
        CHECK(common_rate_per_user(123.0, split, 5.0, NoiseModel{2.0}) == 0.0);
    }

    SECTION("interference-free identity point") {
        const PowerSplit split = PowerSplit::equal_private(1.0, 2);
        CHECK(common_rate_per_user(1.0, split, 1.0, NoiseModel{1.0}) ==
              Catch::Approx(1.0).epsilon(1e-15));
    }

    SECTION("zero gain degenerates to zero rate") {
        const PowerSplit split = PowerSplit::equal_private(0.5, 2);
        CHECK(common_rate_per_user(0.0, split, 1.0, noise) == 0.0);
    }
}

TEST_CASE("common_rate is the per-user minimum") {
    CHECK(common_rate({0.5, 0.9}) == 0.5);
    CHECK(common_rate({1.2, 1.2}) == 1.2);
    CHECK_THROWS_AS(common_rate({}), std::invalid_argument);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> gain(0.0, 50.0);
    const PowerSplit split = PowerSplit::equal_private(0.6, 2);
    const NoiseModel noise{0.3};
    for (int i = 0; i < 200; ++i) {
        const std::vector<double> gains{gain(rng), gain(rng)};
        std::vector<double> per_user(2);
        for (std::size_t k = 0; k < 2; ++k)
            per_user[k] = common_rate_per_user(gains[k], split, 1.0, noise);
        CHECK(common_rate(per_user) == std::min(per_user[0], per_user[1]));
    }
}

TEST_CASE("private_rate matches the scalar formula") {
    SECTION("symmetric quarter split") {
        const PowerSplit split = PowerSplit::equal_private(0.5, 2);
        const double rate = private_rate(0, 1.0, split, 1.0, NoiseModel{0.25});
        CHECK(close_rel(rate, oracle_private(0.25L, 0.25L, 1.0L, 1.0L, 0.25L)));
        CHECK(rate == Catch::Approx(0.5849625007211562).epsilon(1e-12));
    }

    SECTION("no private power, no private rate") {
        const PowerSplit split = PowerSplit::equal_private(1.0, 2);
        CHECK(private_rate(0, 3.0, split, 1.0, NoiseModel{0.5}) == 0.0);
    }

    SECTION("unit-SNR identity point") {
        PowerSplit split = PowerSplit::equal_private(0.6, 2);
        split.alpha_p = {0.4, 0.0};
        CHECK(private_rate(0, 1.0, split, 1.0, NoiseModel{0.4}) ==
              Catch::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("rate monotonicity") {
    const NoiseModel noise{0.2};

    SECTION("common rate rises with alpha_c along the budget line") {
        double previous = -1.0;
        for (double ac = 0.0; ac <= 1.0 + 1e-12; ac += 0.05) {
            const PowerSplit split = PowerSplit::equal_private(std::min(ac, 1.0), 2);
            const double rate = common_rate_per_user(2.5, split, 1.0, noise);
            REQUIRE(rate > previous);
            previous = rate;
        }
    }

    SECTION("private rate rises with own gain, falls with the other's power") {
        const PowerSplit split = PowerSplit::equal_private(0.5, 2);
        double previous = -1.0;
        for (double g = 0.1; g <= 10.0; g += 0.3) {
            const double rate = private_rate(0, g, split, 1.0, noise);
            REQUIRE(rate > previous);
            previous = rate;
        }
        previous = 1e9;
        for (double other = 0.0; other <= 0.5; other += 0.05) {
            PowerSplit asym = PowerSplit::equal_private(0.5, 2);
            asym.alpha_p = {0.25, other};
            const double rate = private_rate(0, 2.0, asym, 1.0, noise);
            REQUIRE(rate <= previous);
            previous = rate;
        }
    }
}

TEST_CASE("evaluate_rates composition") {
    ScenarioConfig cfg;
    cfg.n_elements = 8;
    cfg.element_threshold = 1;
    const NoiseModel noise{0.05};

    SECTION("all power to the common stream") {
        const ChannelRealization r = sample_realization(cfg, 3);
        const SegmentAssignment a = assign_segments(cfg, 4, 0);
        const PowerSplit split = PowerSplit::equal_private(1.0, 2);
        const RateReport report = evaluate_rates(r, a, split, cfg, noise);
        CHECK(report.private_per_user[0] == 0.0);
        CHECK(report.private_per_user[1] == 0.0);
        CHECK(report.sum_rate == Catch::Approx(2.0 * report.common));
    }

    SECTION("identical users see identical rates") {
        ChannelRealization r = sample_realization(cfg, 4);
        r.ris_ue[0] = r.ris_ue[1];
        r.bs_ue[0] = r.bs_ue[1];
        const SegmentAssignment a = assign_segments(cfg, 4, 0); // equal blocks
        const PowerSplit split = PowerSplit::equal_private(0.5, 2);
        // blocks differ, so force equal gains by also mirroring the cascade
        for (std::size_t j = 0; j < 4; ++j) {
            r.bs_ris[j + 4] = r.bs_ris[j];
            r.ris_ue[0][j + 4] = r.ris_ue[0][j];
            r.ris_ue[1][j + 4] = r.ris_ue[1][j];
        }
        const RateReport report = evaluate_rates(r, a, split, cfg, noise);
        CHECK(report.common_per_user[0] == Catch::Approx(report.common_per_user[1]));
        CHECK(report.private_per_user[0] == Catch::Approx(report.private_per_user[1]));
    }

    SECTION("every field matches the independent scalar recomputation") {
        for (std::uint64_t t = 0; t < 50; ++t) {
            const ChannelRealization r = sample_realization(cfg, t);
            const SegmentAssignment a = assign_segments(cfg, 1 + t % 7, t % 2);
            const PowerSplit split = PowerSplit::equal_private(0.3 + 0.01 * (t % 40), 2);
            const RateReport report = evaluate_rates(r, a, split, cfg, noise);

            std::vector<long double> gains(2);
            for (std::size_t user = 0; user < 2; ++user) {
                long double amp = std::abs(r.bs_ue[user]);
                for (std::size_t j = a.ranges[user].first; j < a.ranges[user].second; ++j)
                    amp += std::abs(r.bs_ris[j]) * std::abs(r.ris_ue[user][j]);
                gains[user] = amp * amp;
            }
            const long double ap = split.alpha_p[0];
            for (std::size_t k = 0; k < 2; ++k) {
                REQUIRE(close_rel(report.common_per_user[k],
                                  oracle_common(split.alpha_c, 2.0L * ap, 1.0L,
                                                gains[k], noise.noise_power)));
                REQUIRE(close_rel(report.private_per_user[k],
                                  oracle_private(ap, ap, 1.0L, gains[k],
                                                 noise.noise_power)));
            }

            // structural identities hold exactly
            REQUIRE(report.common ==
                    std::min(report.common_per_user[0], report.common_per_user[1]));
            for (std::size_t k = 0; k < 2; ++k)
                REQUIRE(report.user_total[k] == report.common + report.private_per_user[k]);
            REQUIRE(report.sum_rate == report.user_total[0] + report.user_total[1]);

            // nonnegativity and the interference-free ceiling
            for (std::size_t k = 0; k < 2; ++k) {
                REQUIRE(report.common_per_user[k] >= 0.0);
                REQUIRE(report.private_per_user[k] >= 0.0);
                const double ceiling = std::log2(
                    1.0 + static_cast<double>(gains[k]) / noise.noise_power);
                REQUIRE(report.common_per_user[k] <= ceiling + 1e-12);
            }
        }
    }

    SECTION("zero gains evaluate to zero rates") {
        const std::vector<double> gains{0.0, 0.0};
        const PowerSplit split = PowerSplit::equal_private(0.5, 2);
        const RateReport report = evaluate_rates_from_gains(gains, split, 1.0, noise);
        CHECK(report.common == 0.0);
        CHECK(report.sum_rate == 0.0);
    }
}

TEST_CASE("qos_capped_sum_rate credits the common stream at the target") {
    RateReport report;
    report.common = 3.0;
    report.private_per_user = {1.0, 0.5};
    CHECK(qos_capped_sum_rate(report, 2.0) == Catch::Approx(2.0 + 1.0 + 2.0 + 0.5));
    CHECK(qos_capped_sum_rate(report, 4.0) == Catch::Approx(3.0 + 1.0 + 3.0 + 0.5));
    CHECK(qos_capped_sum_rate(report, 0.0) == Catch::Approx(1.5));
}
