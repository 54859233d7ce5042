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
// Scenario file I/O and result emission.
//
// Scenario files are `key = value` lines ('#' comments, lists comma-separated)
// with keys named after the ScenarioConfig fields. JSON is accepted too; in
// particular a previously written manifest.json reloads as the scenario it
// recorded, which reproduces that run bit-exactly.

#pragma once

#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "risrsma/harness.hpp"
#include "risrsma/scenario.hpp"
#include "risrsma/version.hpp"

namespace risrsma {

/// Raised when result files cannot be written.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Optional command-line overrides; set fields win over file values.
struct ConfigOverrides {
    std::optional<std::size_t> n_elements;
    std::optional<double> total_power;
    std::optional<double> target_common_rate;
    std::optional<double> snr_min_db, snr_max_db, snr_step_db;
    std::optional<double> pathloss_exponent;
    std::optional<double> power_tolerance;
    std::optional<std::size_t> element_threshold;
    std::optional<std::size_t> n_trials;
    std::optional<std::uint64_t> seed;
};

/// Record of one completed run.
struct RunManifest {
    ScenarioConfig config;
    std::string artifact_version;
    double duration_seconds = 0.0;
    std::vector<std::pair<double, std::size_t>> infeasible_per_snr;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double parsed = std::stod(value, &used);
        if (trim(value.substr(used)).empty())
            return parsed;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": expected a number, got '" + value + "'");
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long parsed = std::stoull(value, &used);
        if (trim(value.substr(used)).empty() && value.find('-') == std::string::npos)
            return parsed;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + ": expected a nonnegative integer, got '" + value + "'");
}

inline std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(key, trim(item)));
    if (out.empty())
        throw ConfigError(key + ": expected a comma-separated list");
    return out;
}

inline void apply_key(ScenarioConfig& cfg, const std::string& key,
                      const std::string& value) {
    if (key == "n_elements")
        cfg.n_elements = parse_uint(key, value);
    else if (key == "n_users")
        cfg.n_users = parse_uint(key, value);
    else if (key == "total_power")
        cfg.total_power = parse_double(key, value);
    else if (key == "target_common_rate")
        cfg.target_common_rate = parse_double(key, value);
    else if (key == "snr_grid_db")
        cfg.snr_grid_db = parse_list(key, value);
    else if (key == "dist_bs_ue")
        cfg.dist_bs_ue = parse_list(key, value);
    else if (key == "dist_bs_ris")
        cfg.dist_bs_ris = parse_double(key, value);
    else if (key == "dist_ris_ue")
        cfg.dist_ris_ue = parse_list(key, value);
    else if (key == "pathloss_exponent")
        cfg.pathloss_exponent = parse_double(key, value);
    else if (key == "power_tolerance")
        cfg.power_tolerance = parse_double(key, value);
    else if (key == "element_threshold")
        cfg.element_threshold = parse_uint(key, value);
    else if (key == "n_trials")
        cfg.n_trials = parse_uint(key, value);
    else if (key == "seed")
        cfg.seed = parse_uint(key, value);
    else
        throw ConfigError(key + ": unknown configuration key");
}

inline ScenarioConfig config_from_json(const nlohmann::json& root) {
    // a manifest wraps the scenario under "config"; accept both layouts
    const nlohmann::json& node =
        root.contains("config") ? root.at("config") : root;
    if (!node.is_object())
        throw ConfigError("config: expected a JSON object");

    ScenarioConfig cfg;
    for (const auto& [key, value] : node.items()) {
        if (value.is_array()) {
            std::string joined;
            for (const auto& item : value) {
                if (!joined.empty())
                    joined += ',';
                joined += item.dump();
            }
            apply_key(cfg, key, joined);
        } else if (value.is_string()) {
            apply_key(cfg, key, value.get<std::string>());
        } else {
            apply_key(cfg, key, value.dump());
        }
    }
    return cfg;
}

inline nlohmann::json config_to_json(const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["n_elements"] = cfg.n_elements;
    j["n_users"] = cfg.n_users;
    j["total_power"] = cfg.total_power;
    j["target_common_rate"] = cfg.target_common_rate;
    j["snr_grid_db"] = cfg.snr_grid_db;
    j["dist_bs_ue"] = cfg.dist_bs_ue;
    j["dist_bs_ris"] = cfg.dist_bs_ris;
    j["dist_ris_ue"] = cfg.dist_ris_ue;
    j["pathloss_exponent"] = cfg.pathloss_exponent;
    j["power_tolerance"] = cfg.power_tolerance;
    j["element_threshold"] = cfg.element_threshold;
    j["n_trials"] = cfg.n_trials;
    j["seed"] = cfg.seed;
    return j;
}

/// %.6g formatting, locale-independent ("C" locale assumed, as for all CSV
/// output).
inline std::string format_g6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

/// Stages every file to a temporary in the target directory and renames only
/// after all writes succeeded, so a failure leaves no partial output behind.
inline void write_files_atomic(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
    std::vector<std::filesystem::path> staged;
    auto discard_staged = [&] {
        std::error_code ec;
        for (const auto& tmp : staged)
            std::filesystem::remove(tmp, ec);
    };

    for (const auto& [final_path, contents] : files) {
        const std::filesystem::path tmp = final_path.string() + ".tmp";
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (out)
            out << contents << std::flush;
        if (!out) {
            discard_staged();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("cannot write " + tmp.string());
        }
        staged.push_back(tmp);
    }

    for (std::size_t i = 0; i < files.size(); ++i) {
        std::error_code ec;
        std::filesystem::rename(staged[i], files[i].first, ec);
        if (ec) {
            discard_staged();
            throw IoError("cannot rename " + staged[i].string() + " to " +
                          files[i].first.string());
        }
    }
}

} // namespace detail

/// The reference scenario (all defaults).
inline ScenarioConfig default_config() { return ScenarioConfig{}; }

/// Parses `key = value` scenario text onto the defaults.
inline ScenarioConfig parse_config_text(const std::string& text) {
    const std::string trimmed = detail::trim(text);
    if (!trimmed.empty() && trimmed.front() == '{')
        return detail::config_from_json(nlohmann::json::parse(trimmed));

    ScenarioConfig cfg;
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string stripped = detail::trim(line.substr(0, line.find('#')));
        if (stripped.empty())
            continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + stripped + "'");
        detail::apply_key(cfg, detail::trim(stripped.substr(0, eq)),
                          detail::trim(stripped.substr(eq + 1)));
    }
    return cfg;
}

/// Loads and validates a scenario. Empty path yields the defaults; JSON input
/// (including a manifest.json) is detected by a leading '{'. Overrides are
/// applied after the file and before validation.
inline ScenarioConfig load_config(const std::string& path,
                                  const ConfigOverrides& overrides = {}) {
    ScenarioConfig cfg;
    if (!path.empty()) {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError("config: cannot read file '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        try {
            cfg = parse_config_text(buf.str());
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config: invalid JSON in '" + path + "': " + e.what());
        }
    }

    if (overrides.n_elements)
        cfg.n_elements = *overrides.n_elements;
    if (overrides.total_power)
        cfg.total_power = *overrides.total_power;
    if (overrides.target_common_rate)
        cfg.target_common_rate = *overrides.target_common_rate;
    if (overrides.pathloss_exponent)
        cfg.pathloss_exponent = *overrides.pathloss_exponent;
    if (overrides.power_tolerance)
        cfg.power_tolerance = *overrides.power_tolerance;
    if (overrides.element_threshold)
        cfg.element_threshold = *overrides.element_threshold;
    if (overrides.n_trials)
        cfg.n_trials = *overrides.n_trials;
    if (overrides.seed)
        cfg.seed = *overrides.seed;
    if (overrides.snr_min_db || overrides.snr_max_db || overrides.snr_step_db) {
        const double lo = overrides.snr_min_db.value_or(cfg.snr_grid_db.front());
        const double hi = overrides.snr_max_db.value_or(cfg.snr_grid_db.back());
        const double step = overrides.snr_step_db.value_or(5.0);
        if (!(step > 0.0) || hi < lo)
            throw ConfigError("snr_grid_db: need snr_min <= snr_max and snr_step > 0");
        cfg.snr_grid_db.clear();
        for (double s = lo; s <= hi + 1e-9; s += step)
            cfg.snr_grid_db.push_back(s);
    }

    validate(cfg);
    return cfg;
}

/// Renders the Fig. 2 data: mean sum rate and standard error per scheme.
inline std::string render_fig2_csv(const SweepResult& sweep_result) {
    std::string csv =
        "snr_db,sr_rsma,sr_ris_rsma,sr_oris_rsma,se_rsma,se_ris_rsma,se_oris_rsma\n";
    for (const SnrAggregate& row : sweep_result.per_snr) {
        csv += detail::format_g6(row.snr_db) + ',' +
               detail::format_g6(row.mean_sr_rsma) + ',' +
               detail::format_g6(row.mean_sr_ris_rsma) + ',' +
               detail::format_g6(row.mean_sr_oris_rsma) + ',' +
               detail::format_g6(row.se_sr_rsma) + ',' +
               detail::format_g6(row.se_sr_ris_rsma) + ',' +
               detail::format_g6(row.se_sr_oris_rsma) + '\n';
    }
    return csv;
}

/// Renders the Fig. 3 data: mean allocation among feasible trials and the
/// per-SNR infeasible count.
inline std::string render_fig3_csv(const SweepResult& sweep_result) {
    std::string csv = "snr_db,mean_n_good,mean_n_worst,mean_alpha_c,infeasible_count\n";
    for (const SnrAggregate& row : sweep_result.per_snr) {
        csv += detail::format_g6(row.snr_db) + ',' +
               detail::format_g6(row.mean_n_good) + ',' +
               detail::format_g6(row.mean_n_worst) + ',' +
               detail::format_g6(row.mean_alpha_c) + ',' +
               std::to_string(row.n_infeasible) + '\n';
    }
    return csv;
}

inline std::string render_manifest_json(const RunManifest& manifest) {
    nlohmann::json j;
    j["artifact_version"] = manifest.artifact_version;
    j["duration_seconds"] = manifest.duration_seconds;
    j["config"] = detail::config_to_json(manifest.config);
    nlohmann::json infeasible = nlohmann::json::array();
    for (const auto& [snr, count] : manifest.infeasible_per_snr)
        infeasible.push_back({{"snr_db", snr}, {"infeasible", count}});
    j["per_snr_infeasible"] = infeasible;
    return j.dump(2) + "\n";
}

/// Runs the sweep and writes fig2_sumrate.csv, fig3_allocation.csv and
/// manifest.json under out_dir. Files are staged to temporaries and renamed
/// only after every write succeeded, so a failed run leaves no partial
/// output. Returns the manifest.
inline RunManifest run_and_emit(const ScenarioConfig& cfg,
                                const std::filesystem::path& out_dir,
                                unsigned n_threads = 0) {
    validate(cfg);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir))
        throw IoError("cannot create output directory " + out_dir.string());

    const auto started = std::chrono::steady_clock::now();
    const SweepResult result = sweep(cfg, n_threads);
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - started;

    RunManifest manifest;
    manifest.config = cfg;
    manifest.artifact_version = std::string(version);
    manifest.duration_seconds = elapsed.count();
    for (const SnrAggregate& row : result.per_snr)
        manifest.infeasible_per_snr.emplace_back(row.snr_db, row.n_infeasible);

    detail::write_files_atomic(
        {{out_dir / "fig2_sumrate.csv", render_fig2_csv(result)},
         {out_dir / "fig3_allocation.csv", render_fig3_csv(result)},
         {out_dir / "manifest.json", render_manifest_json(manifest)}});
    return manifest;
}

} // namespace risrsma
