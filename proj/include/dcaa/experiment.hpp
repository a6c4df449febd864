// SPDX-License-Identifier: Apache-2.0
//
// dcaa-sim: link-level simulator for cylinder directly-connected antenna arrays
// Copyright (C) 2026 The dcaa-sim authors
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

#ifndef DCAA_EXPERIMENT_HPP
#define DCAA_EXPERIMENT_HPP

#include "dcaa/channel.hpp"
#include "dcaa/cylinder.hpp"
#include "dcaa/downlink.hpp"

#include "json.hpp"
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dcaa
{
    inline constexpr const char *kVersion = "0.1.0";

    struct PatternGrid
    {
        double step_rad = 0.001;
        double theta_rad = 1.5707963267948966;
        double orientation_rad = 0.0; // orientation of the exported single sub-array
    };

    struct ExperimentConfig
    {
        std::string scenario = "dense"; // normal | dense | custom
        int elements = 128;
        int users = 30;
        int n_rf = 30;
        std::vector<double> snr_db = {-10, -5, 0, 5, 10, 15, 20};
        int n_trials = 100;
        std::uint64_t seed = 1;
        std::string direction = "both";    // uplink | downlink | both
        std::string architecture = "both"; // dcaa | ula | both
        ChannelParams channel{};
        int t_max = 10;
        double eps_th = 0.01;
        bool update_selection = false;
        std::string waterfill = "active_set"; // active_set | rescale
        PatternGrid pattern{};
        double converge_snr_db = 9.0;
        nlohmann::json prices; // {c_an, c_ps, c_sw}; only needed for the cost report
        int threads = 0;       // 0: hardware concurrency

        void validate() const;
        WaterfillMode waterfill_mode() const;
    };

    /// Preset: normal (M=64, K=N_RF=10) or dense (M=128, K=N_RF=30), f_c = 47.2 GHz.
    ExperimentConfig preset(const std::string &scenario);

    /// Parses a config file body. Unknown keys are rejected; preset sizes cannot be overridden.
    ExperimentConfig config_from_json(const nlohmann::json &j);
    ExperimentConfig load_config(const std::filesystem::path &path);
    nlohmann::json config_to_json(const ExperimentConfig &cfg);
    std::uint64_t config_hash(const ExperimentConfig &cfg);

    /// Channels of one trial, shared by both architectures.
    struct TrialChannels
    {
        std::vector<PathSet> paths;
        std::vector<arma::cx_vec> dcaa; // 2N-vectors
        std::vector<arma::cx_vec> ula;  // M-vectors through each user's sector array
        std::vector<int> sectors;
        std::uint64_t hash = 0; // combined content hash of all PathSets
    };

    TrialChannels draw_trial(const ExperimentConfig &cfg, const CylinderArray &cyl, int trial);

    struct ResultRow
    {
        int trial = 0;
        std::string architecture;
        std::string direction;
        double snr_db = 0.0;
        double sum_rate = 0.0;
        std::vector<double> per_user_sinr;
        int iterations = 0;
        bool converged = true;
        double wall_time = 0.0; // seconds; written to the timing file only
        std::uint64_t channel_hash = 0;
    };

    /// All rows of one trial (every architecture, direction and SNR requested).
    std::vector<ResultRow> run_trial(const ExperimentConfig &cfg, const CylinderArray &cyl, int trial);

    /// Trials on a worker pool; failed trials are logged to `log` and skipped. Rows are sorted by
    /// (trial, architecture, direction, snr).
    std::vector<ResultRow> run_sum_rate_sweep(const ExperimentConfig &cfg, std::ostream &log);

    void write_results_csv(std::ostream &os, const std::vector<ResultRow> &rows);
    void write_timing_csv(std::ostream &os, const std::vector<ResultRow> &rows);

    /// Writes results.csv, timing.csv and run-manifest.json into out_dir.
    void sweep_command(const ExperimentConfig &cfg, const std::filesystem::path &out_dir, std::ostream &log);

    /// Writes subarray_pattern.csv, cylinder_pattern.csv, roster.json and run-manifest.json.
    void pattern_command(const ExperimentConfig &cfg, const std::filesystem::path &out_dir);

    /// Downlink traces of trial 0 at converge_snr_db: convergence_dcaa.csv and convergence_ula.csv.
    void converge_command(const ExperimentConfig &cfg, const std::filesystem::path &out_dir);

    /// cost.json from the configured prices and the preset dimensions.
    void cost_command(const ExperimentConfig &cfg, const std::filesystem::path &out_dir);

    /// iter,sum_rate_bps_hz,p_change_l1
    void write_convergence_csv(std::ostream &os, const LinkReport &report);

    void write_manifest(const std::filesystem::path &out_dir, const ExperimentConfig &cfg, const std::string &command);
}

#endif
