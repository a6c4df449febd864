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

#include "dcaa/experiment.hpp"
#include "dcaa/angles.hpp"
#include "dcaa/benchmark_ula.hpp"
#include "dcaa/cost_model.hpp"
#include "dcaa/report.hpp"
#include "dcaa/uplink.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

namespace dcaa
{
    namespace fs = std::filesystem;

    void ExperimentConfig::validate() const
    {
        if (scenario != "normal" && scenario != "dense" && scenario != "custom")
            throw std::invalid_argument("config: scenario must be normal, dense or custom.");
        if (elements < 2 || users < 1 || n_rf < 1)
            throw std::invalid_argument("config: need elements >= 2, users >= 1 and n_rf >= 1.");
        if (users > n_rf)
            throw std::invalid_argument("config: users must not exceed n_rf.");
        if (n_rf > 2 * suca_count(elements))
            throw std::invalid_argument("config: n_rf exceeds the number of sub-array ports.");
        if (n_trials < 1)
            throw std::invalid_argument("config: n_trials must be >= 1.");
        if (snr_db.empty())
            throw std::invalid_argument("config: snr_db must not be empty.");
        if (direction != "uplink" && direction != "downlink" && direction != "both")
            throw std::invalid_argument("config: direction must be uplink, downlink or both.");
        if (architecture != "dcaa" && architecture != "ula" && architecture != "both")
            throw std::invalid_argument("config: architecture must be dcaa, ula or both.");
        if (t_max < 1 || !(eps_th > 0.0))
            throw std::invalid_argument("config: need t_max >= 1 and eps_th > 0.");
        waterfill_mode();
        channel.validate();
        if (threads < 0)
            throw std::invalid_argument("config: threads must be >= 0.");
    }

    WaterfillMode ExperimentConfig::waterfill_mode() const
    {
        if (waterfill == "active_set")
            return WaterfillMode::active_set;
        if (waterfill == "rescale")
            return WaterfillMode::rescale;
        throw std::invalid_argument("config: waterfill must be active_set or rescale.");
    }

    ExperimentConfig preset(const std::string &scenario)
    {
        ExperimentConfig cfg;
        cfg.scenario = scenario;
        if (scenario == "normal")
        {
            cfg.elements = 64;
            cfg.users = cfg.n_rf = 10;
        }
        else if (scenario == "dense" || scenario == "custom")
        {
            cfg.elements = 128;
            cfg.users = cfg.n_rf = 30;
        }
        else
            throw std::invalid_argument("config: unknown scenario '" + scenario + "'.");
        return cfg;
    }

    namespace
    {
        void reject_unknown(const nlohmann::json &j, const std::set<std::string> &allowed, const std::string &where)
        {
            if (!j.is_object())
                throw std::invalid_argument("config: '" + where + "' must be an object.");
            for (const auto &item : j.items())
                if (!allowed.count(item.key()))
                    throw std::invalid_argument("config: unknown key '" + where + item.key() + "'.");
        }

        template <typename T>
        void read(const nlohmann::json &j, const char *key, T &dst)
        {
            if (!j.contains(key))
                return;
            try
            {
                dst = j.at(key).get<T>();
            }
            catch (const nlohmann::json::exception &)
            {
                throw std::invalid_argument(std::string("config: key '") + key + "' has the wrong type.");
            }
        }
    }

    ExperimentConfig config_from_json(const nlohmann::json &j)
    {
        reject_unknown(j,
                       {"scenario", "elements", "users", "n_rf", "carrier_hz", "snr_db", "n_trials", "seed",
                        "direction", "architecture", "channel", "t_max", "eps_th", "update_selection", "waterfill",
                        "pattern", "converge_snr_db", "prices", "threads"},
                       "");
        std::string scenario = "dense";
        read(j, "scenario", scenario);
        ExperimentConfig cfg = preset(scenario);

        if (scenario != "custom")
            for (const char *key : {"elements", "users", "n_rf"})
                if (j.contains(key))
                    throw std::invalid_argument(std::string("config: '") + key + "' is fixed by the " + scenario +
                                                " preset; use scenario 'custom'.");
        read(j, "elements", cfg.elements);
        read(j, "users", cfg.users);
        read(j, "n_rf", cfg.n_rf);
        read(j, "carrier_hz", cfg.channel.carrier_hz);
        read(j, "snr_db", cfg.snr_db);
        read(j, "n_trials", cfg.n_trials);
        read(j, "seed", cfg.seed);
        read(j, "direction", cfg.direction);
        read(j, "architecture", cfg.architecture);
        read(j, "t_max", cfg.t_max);
        read(j, "eps_th", cfg.eps_th);
        read(j, "update_selection", cfg.update_selection);
        read(j, "waterfill", cfg.waterfill);
        read(j, "converge_snr_db", cfg.converge_snr_db);
        read(j, "threads", cfg.threads);
        if (j.contains("channel"))
        {
            const auto &c = j.at("channel");
            reject_unknown(c, {"c_asa_deg", "c_eas_deg", "clusters", "rays_per_cluster"}, "channel.");
            read(c, "c_asa_deg", cfg.channel.c_asa_deg);
            read(c, "c_eas_deg", cfg.channel.c_eas_deg);
            read(c, "clusters", cfg.channel.clusters);
            read(c, "rays_per_cluster", cfg.channel.rays_per_cluster);
        }
        if (j.contains("pattern"))
        {
            const auto &p = j.at("pattern");
            reject_unknown(p, {"step_rad", "theta_rad", "orientation_rad"}, "pattern.");
            read(p, "step_rad", cfg.pattern.step_rad);
            read(p, "theta_rad", cfg.pattern.theta_rad);
            read(p, "orientation_rad", cfg.pattern.orientation_rad);
        }
        if (j.contains("prices"))
            cfg.prices = j.at("prices");
        cfg.validate();
        return cfg;
    }

    ExperimentConfig load_config(const fs::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open config file " + path.string());
        nlohmann::json j;
        try
        {
            in >> j;
        }
        catch (const nlohmann::json::parse_error &e)
        {
            throw std::runtime_error("config file " + path.string() + ": " + e.what());
        }
        return config_from_json(j);
    }

    nlohmann::json config_to_json(const ExperimentConfig &cfg)
    {
        nlohmann::json j;
        j["scenario"] = cfg.scenario;
        j["elements"] = cfg.elements;
        j["users"] = cfg.users;
        j["n_rf"] = cfg.n_rf;
        j["carrier_hz"] = cfg.channel.carrier_hz;
        j["snr_db"] = cfg.snr_db;
        j["n_trials"] = cfg.n_trials;
        j["seed"] = cfg.seed;
        j["direction"] = cfg.direction;
        j["architecture"] = cfg.architecture;
        j["channel"] = {{"c_asa_deg", cfg.channel.c_asa_deg},
                        {"c_eas_deg", cfg.channel.c_eas_deg},
                        {"clusters", cfg.channel.clusters},
                        {"rays_per_cluster", cfg.channel.rays_per_cluster}};
        j["t_max"] = cfg.t_max;
        j["eps_th"] = cfg.eps_th;
        j["update_selection"] = cfg.update_selection;
        j["waterfill"] = cfg.waterfill;
        j["pattern"] = {{"step_rad", cfg.pattern.step_rad},
                        {"theta_rad", cfg.pattern.theta_rad},
                        {"orientation_rad", cfg.pattern.orientation_rad}};
        j["converge_snr_db"] = cfg.converge_snr_db;
        if (!cfg.prices.is_null())
            j["prices"] = cfg.prices;
        return j; // threads is an execution detail and does not change results
    }

    std::uint64_t config_hash(const ExperimentConfig &cfg)
    {
        return fnv1a(config_to_json(cfg).dump());
    }

    TrialChannels draw_trial(const ExperimentConfig &cfg, const CylinderArray &cyl, int trial)
    {
        TrialChannels tc;
        const ElementPattern &pat = cyl.response.pattern;
        std::uint64_t h = fnv1a({});
        for (int k = 0; k < cfg.users; ++k)
        {
            PathSet ps = generate_user_channel(cfg.seed, stream_id_for(std::uint64_t(trial), std::uint64_t(k)), cfg.channel);
            const std::uint64_t ph = content_hash(ps);
            h = fnv1a_append(h, &ph, sizeof(ph));
            const int sector = sector_of(ps.los.phi);
            tc.sectors.push_back(sector);
            if (cfg.architecture != "ula")
                tc.dcaa.push_back(effective_channel_dcaa(cyl, ps));
            if (cfg.architecture != "dcaa")
                tc.ula.push_back(effective_channel_ula(pat, cfg.elements, sector, ps));
            tc.paths.push_back(std::move(ps));
        }
        tc.hash = h;
        return tc;
    }

    std::vector<ResultRow> run_trial(const ExperimentConfig &cfg, const CylinderArray &cyl, int trial)
    {
        using clock = std::chrono::steady_clock;
        const TrialChannels tc = draw_trial(cfg, cyl, trial);
        const bool up = cfg.direction != "downlink";
        const bool down = cfg.direction != "uplink";
        const bool dcaa = cfg.architecture != "ula";
        const bool ula = cfg.architecture != "dcaa";
        const double sigma2 = 1.0;

        std::vector<ResultRow> rows;
        auto emit = [&](const char *arch, const char *dir, double snr, const LinkReport &rep, clock::time_point t0) {
            ResultRow r;
            r.trial = trial;
            r.architecture = arch;
            r.direction = dir;
            r.snr_db = snr;
            r.sum_rate = rep.sum_rate;
            r.per_user_sinr = rep.per_user_sinr;
            r.iterations = rep.iterations;
            r.converged = rep.converged;
            r.wall_time = std::chrono::duration<double>(clock::now() - t0).count();
            r.channel_hash = tc.hash;
            rows.push_back(std::move(r));
        };

        UlaScenario us;
        us.channels = tc.ula;
        us.sectors = tc.sectors;
        us.elements = cfg.elements;
        us.sigma2 = sigma2;

        for (double snr : cfg.snr_db)
        {
            const double lin = std::pow(10.0, snr / 10.0);
            if (up && dcaa)
            {
                const auto t0 = clock::now();
                UplinkScenario s;
                s.channels = tc.dcaa;
                s.transmit_snr.assign(std::size_t(cfg.users), lin);
                s.elements = cfg.elements;
                s.sigma2 = sigma2;
                emit("dcaa", "uplink", snr, greedy_select(s, cfg.n_rf), t0);
            }
            if (up && ula)
            {
                const auto t0 = clock::now();
                emit("ula", "uplink", snr, uplink_ula(us, std::vector<double>(std::size_t(cfg.users), lin)), t0);
            }
            const double total = double(cfg.users) * lin * sigma2;
            if (down && dcaa)
            {
                const auto t0 = clock::now();
                DownlinkScenario s;
                s.channels = tc.dcaa;
                s.total_power = total;
                s.sigma2 = sigma2;
                s.elements = cfg.elements;
                s.t_max = cfg.t_max;
                s.eps_th = cfg.eps_th;
                DownlinkOptions o;
                o.mode = cfg.waterfill_mode();
                o.update_selection = cfg.update_selection;
                emit("dcaa", "downlink", snr, optimize_downlink(s, cfg.n_rf, o), t0);
            }
            if (down && ula)
            {
                const auto t0 = clock::now();
                PowerIterationOptions o;
                o.t_max = cfg.t_max;
                o.eps_th = cfg.eps_th;
                o.mode = cfg.waterfill_mode();
                emit("ula", "downlink", snr, downlink_ula(us, total, o), t0);
            }
        }
        return rows;
    }

    std::vector<ResultRow> run_sum_rate_sweep(const ExperimentConfig &cfg, std::ostream &log)
    {
        cfg.validate();
        const CylinderArray cyl = design_cylinder(cfg.elements, cfg.channel.carrier_hz);
        unsigned workers = cfg.threads > 0 ? unsigned(cfg.threads) : std::max(1u, std::thread::hardware_concurrency());
        workers = std::min<unsigned>(workers, unsigned(cfg.n_trials));

        std::vector<std::vector<ResultRow>> per_trial(std::size_t(cfg.n_trials));
        std::atomic<int> next{0};
        std::mutex log_mutex;
        auto work = [&]() {
            for (int t = next++; t < cfg.n_trials; t = next++)
            {
                try
                {
                    per_trial[(size_t)t] = run_trial(cfg, cyl, t);
                }
                catch (const std::exception &e)
                {
                    std::lock_guard<std::mutex> lock(log_mutex);
                    log << "trial " << t << " failed and was skipped: " << e.what() << "\n";
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned i = 1; i < workers; ++i)
            pool.emplace_back(work);
        work();
        for (auto &th : pool)
            th.join();

        std::vector<ResultRow> rows;
        for (auto &v : per_trial)
            for (auto &r : v)
                rows.push_back(std::move(r));
        std::stable_sort(rows.begin(), rows.end(), [](const ResultRow &a, const ResultRow &b) {
            if (a.trial != b.trial)
                return a.trial < b.trial;
            if (a.architecture != b.architecture)
                return a.architecture < b.architecture;
            if (a.direction != b.direction)
                return a.direction < b.direction;
            return a.snr_db < b.snr_db;
        });
        return rows;
    }

    void write_results_csv(std::ostream &os, const std::vector<ResultRow> &rows)
    {
        os << "trial,architecture,direction,snr_db,sum_rate_bps_hz,per_user_sinr,iterations,converged,channel_hash\n";
        for (const auto &r : rows)
        {
            std::string sinr;
            for (std::size_t i = 0; i < r.per_user_sinr.size(); ++i)
                sinr += (i ? ";" : "") + format_number(r.per_user_sinr[i]);
            os << r.trial << ',' << r.architecture << ',' << r.direction << ',' << format_number(r.snr_db) << ','
               << format_number(r.sum_rate) << ',' << sinr << ',' << r.iterations << ',' << (r.converged ? 1 : 0)
               << ',' << hex64(r.channel_hash) << '\n';
        }
    }

    void write_timing_csv(std::ostream &os, const std::vector<ResultRow> &rows)
    {
        os << "trial,architecture,direction,snr_db,wall_time_s\n";
        for (const auto &r : rows)
            os << r.trial << ',' << r.architecture << ',' << r.direction << ',' << format_number(r.snr_db) << ','
               << format_number(r.wall_time) << '\n';
    }

    namespace
    {
        std::ofstream open_out(const fs::path &path)
        {
            std::ofstream os(path, std::ios::binary);
            if (!os)
                throw std::runtime_error("cannot write " + path.string());
            return os;
        }

        void ensure_dir(const fs::path &dir)
        {
            std::error_code ec;
            fs::create_directories(dir, ec);
            if (ec)
                throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
        }
    }

    void write_manifest(const fs::path &out_dir, const ExperimentConfig &cfg, const std::string &command)
    {
        nlohmann::json m;
        m["tool"] = "dcaa_sim";
        m["version"] = kVersion;
        m["command"] = command;
        m["seed"] = cfg.seed;
        m["config_hash"] = hex64(config_hash(cfg));
        m["config"] = config_to_json(cfg);
        auto os = open_out(out_dir / "run-manifest.json");
        os << m.dump(2) << '\n';
    }

    void sweep_command(const ExperimentConfig &cfg, const fs::path &out_dir, std::ostream &log)
    {
        ensure_dir(out_dir);
        const auto rows = run_sum_rate_sweep(cfg, log);
        {
            auto os = open_out(out_dir / "results.csv");
            write_results_csv(os, rows);
        }
        {
            auto os = open_out(out_dir / "timing.csv");
            write_timing_csv(os, rows);
        }
        write_manifest(out_dir, cfg, "sweep");
    }

    void pattern_command(const ExperimentConfig &cfg, const fs::path &out_dir)
    {
        cfg.validate();
        const PatternGrid &g = cfg.pattern;
        if (!(g.step_rad > 0.0) || !(g.step_rad <= kTwoPi))
            throw std::invalid_argument("pattern: empty grid (step_rad must lie in (0, 2 pi]).");
        if (!(g.theta_rad >= 0.0 && g.theta_rad <= kPi))
            throw std::invalid_argument("pattern: theta_rad must lie in [0, pi].");
        ensure_dir(out_dir);

        const CylinderArray cyl = design_cylinder(cfg.elements, cfg.channel.carrier_hz);
        const SubArray sub = make_subarray(cyl.config, g.orientation_rad);
        const long n = long(std::floor(kTwoPi / g.step_rad));
        std::vector<PatternSample> single, envelope;
        single.reserve((size_t)n);
        envelope.reserve((size_t)n);
        for (long i = 0; i < n; ++i)
        {
            const double phi = -kPi + double(i) * g.step_rad;
            single.push_back({phi, g.theta_rad, array_factor(sub, phi, g.theta_rad, cyl.response)});
            const arma::cx_vec r = subarray_outputs(cyl, phi, g.theta_rad);
            envelope.push_back({phi, g.theta_rad, {arma::max(arma::abs(r)), 0.0}});
        }
        {
            auto os = open_out(out_dir / "subarray_pattern.csv");
            write_pattern_csv(os, single);
        }
        {
            auto os = open_out(out_dir / "cylinder_pattern.csv");
            write_pattern_csv(os, envelope);
        }
        {
            auto os = open_out(out_dir / "roster.json");
            os << roster_json(cyl).dump(2) << '\n';
        }
        write_manifest(out_dir, cfg, "pattern");
    }

    void write_convergence_csv(std::ostream &os, const LinkReport &report)
    {
        os << "iter,sum_rate_bps_hz,p_change_l1\n";
        for (std::size_t i = 0; i < report.trace.size(); ++i)
            os << (i + 1) << ',' << format_number(report.trace[i]) << ',' << format_number(report.p_change.at(i))
               << '\n';
    }

    void converge_command(const ExperimentConfig &cfg, const fs::path &out_dir)
    {
        cfg.validate();
        ensure_dir(out_dir);
        ExperimentConfig c = cfg;
        c.architecture = "both";
        const CylinderArray cyl = design_cylinder(c.elements, c.channel.carrier_hz);
        const TrialChannels tc = draw_trial(c, cyl, 0);
        const double total = double(c.users) * std::pow(10.0, c.converge_snr_db / 10.0);

        DownlinkScenario s;
        s.channels = tc.dcaa;
        s.total_power = total;
        s.elements = c.elements;
        s.t_max = c.t_max;
        s.eps_th = c.eps_th;
        DownlinkOptions o;
        o.mode = c.waterfill_mode();
        o.update_selection = c.update_selection;
        {
            auto os = open_out(out_dir / "convergence_dcaa.csv");
            write_convergence_csv(os, optimize_downlink(s, c.n_rf, o));
        }

        UlaScenario us;
        us.channels = tc.ula;
        us.sectors = tc.sectors;
        us.elements = c.elements;
        PowerIterationOptions po;
        po.t_max = c.t_max;
        po.eps_th = c.eps_th;
        po.mode = c.waterfill_mode();
        {
            auto os = open_out(out_dir / "convergence_ula.csv");
            write_convergence_csv(os, downlink_ula(us, total, po));
        }
        write_manifest(out_dir, cfg, "converge");
    }

    void cost_command(const ExperimentConfig &cfg, const fs::path &out_dir)
    {
        cfg.validate();
        if (cfg.prices.is_null())
            throw std::invalid_argument("cost prices: missing field 'prices'.");
        const CostInputs in = cost_inputs_from_json(cfg.prices, cfg.elements, suca_count(cfg.elements), cfg.n_rf);
        ensure_dir(out_dir);
        {
            auto os = open_out(out_dir / "cost.json");
            os << cost_report(in).dump(2) << '\n';
        }
        write_manifest(out_dir, cfg, "cost");
    }
}
