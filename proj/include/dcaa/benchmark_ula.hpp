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

#ifndef DCAA_BENCHMARK_ULA_HPP
#define DCAA_BENCHMARK_ULA_HPP

#include "dcaa/downlink.hpp"
#include "dcaa/report.hpp"
#include "dcaa/rng.hpp"

#include <armadillo>
#include <vector>

namespace dcaa
{
    /// Sector of an azimuth: 1 on (-pi, -pi/3], 2 on (-pi/3, pi/3], 3 on (pi/3, pi]. Wraps first.
    int sector_of(double phi);

    /// M x M DFT matrix with entries exp(-j 2 pi l m / M) / sqrt(M).
    arma::cx_mat dft_matrix(int elements);

    /// Analog beamformer built from selected DFT rows.
    struct DftCodebook
    {
        int elements = 0;
        std::vector<int> beams; // DFT row indices, 0-based, in pick order
        arma::cx_mat F;         // n_rf x M

        int n_rf() const { return int(beams.size()); }
    };

    DftCodebook make_codebook(int elements, const std::vector<int> &beams);

    /// Greedy DFT-beam selection for one sector.
    ///
    /// Candidates are DFT rows u_b; the objective is the MMSE sum rate of the sector's users with
    /// features u_b h_k, powers P_k and noise sigma2. `trace`, if given, receives the rate after each pick.
    DftCodebook select_dft_beams(const std::vector<arma::cx_vec> &channels, const std::vector<double> &powers,
                                 double sigma2, int n_rf, std::vector<double> *trace = nullptr);

    /// w_k = P_k C_k^{-1} F h_k with C_k = F (sum_{i != k} P_i h_i h_i^H + sigma2 I) F^H (not normalized).
    /// All channels belong to the same sector.
    arma::cx_vec mmse_ula_uplink(const arma::cx_mat &F, const std::vector<arma::cx_vec> &channels,
                                 const std::vector<double> &powers, double sigma2, int k);

    /// SINR_k = P_k |w^H F h_k|^2 / (sum_{i != k} P_i |w^H F h_i|^2 + sigma2 |F^H w|^2).
    double sinr_ula_uplink(const arma::cx_mat &F, const arma::cx_vec &w, const std::vector<arma::cx_vec> &channels,
                           const std::vector<double> &powers, double sigma2, int k);

    /// All K users of a trial, each seen by the ULA of its own sector.
    struct UlaScenario
    {
        std::vector<arma::cx_vec> channels; // h_k, length M, through the ULA of sector[k]
        std::vector<int> sectors;           // 1..3
        int elements = 1;
        double sigma2 = 1.0;

        void validate() const;
        int users() const { return int(channels.size()); }
        /// Users of sector s in increasing index order.
        std::vector<int> members(int sector) const;
    };

    /// Uplink: each sector gets one beam per resident user; interference stays inside a sector.
    /// `selection` lists (sector - 1) * M + beam for every chosen beam.
    LinkReport uplink_ula(const UlaScenario &scen, const std::vector<double> &transmit_snr);

    /// Dual link for the downlink: g_k = F_{sector(k)} conj(h_k), grouped by sector, noise sigma2.
    DualLink ula_dual_link(const UlaScenario &scen, const std::vector<DftCodebook> &codebooks);

    /// Downlink: beams chosen once on the dual uplink at uniform power, then the same alternation
    /// of duality precoders and waterfilling over the shared budget P_DL.
    LinkReport downlink_ula(const UlaScenario &scen, double total_power, const PowerIterationOptions &opts = {});

    /// Per-sector codebooks chosen on the dual uplink at per-user power p.
    std::vector<DftCodebook> ula_downlink_codebooks(const UlaScenario &scen, const std::vector<double> &p);

    /// SINR_k = P_k |h_k^T F^H w_k|^2 / (sum_{i != k, same sector} P_i |h_k^T F^H w_i|^2 + sigma2).
    double sinr_ula_downlink(const UlaScenario &scen, const std::vector<DftCodebook> &codebooks,
                             const std::vector<arma::cx_vec> &precoders, const std::vector<double> &p, int k);

    /// Symbol-level simulation of y_k = sum_{i in sector} h_k^T F^H w_i s_i + z_k.
    std::vector<double> simulate_ula_downlink_symbols(const UlaScenario &scen,
                                                      const std::vector<DftCodebook> &codebooks,
                                                      const std::vector<arma::cx_vec> &precoders,
                                                      const std::vector<double> &p, int n_symbols, RngStream &rng);
}

#endif
