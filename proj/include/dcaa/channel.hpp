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

#ifndef DCAA_CHANNEL_HPP
#define DCAA_CHANNEL_HPP

#include "dcaa/cylinder.hpp"
#include "dcaa/pattern.hpp"
#include "dcaa/rng.hpp"

#include "json.hpp"
#include <complex>
#include <cstdint>
#include <vector>

namespace dcaa
{
    /// Cluster/ray model parameters (indoor-office NLoS). Angles in degrees as in the tables.
    ///
    /// The intra-cluster spreads c_ASA and c_EAS are not part of the published parameter table;
    /// the defaults are representative indoor-office values and can be overridden.
    struct ChannelParams
    {
        double carrier_hz = 47.2e9;
        int clusters = 19;          // N_c
        int rays_per_cluster = 20;  // N_r
        double delay_scaling = 3.0; // r_tau
        double c_phi = 1.273;
        double c_theta = 1.184;
        double c_asa_deg = 8.53;
        double c_eas_deg = 9.0;

        void validate() const;
    };

    /// Mean and standard deviation of lg(DS / 1 s), lg(ASA / 1 deg) and lg(EAS / 1 deg).
    /// Frequencies enter as log10(1 + f_c / 1 GHz).
    struct LargeScaleStats
    {
        double lgds_mu, lgds_sigma;
        double lgasa_mu, lgasa_sigma;
        double lgeas_mu, lgeas_sigma;
    };
    LargeScaleStats large_scale_stats(double carrier_hz);

    /// One draw of the large-scale parameters.
    struct LargeScale
    {
        double delay_spread = 0.0;   // seconds
        double azimuth_spread = 0.0; // degrees
        double zenith_spread = 0.0;  // degrees
    };

    LargeScale draw_large_scale(RngStream &rng, const ChannelParams &params);

    struct ClusterSet
    {
        double delay_spread = 0.0;    // DS, seconds
        double azimuth_spread = 0.0;  // ASA, degrees
        double zenith_spread = 0.0;   // EAS, degrees
        std::vector<double> delays;   // tau, ascending, delays[0] == 0
        std::vector<double> powers;   // P, sums to 1
        std::vector<double> azimuths; // phi_nc, radians, wrapped
        std::vector<double> zeniths;  // theta_nc, radians, clipped to [0, pi]
    };

    struct Ray
    {
        double phi = 0.0;
        double theta = 0.0;
        std::complex<double> alpha;
    };

    struct UserLos
    {
        double phi = 0.0;
        double theta = 0.0;
    };

    struct PathSet
    {
        UserLos los;
        std::vector<Ray> rays;

        double total_power() const;
    };

    /// phi ~ U(-pi, pi), theta = pi/2.
    UserLos draw_user_los(RngStream &rng);

    /// Raw (unsorted, unshifted) cluster delays tau' = -r_tau * DS * ln(X), X ~ U(0, 1).
    std::vector<double> raw_cluster_delays(RngStream &rng, const ChannelParams &params, double delay_spread);

    ClusterSet generate_clusters(RngStream &rng, const ChannelParams &params, const UserLos &los);

    /// Same as above with the large-scale parameters supplied by the caller.
    ClusterSet generate_clusters(RngStream &rng, const ChannelParams &params, const UserLos &los,
                                 const LargeScale &large_scale);

    PathSet generate_rays(RngStream &rng, const ChannelParams &params, const ClusterSet &clusters, const UserLos &los);

    /// Full draw for one user on its own stream: LoS, clusters, rays.
    PathSet generate_user_channel(std::uint64_t seed, std::uint64_t stream_id, const ChannelParams &params);

    /// h = sum_l alpha_l * r(phi_l, theta_l): effective 2N-vector seen through the cylinder.
    arma::cx_vec effective_channel_dcaa(const CylinderArray &cyl, const PathSet &paths);

    /// Half-wavelength ULA steering vector serving `sector` (1, 2 or 3) for one arrival.
    /// The element gain is evaluated at relative azimuth xi and elevation theta - pi/2.
    arma::cx_vec ula_response(const ElementPattern &pattern, int elements, int sector, double phi, double theta);

    /// h = sum_l alpha_l * a_ULA(sector, phi_l).
    arma::cx_vec effective_channel_ula(const ElementPattern &pattern, int elements, int sector, const PathSet &paths);

    /// Ray dump: [{phi_rad, theta_rad, alpha_re, alpha_im}, ...].
    nlohmann::json paths_to_json(const PathSet &paths);
    PathSet paths_from_json(const nlohmann::json &j);

    /// FNV-1a over the exact bytes of every ray; equal hashes mean bit-identical path sets.
    std::uint64_t content_hash(const PathSet &paths);
}

#endif
