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

#include "dcaa/channel.hpp"
#include "dcaa/angles.hpp"
#include "dcaa/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dcaa
{
    void ChannelParams::validate() const
    {
        if (!(carrier_hz > 0.0))
            throw std::invalid_argument("ChannelParams: carrier frequency must be positive.");
        if (clusters < 1 || rays_per_cluster < 1)
            throw std::invalid_argument("ChannelParams: need at least one cluster and one ray per cluster.");
        if (!(delay_scaling > 1.0))
            throw std::invalid_argument("ChannelParams: delay scaling must exceed 1.");
        if (!(c_phi > 0.0) || !(c_theta > 0.0))
            throw std::invalid_argument("ChannelParams: angle scaling constants must be positive.");
        if (!(c_asa_deg >= 0.0) || !(c_eas_deg >= 0.0))
            throw std::invalid_argument("ChannelParams: intra-cluster spreads must be nonnegative.");
    }

    LargeScaleStats large_scale_stats(double carrier_hz)
    {
        const double lf = std::log10(1.0 + carrier_hz / 1e9);
        LargeScaleStats s;
        s.lgds_mu = -7.173 - 0.28 * lf;
        s.lgds_sigma = 0.10 * lf + 0.055;
        s.lgasa_mu = 1.863 - 0.11 * lf;
        s.lgasa_sigma = 0.12 * lf + 0.059;
        s.lgeas_mu = 1.387 - 0.15 * lf;
        s.lgeas_sigma = -0.09 * lf + 0.746;
        return s;
    }

    double PathSet::total_power() const
    {
        double s = 0.0;
        for (const Ray &r : rays)
            s += std::norm(r.alpha);
        return s;
    }

    UserLos draw_user_los(RngStream &rng)
    {
        UserLos los;
        los.phi = rng.uniform(-kPi, kPi);
        los.theta = 0.5 * kPi;
        return los;
    }

    LargeScale draw_large_scale(RngStream &rng, const ChannelParams &params)
    {
        const LargeScaleStats st = large_scale_stats(params.carrier_hz);
        LargeScale ls;
        ls.delay_spread = std::pow(10.0, rng.normal(st.lgds_mu, st.lgds_sigma));
        ls.azimuth_spread = std::pow(10.0, rng.normal(st.lgasa_mu, st.lgasa_sigma));
        ls.zenith_spread = std::pow(10.0, rng.normal(st.lgeas_mu, st.lgeas_sigma));
        return ls;
    }

    std::vector<double> raw_cluster_delays(RngStream &rng, const ChannelParams &params, double delay_spread)
    {
        std::vector<double> tau(std::size_t(params.clusters));
        for (double &t : tau)
            t = -params.delay_scaling * delay_spread * std::log(rng.uniform());
        return tau;
    }

    ClusterSet generate_clusters(RngStream &rng, const ChannelParams &params, const UserLos &los)
    {
        params.validate();
        const LargeScale ls = draw_large_scale(rng, params);
        return generate_clusters(rng, params, los, ls);
    }

    ClusterSet generate_clusters(RngStream &rng, const ChannelParams &params, const UserLos &los,
                                 const LargeScale &large_scale)
    {
        params.validate();
        const std::size_t nc = std::size_t(params.clusters);
        ClusterSet cs;
        cs.delay_spread = large_scale.delay_spread;
        cs.azimuth_spread = large_scale.azimuth_spread;
        cs.zenith_spread = large_scale.zenith_spread;

        cs.delays = raw_cluster_delays(rng, params, cs.delay_spread);
        const double tmin = *std::min_element(cs.delays.begin(), cs.delays.end());
        for (double &t : cs.delays)
            t -= tmin;
        std::sort(cs.delays.begin(), cs.delays.end());

        cs.powers.resize(nc);
        const double r = params.delay_scaling;
        for (std::size_t n = 0; n < nc; ++n)
        {
            const double shadow = rng.normal(0.0, 3.0);
            cs.powers[n] = std::exp(-cs.delays[n] * (r - 1.0) / (r * cs.delay_spread)) * std::pow(10.0, -shadow / 10.0);
        }
        double total = 0.0;
        for (double p : cs.powers)
            total += p;
        for (double &p : cs.powers)
            p /= total;
        const double pmax = *std::max_element(cs.powers.begin(), cs.powers.end());

        cs.azimuths.resize(nc);
        cs.zeniths.resize(nc);
        for (std::size_t n = 0; n < nc; ++n)
        {
            const double lr = std::log(cs.powers[n] / pmax); // <= 0

            const double az_sign = rng.sign();
            const double az_jitter = rng.normal(0.0, cs.azimuth_spread / 7.0);
            const double az_base = 2.0 * (cs.azimuth_spread / 1.4) * std::sqrt(-lr) / params.c_phi;
            cs.azimuths[n] = wrap_angle(deg_to_rad(az_sign * az_base + az_jitter) + los.phi);

            const double el_sign = rng.sign();
            const double el_jitter = rng.normal(0.0, cs.zenith_spread / 7.0);
            const double el_base = -cs.zenith_spread * lr / params.c_theta;
            cs.zeniths[n] = std::clamp(deg_to_rad(el_sign * el_base + el_jitter) + los.theta, 0.0, kPi);
        }
        return cs;
    }

    PathSet generate_rays(RngStream &rng, const ChannelParams &params, const ClusterSet &clusters, const UserLos &los)
    {
        params.validate();
        const std::size_t nc = clusters.powers.size();
        const std::size_t nr = std::size_t(params.rays_per_cluster);
        if (nc == 0 || clusters.azimuths.size() != nc || clusters.zeniths.size() != nc)
            throw std::invalid_argument("generate_rays: malformed cluster set.");

        PathSet ps;
        ps.los = los;
        ps.rays.reserve(nc * nr);
        const double c_asa = deg_to_rad(params.c_asa_deg);
        const double c_eas = deg_to_rad(params.c_eas_deg);
        std::vector<double> w(nr);
        for (std::size_t n = 0; n < nc; ++n)
        {
            double wsum = 0.0;
            for (std::size_t i = 0; i < nr; ++i)
            {
                const double a_asa = rng.uniform(-2.0, 2.0);
                const double a_eas = rng.uniform(-2.0, 2.0);
                w[i] = std::exp(-std::sqrt(2.0) * a_asa / 11.0) * std::exp(-std::sqrt(2.0) * a_eas / 9.0);
                wsum += w[i];
            }
            for (std::size_t i = 0; i < nr; ++i)
            {
                Ray ray;
                ray.phi = wrap_angle(clusters.azimuths[n] + c_asa * rng.uniform(-2.0, 2.0));
                ray.theta = std::clamp(clusters.zeniths[n] + c_eas * rng.uniform(-2.0, 2.0), 0.0, kPi);
                const double power = clusters.powers[n] * w[i] / wsum;
                ray.alpha = std::polar(std::sqrt(power), rng.uniform(-kPi, kPi));
                ps.rays.push_back(ray);
            }
        }
        return ps;
    }

    PathSet generate_user_channel(std::uint64_t seed, std::uint64_t stream_id, const ChannelParams &params)
    {
        RngStream rng(seed, stream_id);
        const UserLos los = draw_user_los(rng);
        const ClusterSet cs = generate_clusters(rng, params, los);
        return generate_rays(rng, params, cs, los);
    }

    arma::cx_vec effective_channel_dcaa(const CylinderArray &cyl, const PathSet &paths)
    {
        arma::cx_vec h(std::size_t(cyl.n_subarrays()), arma::fill::zeros);
        for (const Ray &r : paths.rays)
            h += r.alpha * subarray_outputs(cyl, r.phi, r.theta);
        return h;
    }

    arma::cx_vec ula_response(const ElementPattern &pattern, int elements, int sector, double phi, double theta)
    {
        if (elements < 1)
            throw std::invalid_argument("ula_response: need at least one element.");
        if (sector < 1 || sector > 3)
            throw std::invalid_argument("ula_response: sector must be 1, 2 or 3.");
        const double xi = wrap_angle(phi - double(sector - 2) * kTwoPi / 3.0);
        const double amp = pattern.amplitude(xi, theta - 0.5 * kPi);
        const double step = -kPi * std::sin(xi);
        arma::cx_vec a((size_t)elements);
        for (int m = 0; m < elements; ++m)
            a[m] = std::polar(amp, step * double(m));
        return a;
    }

    arma::cx_vec effective_channel_ula(const ElementPattern &pattern, int elements, int sector, const PathSet &paths)
    {
        arma::cx_vec h((size_t)elements, arma::fill::zeros);
        for (const Ray &r : paths.rays)
            h += r.alpha * ula_response(pattern, elements, sector, r.phi, r.theta);
        return h;
    }

    nlohmann::json paths_to_json(const PathSet &paths)
    {
        nlohmann::json rays = nlohmann::json::array();
        for (const Ray &r : paths.rays)
            rays.push_back({{"phi_rad", r.phi},
                            {"theta_rad", r.theta},
                            {"alpha_re", r.alpha.real()},
                            {"alpha_im", r.alpha.imag()}});
        return rays;
    }

    PathSet paths_from_json(const nlohmann::json &j)
    {
        if (!j.is_array())
            throw std::invalid_argument("paths_from_json: expected an array of rays.");
        PathSet ps;
        for (const auto &e : j)
        {
            Ray r;
            r.phi = e.at("phi_rad").get<double>();
            r.theta = e.at("theta_rad").get<double>();
            r.alpha = {e.at("alpha_re").get<double>(), e.at("alpha_im").get<double>()};
            ps.rays.push_back(r);
        }
        return ps;
    }

    std::uint64_t content_hash(const PathSet &paths)
    {
        std::uint64_t h = fnv1a({});
        h = fnv1a_append(h, &paths.los.phi, sizeof(double));
        h = fnv1a_append(h, &paths.los.theta, sizeof(double));
        for (const Ray &r : paths.rays)
        {
            const double v[4] = {r.phi, r.theta, r.alpha.real(), r.alpha.imag()};
            h = fnv1a_append(h, v, sizeof(v));
        }
        return h;
    }
}
