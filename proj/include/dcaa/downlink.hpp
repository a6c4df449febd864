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

#ifndef DCAA_DOWNLINK_HPP
#define DCAA_DOWNLINK_HPP

#include "dcaa/report.hpp"
#include "dcaa/rng.hpp"
#include "dcaa/selection.hpp"
#include "dcaa/uplink.hpp"

#include <armadillo>
#include <functional>
#include <stdexcept>
#include <vector>

namespace dcaa
{
    /// Raised when no user has a nonzero effective gain.
    struct DegenerateChannel : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    enum class WaterfillMode
    {
        active_set, // exact water level over the users that stay active
        rescale     // all-active water level, clamp, then scale the survivors to the budget
    };

    /// Downlink seen through its dual uplink.
    ///
    /// User k receives precoder w_i with amplitude g_k^H w_i. Users interfere only inside the same
    /// group (one group for the cylinder, one per sector for the ULA benchmark). `noise` is the
    /// receiver noise expressed in the units of |g^H w|^2 p.
    struct DualLink
    {
        std::vector<arma::cx_vec> features;
        std::vector<int> groups;
        double noise = 1.0;

        int users() const { return int(features.size()); }
        bool interferes(int k, int i) const { return groups.empty() || groups[std::size_t(k)] == groups[std::size_t(i)]; }
    };

    /// w_k = C_k^{-1} g_k / |C_k^{-1} g_k| with C_k = noise I + sum_{i != k, same group} p_i g_i g_i^H.
    std::vector<arma::cx_vec> dual_mmse_precoders(const DualLink &link, const arma::vec &p);

    /// K x K matrix with entry (k, i) = |g_k^H w_i|^2, zero across groups.
    arma::mat coupling_gains(const DualLink &link, const std::vector<arma::cx_vec> &precoders);

    /// SINR_k = p_k G(k,k) / (sum_{i != k} p_i G(k,i) + noise).
    arma::vec sinr_from_gains(const arma::mat &gains, const arma::vec &p, double noise);

    /// Waterfilling p_k = max(mu - Z_k / g_k, 0) with sum p = total.
    arma::vec waterfill_levels(const arma::vec &gain, const arma::vec &interference_plus_noise, double total,
                               WaterfillMode mode = WaterfillMode::active_set);

    struct PowerIterationOptions
    {
        int t_max = 10;
        double eps_th = 0.01;
        WaterfillMode mode = WaterfillMode::active_set;
    };

    /// Alternating precoder update and waterfilling from a uniform start.
    ///
    /// `refresh`, when set, rebuilds the link from the previous power vector at the start of every
    /// iteration (used to re-run port selection).
    LinkReport iterate_power(DualLink link, double total_power, const PowerIterationOptions &opts,
                             const std::function<DualLink(const arma::vec &)> &refresh = {});

    /// Cylinder downlink: K users, 2N ports, total transmit power P_DL.
    struct DownlinkScenario
    {
        std::vector<arma::cx_vec> channels; // h_DL,k, length 2N
        double total_power = 1.0;
        double sigma2 = 1.0;
        int elements = 1;
        int t_max = 10;
        double eps_th = 0.01;

        void validate() const;
        int users() const { return int(channels.size()); }
        int ports() const { return channels.empty() ? 0 : int(channels.front().n_elem); }
    };

    /// g_k = S conj(h_k), noise M sigma2 (the splitter factor 1/M moved to the noise side).
    DualLink dual_link(const SelectionMatrix &S, const DownlinkScenario &scen);

    /// Dual uplink used for port selection: conj(h_k) at transmit SNR p_k / sigma2.
    UplinkScenario dual_uplink(const DownlinkScenario &scen, const arma::vec &p);

    arma::cx_vec mmse_precoder(const SelectionMatrix &S, const DownlinkScenario &scen, const std::vector<double> &p,
                               int k);

    /// SINR_k = (1/M) P_k |h_k^T S^T w_k|^2 / ((1/M) sum_{i != k} P_i |h_k^T S^T w_i|^2 + sigma2).
    double sinr_downlink(const SelectionMatrix &S, const std::vector<arma::cx_vec> &precoders,
                         const DownlinkScenario &scen, const std::vector<double> &p, int k);

    /// One waterfilling step with interference evaluated at p_prev.
    std::vector<double> waterfill(const SelectionMatrix &S, const std::vector<arma::cx_vec> &precoders,
                                  const DownlinkScenario &scen, const std::vector<double> &p_prev,
                                  WaterfillMode mode = WaterfillMode::active_set);

    using SelectionRule = std::function<SelectionMatrix(const UplinkScenario &, int)>;

    /// Default rule: greedy selection on the given (dual) uplink.
    SelectionMatrix greedy_selection_rule(const UplinkScenario &scen, int n_rf);

    struct DownlinkOptions
    {
        WaterfillMode mode = WaterfillMode::active_set;
        bool update_selection = false; // re-select ports each iteration from the current powers
        SelectionRule selector;        // empty: greedy_selection_rule
    };

    /// Port selection once at uniform power, then alternate precoders and waterfilling.
    LinkReport optimize_downlink(const DownlinkScenario &scen, int n_rf, const DownlinkOptions &opts = {});

    /// Symbol-level simulation: x = sqrt(1/M) S^T sum_i w_i s_i, y_k = h_k^T x + z_k.
    /// Returns per-user SINR estimated as in simulate_uplink_symbols.
    std::vector<double> simulate_downlink_symbols(const SelectionMatrix &S, const std::vector<arma::cx_vec> &precoders,
                                                  const DownlinkScenario &scen, const std::vector<double> &p,
                                                  int n_symbols, RngStream &rng);
}

#endif
