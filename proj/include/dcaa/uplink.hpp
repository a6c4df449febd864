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

#ifndef DCAA_UPLINK_HPP
#define DCAA_UPLINK_HPP

#include "dcaa/report.hpp"
#include "dcaa/rng.hpp"
#include "dcaa/selection.hpp"

#include <armadillo>
#include <vector>

namespace dcaa
{
    /// K users seen through the 2N sub-array ports of the cylinder.
    ///
    /// Transmit SNRs are P_k / sigma2; each port adds noise of power M * sigma2 (the M element noises
    /// combined through unit-modulus delay lines).
    struct UplinkScenario
    {
        std::vector<arma::cx_vec> channels; // h_k, length 2N
        std::vector<double> transmit_snr;   // P_k / sigma2
        int elements = 1;                   // M
        double sigma2 = 1.0;

        void validate() const;
        int users() const { return int(channels.size()); }
        int ports() const { return channels.empty() ? 0 : int(channels.front().n_elem); }
        double port_noise() const { return double(elements) * sigma2; }

        /// 2N x K matrix with h_k in column k.
        arma::cx_mat channel_matrix() const;
        /// Transmit powers P_k = snr_k * sigma2.
        arma::vec powers() const;
    };

    /// MMSE combiner C_k^{-1} S h_k, normalized to unit norm.
    arma::cx_vec mmse_combiner(const SelectionMatrix &S, const UplinkScenario &scen, int k);

    /// Post-combining SINR of user k for arbitrary combiners.
    double sinr_uplink(const SelectionMatrix &S, const std::vector<arma::cx_vec> &combiners, const UplinkScenario &scen,
                       int k);

    /// Closed-form MMSE sum rate sum_k log2(1 + P_k (S h_k)^H C_k^{-1} (S h_k)).
    double sum_rate_uplink(const SelectionMatrix &S, const UplinkScenario &scen);

    /// Sum rate from explicit MMSE combiners and the SINR expression.
    double sum_rate_uplink_explicit(const SelectionMatrix &S, const UplinkScenario &scen);

    /// Report (SINRs, rates, combiners) for a fixed selection.
    LinkReport evaluate_uplink(const SelectionMatrix &S, const UplinkScenario &scen);

    /// Greedy port selection; `trace` holds the sum rate after each pick.
    LinkReport greedy_select(const UplinkScenario &scen, int n_rf);

    /// Best selection by enumeration (guarded at 1e6 subsets).
    LinkReport exhaustive_select(const UplinkScenario &scen, int n_rf);

    /// Symbol-level simulation of the combined outputs.
    ///
    /// `port_phases[n]` are the M delay-line phasors of port n; every element receives independent
    /// CN(0, sigma2) noise which reaches the port through those phasors. Symbols are CN(0, P_k).
    /// SINR_k is estimated from the samples as |a|^2 P_k / mean|y - a s_k|^2 with a the
    /// least-squares gain of s_k in y.
    std::vector<double> simulate_uplink_symbols(const SelectionMatrix &S, const std::vector<arma::cx_vec> &combiners,
                                                const UplinkScenario &scen,
                                                const std::vector<arma::cx_vec> &port_phases, int n_symbols,
                                                RngStream &rng);

    /// SINR estimate from samples: rows of `received` and `symbols` are users, columns are symbol
    /// times. With a = <y, s_k> / <s_k, s_k>, SINR_k = |a|^2 P_k / mean|y - a s_k|^2; a residual
    /// below 1e-20 of the signal power is reported as infinity.
    std::vector<double> estimate_sinr(const arma::cx_mat &received, const arma::cx_mat &symbols, const arma::vec &powers);

    /// Draw a CN(0, variance) sample.
    std::complex<double> complex_normal(RngStream &rng, double variance);
}

#endif
