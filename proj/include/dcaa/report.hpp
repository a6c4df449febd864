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

#ifndef DCAA_REPORT_HPP
#define DCAA_REPORT_HPP

#include <armadillo>
#include "json.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dcaa
{
    /// Shortest round-trip decimal representation ('.' decimal point, no grouping, locale independent).
    std::string format_number(double value);
    std::string format_number(std::int64_t value);

    /// 64-bit FNV-1a.
    std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);
    std::uint64_t fnv1a_append(std::uint64_t state, const void *data, std::size_t size);

    /// 16 lowercase hex digits.
    std::string hex64(std::uint64_t value);

    /// Outcome of one link-level optimization (uplink or downlink, either architecture).
    struct LinkReport
    {
        std::vector<double> per_user_sinr;
        std::vector<double> per_user_rate; // bits/s/Hz
        double sum_rate = 0.0;             // bits/s/Hz
        std::vector<int> selection;        // selected ports or beams (0-based), in pick order
        std::vector<arma::cx_vec> beamformers;
        std::vector<double> power;         // downlink power allocation; empty for uplink
        std::vector<double> trace;         // greedy steps (uplink) or iterations t >= 1 (downlink)
        std::vector<double> p_change;      // L1 power change per iteration (downlink)
        double initial_sum_rate = 0.0;     // downlink: uniform allocation, before iterating
        int iterations = 0;
        bool converged = true;

        nlohmann::json to_json() const;
    };

    /// Fills per_user_rate and sum_rate from per_user_sinr.
    void finalize_rates(LinkReport &report);
}

#endif
