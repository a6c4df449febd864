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

#include "dcaa/report.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace dcaa
{
    std::string format_number(double value)
    {
        if (!std::isfinite(value))
            return std::isnan(value) ? "nan" : (value > 0.0 ? "inf" : "-inf");
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof(buf), value);
        if (res.ec != std::errc())
            throw std::runtime_error("format_number: conversion failed.");
        return std::string(buf, res.ptr);
    }

    std::string format_number(std::int64_t value)
    {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof(buf), value);
        return std::string(buf, res.ptr);
    }

    std::uint64_t fnv1a_append(std::uint64_t state, const void *data, std::size_t size)
    {
        const auto *p = static_cast<const unsigned char *>(data);
        for (std::size_t i = 0; i < size; ++i)
        {
            state ^= p[i];
            state *= 0x100000001b3ULL;
        }
        return state;
    }

    std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state)
    {
        return fnv1a_append(state, bytes.data(), bytes.size());
    }

    std::string hex64(std::uint64_t value)
    {
        static const char digits[] = "0123456789abcdef";
        std::string out(16, '0');
        for (int i = 15; i >= 0; --i, value >>= 4)
            out[(size_t)i] = digits[value & 0xf];
        return out;
    }

    void finalize_rates(LinkReport &report)
    {
        report.per_user_rate.resize(report.per_user_sinr.size());
        report.sum_rate = 0.0;
        for (std::size_t k = 0; k < report.per_user_sinr.size(); ++k)
        {
            report.per_user_rate[k] = std::log2(1.0 + report.per_user_sinr[k]);
            report.sum_rate += report.per_user_rate[k];
        }
    }

    nlohmann::json LinkReport::to_json() const
    {
        nlohmann::json j;
        j["per_user_sinr"] = per_user_sinr;
        j["per_user_rate"] = per_user_rate;
        j["sum_rate"] = sum_rate;
        j["selection"] = selection;
        nlohmann::json bf = nlohmann::json::array();
        for (const auto &w : beamformers)
        {
            nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
            for (arma::uword i = 0; i < w.n_elem; ++i)
            {
                re.push_back(w[i].real());
                im.push_back(w[i].imag());
            }
            bf.push_back({{"re", re}, {"im", im}});
        }
        j["beamformers"] = bf;
        if (!power.empty())
            j["power"] = power;
        j["trace"] = trace;
        if (!p_change.empty())
            j["p_change_l1"] = p_change;
        j["initial_sum_rate"] = initial_sum_rate;
        j["iterations"] = iterations;
        j["converged"] = converged;
        return j;
    }
}
