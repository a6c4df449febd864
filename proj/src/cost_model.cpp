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

#include "dcaa/cost_model.hpp"

#include <cmath>
#include <stdexcept>

namespace dcaa
{
    void CostInputs::validate() const
    {
        if (antenna_cents < 0 || phase_shifter_cents < 0 || switch_cents < 0)
            throw std::invalid_argument("CostInputs: prices must be nonnegative.");
        if (elements < 0 || sucas < 0 || n_rf < 0)
            throw std::invalid_argument("CostInputs: counts must be nonnegative.");
    }

    std::int64_t to_cents(double price)
    {
        if (!std::isfinite(price) || price < 0.0)
            throw std::invalid_argument("to_cents: price must be a finite nonnegative number.");
        return std::llround(price * 100.0);
    }

    std::string format_cents(std::int64_t cents)
    {
        const bool neg = cents < 0;
        const std::uint64_t a = neg ? std::uint64_t(-(cents + 1)) + 1 : std::uint64_t(cents);
        std::string frac = std::to_string(a % 100);
        if (frac.size() < 2)
            frac.insert(0, "0");
        return (neg ? "-" : "") + std::to_string(a / 100) + "." + frac;
    }

    std::int64_t cost_cylinder(const CostInputs &in)
    {
        in.validate();
        return 2 * std::int64_t(in.sucas) * in.elements * in.antenna_cents +
               std::int64_t(in.n_rf) * in.sucas * in.switch_cents;
    }

    std::int64_t cost_ula(const CostInputs &in)
    {
        in.validate();
        return 3 * std::int64_t(in.n_rf) * in.elements * in.phase_shifter_cents +
               3 * std::int64_t(in.elements) * in.antenna_cents;
    }

    double cost_ratio(const CostInputs &in)
    {
        const std::int64_t ula = cost_ula(in);
        if (ula == 0)
            throw std::domain_error("cost_ratio: ULA cost is zero.");
        return double(cost_cylinder(in)) / double(ula);
    }

    double cost_cylinder_at(const CostInputs &in, double antenna_price)
    {
        in.validate();
        return 2.0 * double(in.sucas) * double(in.elements) * antenna_price +
               double(in.n_rf) * double(in.sucas) * double(in.switch_cents) / 100.0;
    }

    double cost_ula_at(const CostInputs &in, double antenna_price)
    {
        in.validate();
        return 3.0 * double(in.n_rf) * double(in.elements) * double(in.phase_shifter_cents) / 100.0 +
               3.0 * double(in.elements) * antenna_price;
    }

    double breakeven_antenna_cost(const CostInputs &in)
    {
        in.validate();
        const std::int64_t den = 2 * std::int64_t(in.sucas) * in.elements - 3 * std::int64_t(in.elements);
        if (den <= 0)
            throw std::domain_error("breakeven_antenna_cost: requires 2NM > 3M.");
        const std::int64_t num = 3 * std::int64_t(in.n_rf) * in.elements * in.phase_shifter_cents -
                                 std::int64_t(in.n_rf) * in.sucas * in.switch_cents;
        return double(num) / double(den) / 100.0;
    }

    nlohmann::json cost_report(const CostInputs &in)
    {
        nlohmann::json j;
        j["cost_cylinder"] = double(cost_cylinder(in)) / 100.0;
        j["cost_ula"] = double(cost_ula(in)) / 100.0;
        j["ratio"] = cost_ratio(in);
        j["breakeven_c_an"] = breakeven_antenna_cost(in);
        return j;
    }

    CostInputs cost_inputs_from_json(const nlohmann::json &prices, int elements, int sucas, int n_rf)
    {
        if (!prices.is_object())
            throw std::invalid_argument("cost prices: expected an object with c_an, c_ps and c_sw.");
        CostInputs in;
        auto read = [&](const char *key) {
            if (!prices.contains(key))
                throw std::invalid_argument(std::string("cost prices: missing field '") + key + "'.");
            if (!prices.at(key).is_number())
                throw std::invalid_argument(std::string("cost prices: field '") + key + "' must be a number.");
            return to_cents(prices.at(key).get<double>());
        };
        in.antenna_cents = read("c_an");
        in.phase_shifter_cents = read("c_ps");
        in.switch_cents = read("c_sw");
        for (const auto &item : prices.items())
            if (item.key() != "c_an" && item.key() != "c_ps" && item.key() != "c_sw")
                throw std::invalid_argument("cost prices: unknown field '" + item.key() + "'.");
        in.elements = elements;
        in.sucas = sucas;
        in.n_rf = n_rf;
        in.validate();
        return in;
    }
}
