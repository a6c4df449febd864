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

#ifndef DCAA_COST_MODEL_HPP
#define DCAA_COST_MODEL_HPP

#include "json.hpp"

#include <cstdint>
#include <string>

namespace dcaa
{
    /// Unit prices in integer cents plus the array dimensions.
    struct CostInputs
    {
        std::int64_t antenna_cents = 0;       // c_An
        std::int64_t phase_shifter_cents = 0; // c_PS
        std::int64_t switch_cents = 0;        // c_SW (SPDT)
        int elements = 0;                     // M
        int sucas = 0;                        // N
        int n_rf = 0;

        void validate() const;
    };

    /// Decimal price to cents, rounding to the nearest cent.
    std::int64_t to_cents(double price);
    /// "1511427.84" style rendering of a cent amount.
    std::string format_cents(std::int64_t cents);

    /// 2 N M c_An + N_RF N c_SW
    std::int64_t cost_cylinder(const CostInputs &in);
    /// 3 N_RF M c_PS + 3 M c_An
    std::int64_t cost_ula(const CostInputs &in);
    double cost_ratio(const CostInputs &in);

    /// Both costs in currency units with the antenna price given directly (any real value).
    double cost_cylinder_at(const CostInputs &in, double antenna_price);
    double cost_ula_at(const CostInputs &in, double antenna_price);

    /// Antenna price at which both costs coincide: (3 N_RF M c_PS - N_RF N c_SW) / (2 N M - 3 M), in currency units.
    double breakeven_antenna_cost(const CostInputs &in);

    /// {cost_cylinder, cost_ula, ratio, breakeven_c_an} (currency units).
    nlohmann::json cost_report(const CostInputs &in);

    /// Reads {c_an, c_ps, c_sw} prices; a missing field raises an error naming it.
    CostInputs cost_inputs_from_json(const nlohmann::json &prices, int elements, int sucas, int n_rf);
}

#endif
