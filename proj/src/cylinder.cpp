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

#include "dcaa/cylinder.hpp"
#include "dcaa/angles.hpp"

#include <algorithm>
#include <stdexcept>

namespace dcaa
{
    int suca_count(int elements)
    {
        if (elements < 2)
            throw std::invalid_argument("suca_count: M must be >= 2.");
        return int(std::floor(kPi * double(elements) / 3.83));
    }

    double plus_orientation(int elements, int n)
    {
        return wrap_angle(2.0 * double(n) * std::asin(3.83 / (2.0 * double(elements))));
    }

    CylinderArray design_cylinder(int elements, double carrier_hz, const CylinderOptions &opts)
    {
        if (elements < 2)
            throw std::invalid_argument("design_cylinder: M must be >= 2.");
        if (!(opts.layer_spacing_wavelengths > 0.0))
            throw std::invalid_argument("design_cylinder: layer spacing must be positive.");
        opts.response.pattern.validate();

        CylinderArray cyl;
        cyl.config = make_config(elements, carrier_hz);
        cyl.sucas = suca_count(elements);
        cyl.layer_spacing = opts.layer_spacing_wavelengths * cyl.config.wavelength;
        cyl.total_height = double(cyl.sucas - 1) * cyl.layer_spacing;
        cyl.response = opts.response;

        cyl.subarrays.reserve(std::size_t(2 * cyl.sucas));
        for (int n = 0; n < cyl.sucas; ++n)
            cyl.subarrays.push_back(make_subarray(cyl.config, plus_orientation(elements, n), double(n) * cyl.layer_spacing));
        for (int n = 0; n < cyl.sucas; ++n)
            cyl.subarrays.push_back(
                make_subarray(cyl.config, plus_orientation(elements, n) - kPi, double(n) * cyl.layer_spacing));
        return cyl;
    }

    arma::cx_mat response_matrix(const CylinderArray &cyl, double phi, double theta)
    {
        arma::cx_mat A(cyl.config.elements, cyl.n_subarrays());
        for (int n = 0; n < cyl.n_subarrays(); ++n)
            A.col(n) = response_vector(cyl.subarrays[(size_t)n], phi, theta, cyl.response);
        return A;
    }

    arma::cx_vec subarray_outputs(const CylinderArray &cyl, double phi, double theta)
    {
        if (!(theta >= 0.0 && theta <= kPi))
            throw std::invalid_argument("Zenith angle must lie in [0, pi].");

        const ElementPattern &pat = cyl.response.pattern;
        const int M = cyl.config.elements;
        const double k0 = kTwoPi / cyl.config.wavelength;
        const double sin_t = std::sin(theta);
        const double cos_t = std::cos(theta);
        const double cos_p = std::cos(phi);
        const double sin_p = std::sin(phi);
        const double psi = theta - 0.5 * kPi;

        // Elevation part of the element attenuation is common to every element.
        const double pr = rad_to_deg(wrap_angle(psi)) / pat.half_power_width_deg;
        const double a_v = -std::min(pat.rolloff_coefficient * pr * pr, pat.floor_attenuation_db);
        const double db_to_amp = std::numbers::ln10 / 20.0;

        arma::cx_vec r(cyl.n_subarrays());
        for (int n = 0; n < cyl.n_subarrays(); ++n)
        {
            const SubArray &sub = cyl.subarrays[(size_t)n];
            const double *pos = sub.positions.memptr();
            double re = 0.0, im = 0.0;
            for (int m = 0; m < M; ++m)
            {
                const double xr = rad_to_deg(wrap_angle(phi - sub.element_angles[m])) / pat.half_power_width_deg;
                const double a_h = -std::min(pat.rolloff_coefficient * xr * xr, pat.floor_attenuation_db);
                const double g_db = -std::min(-(a_h + a_v), pat.floor_attenuation_db);
                const double amp = std::exp(g_db * db_to_amp);

                // Projection of the element position on the arrival direction (planar part).
                const double proj = (pos[3 * m] * cos_p + pos[3 * m + 1] * sin_p) * sin_t;
                const double phase = -k0 * proj + sub.phase_shifts[m];
                re += amp * std::cos(phase);
                im += amp * std::sin(phase);
            }
            std::complex<double> af(re, im);
            if (cyl.response.include_height_phase && sub.height != 0.0)
                af *= std::polar(1.0, -k0 * sub.height * cos_t);
            r[n] = af;
        }
        return r;
    }

    nlohmann::json roster_json(const CylinderArray &cyl)
    {
        nlohmann::json out = nlohmann::json::array();
        for (int n = 0; n < cyl.n_subarrays(); ++n)
        {
            const SubArray &sub = cyl.subarrays[(size_t)n];
            out.push_back({{"index", n},
                           {"sign", cyl.is_plus(n) ? "+" : "-"},
                           {"eta_rad", sub.orientation},
                           {"height_m", sub.height}});
        }
        return out;
    }
}
