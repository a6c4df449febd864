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

#include "dcaa/geometry.hpp"
#include "dcaa/angles.hpp"

#include <stdexcept>
#include <string>

namespace dcaa
{
    ArrayConfig make_config(int elements, double carrier_hz)
    {
        if (elements < 2)
            throw std::invalid_argument("Sub-array needs at least 2 elements, got " + std::to_string(elements) + ".");
        if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz))
            throw std::invalid_argument("Carrier frequency must be positive and finite.");

        ArrayConfig config;
        config.elements = elements;
        config.carrier_hz = carrier_hz;
        config.wavelength = kSpeedOfLight / carrier_hz;
        config.radius = double(elements - 1) * config.wavelength / kTwoPi;
        return config;
    }

    void validate(const ArrayConfig &config)
    {
        if (config.elements < 2)
            throw std::invalid_argument("ArrayConfig: element count must be >= 2.");
        if (!(config.wavelength > 0.0))
            throw std::invalid_argument("ArrayConfig: wavelength must be positive.");
        if (!(config.radius > 0.0))
            throw std::invalid_argument("ArrayConfig: radius must be positive.");
    }

    arma::vec delay_line_lengths(const ArrayConfig &config)
    {
        validate(config);
        const int M = config.elements;
        const double lambda = config.wavelength;
        const double a = config.radius;

        arma::vec lengths(M);
        for (int m = 0; m < M; ++m)
        {
            // Mirror the upper half so l_m == l_{M+1-m} holds bit-exactly.
            const int mm = std::min(m, M - 1 - m);
            const double s = std::sin(kPi * double(mm) / double(M - 1));
            const double k = std::ceil(a / lambda * s);
            double l = -a * s + k * lambda;
            if (l < 0.0) // ceil on a rounded product can land one ulp short
                l += lambda;
            if (l >= lambda)
                l -= lambda;
            lengths[m] = l;
        }
        return lengths;
    }

    arma::cx_vec phase_shift_vector(const ArrayConfig &config)
    {
        const arma::vec lengths = delay_line_lengths(config);
        arma::cx_vec delta(lengths.n_elem);
        for (arma::uword m = 0; m < lengths.n_elem; ++m)
            delta[m] = std::polar(1.0, -kTwoPi / config.wavelength * lengths[m]);
        return delta;
    }

    SubArray make_subarray(const ArrayConfig &config, double orientation, double height)
    {
        validate(config);
        if (!std::isfinite(orientation) || !std::isfinite(height))
            throw std::invalid_argument("Sub-array orientation and height must be finite.");

        const int M = config.elements;
        SubArray sub;
        sub.config = config;
        sub.orientation = wrap_angle(orientation);
        sub.height = height;
        sub.element_angles.set_size(M);
        sub.positions.set_size(3, M);

        for (int m = 0; m < M; ++m)
        {
            const double gamma = sub.orientation - 0.5 * kPi + kPi * double(m) / double(M - 1);
            sub.element_angles[m] = gamma;
            sub.positions(0, m) = config.radius * std::cos(gamma);
            sub.positions(1, m) = config.radius * std::sin(gamma);
            sub.positions(2, m) = height;
        }

        sub.delay_lengths = delay_line_lengths(config);
        sub.phase_shifts = -kTwoPi / config.wavelength * sub.delay_lengths;
        sub.delta.set_size(M);
        for (int m = 0; m < M; ++m)
            sub.delta[m] = std::polar(1.0, sub.phase_shifts[m]);
        return sub;
    }
}
