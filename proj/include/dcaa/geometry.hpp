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

#ifndef DCAA_GEOMETRY_HPP
#define DCAA_GEOMETRY_HPP

#include <armadillo>

namespace dcaa
{
    /// Physical constants shared by every semi-circular sub-array of one design.
    struct ArrayConfig
    {
        int elements = 0;         // M, antenna elements per sub-array
        double carrier_hz = 0.0;  // f_c
        double wavelength = 0.0;  // c / f_c, meters
        double radius = 0.0;      // (M-1) * wavelength / (2 pi), meters
    };

    /// Builds a config for M elements at carrier f_c. Throws std::invalid_argument for M < 2 or f_c <= 0.
    ArrayConfig make_config(int elements, double carrier_hz);

    // Throws std::invalid_argument if the config is not self-consistent.
    void validate(const ArrayConfig &config);

    /// Variable delay-line lengths in meters, one per element.
    ///
    /// The line of element m compensates the path difference a*sin(pi*(m-1)/(M-1)) toward the
    /// sub-array's own orientation, folded into [0, lambda) by the smallest non-negative number of
    /// whole wavelengths. The resulting list is palindromic and independent of the orientation.
    arma::vec delay_line_lengths(const ArrayConfig &config);

    /// Static per-element phase exp(j*dphi_m), dphi_m = -2*pi*l_m/lambda.
    arma::cx_vec phase_shift_vector(const ArrayConfig &config);

    /// One semi-circular sub-array with M elements facing `orientation`.
    struct SubArray
    {
        ArrayConfig config;
        double orientation = 0.0;  // eta, in (-pi, pi]
        double height = 0.0;       // z offset of the layer, meters
        arma::vec element_angles;  // gamma_m, radians
        arma::mat positions;       // 3 x M, meters
        arma::vec delay_lengths;   // l_m, meters
        arma::vec phase_shifts;    // dphi_m, radians
        arma::cx_vec delta;        // exp(j*dphi_m)
    };

    /// Builds a sub-array. The orientation is wrapped to (-pi, pi] rather than rejected.
    SubArray make_subarray(const ArrayConfig &config, double orientation, double height = 0.0);
}

#endif
