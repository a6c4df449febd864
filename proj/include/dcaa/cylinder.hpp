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

#ifndef DCAA_CYLINDER_HPP
#define DCAA_CYLINDER_HPP

#include "dcaa/geometry.hpp"
#include "dcaa/pattern.hpp"

#include "json.hpp"
#include <vector>

namespace dcaa
{
    /// Number of stacked sUCAs that tile the full azimuth: floor(pi * M / 3.83).
    int suca_count(int elements);

    /// Full layered stack: N sUCAs, each split into a "+" and a "-" sub-array.
    ///
    /// Sub-arrays are ordered [plus_0 .. plus_{N-1}, minus_0 .. minus_{N-1}]; plus_n and minus_n
    /// share layer n at height n * layer_spacing.
    struct CylinderArray
    {
        ArrayConfig config;
        int sucas = 0;                // N
        double layer_spacing = 0.0;   // h, meters
        double total_height = 0.0;    // (N - 1) * h
        std::vector<SubArray> subarrays;
        ResponseOptions response{};

        int n_subarrays() const { return 2 * sucas; }
        bool is_plus(int index) const { return index < sucas; }
    };

    struct CylinderOptions
    {
        double layer_spacing_wavelengths = 0.5;
        ResponseOptions response{};
    };

    /// Orientation of plus_n: 2 * n * asin(3.83 / (2M)), wrapped to (-pi, pi].
    double plus_orientation(int elements, int n);

    CylinderArray design_cylinder(int elements, double carrier_hz, const CylinderOptions &opts = {});

    /// M x 2N matrix whose column n is the response vector of sub-array n.
    arma::cx_mat response_matrix(const CylinderArray &cyl, double phi, double theta);

    /// 2N-vector of array factors r = A^T * delta, computed per sub-array in one fused pass.
    arma::cx_vec subarray_outputs(const CylinderArray &cyl, double phi, double theta);

    /// Roster export: [{index, sign, eta_rad, height_m}, ...].
    nlohmann::json roster_json(const CylinderArray &cyl);
}

#endif
