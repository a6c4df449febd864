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

#ifndef DCAA_PATTERN_HPP
#define DCAA_PATTERN_HPP

#include "dcaa/geometry.hpp"

#include <complex>
#include <ostream>
#include <vector>

namespace dcaa
{
    /// Directional element pattern (3GPP style) with a parabolic roll-off in dB and a common floor.
    ///
    /// A(xi) = -min(rolloff * (xi / hpbw)^2, floor), the same for the elevation offset psi, and the
    /// total attenuation -(A(xi) + A(psi)) is capped at `floor_attenuation_db` again.
    struct ElementPattern
    {
        double half_power_width_deg = 65.0;
        double rolloff_coefficient = 12.0;
        double floor_attenuation_db = 30.0;

        void validate() const;

        /// Gain in dB for azimuth offset xi and elevation offset psi (radians, wrapped first).
        double gain_db(double xi, double psi) const;

        /// Linear power gain 10^(gain_db / 10).
        double gain(double xi, double psi) const;

        /// sqrt(gain), the field amplitude weighting one element.
        double amplitude(double xi, double psi) const;
    };

    /// Linear element gain. Free-function form of ElementPattern::gain.
    double element_gain(const ElementPattern &pattern, double xi, double psi);

    /// Controls the per-layer vertical phase term exp(-j*2*pi/lambda * z * cos(theta)).
    /// It vanishes at theta = pi/2; set to false to evaluate planar sub-array factors only.
    struct ResponseOptions
    {
        ElementPattern pattern{};
        bool include_height_phase = true;
    };

    /// Array response vector a(eta, phi, theta): one entry per element (delay lines not applied).
    arma::cx_vec response_vector(const SubArray &sub, double phi, double theta, const ResponseOptions &opts = {});

    /// Array factor AF = a^T * delta, evaluated as a direct sum over the elements.
    std::complex<double> array_factor(const SubArray &sub, double phi, double theta, const ResponseOptions &opts = {});

    /// Array factor through the Jacobi-Anger expansion, truncated to orders |n| <= n_max.
    ///
    /// Each element term exp(j*x*cos(beta_m)) is expanded in Bessel functions of the argument
    /// x = (4*pi/lambda) * a * sin(theta) * sin((phi - eta)/2). Away from theta = pi/2 the fixed
    /// delay lines leave a residual phase (2*pi/lambda)*a*(1 - sin(theta))*sin(pi*(m-1)/(M-1)) per
    /// element; it does not depend on n and is folded into the per-order weights S_n so the series
    /// converges to `array_factor` for every (phi, theta).
    std::complex<double> array_factor_series(const SubArray &sub, double phi, double theta, int n_max,
                                             const ResponseOptions &opts = {});

    /// ceil(4*pi*a/lambda) + 40: the largest Bessel argument plus a safety margin.
    int default_series_order(const ArrayConfig &config);

    /// First-valley offset from the first zero of J_1-style approximation: 2*asin(3.83/(2M)).
    double valley_approx(int elements);

    /// Main-lobe width 4*asin(3.83/(2M)).
    double beamwidth(int elements);

    /// Offset phi_0 > 0 of the first local minimum of |AF(eta, eta + phi, pi/2)|.
    ///
    /// Grid scan with step `grid_step` followed by golden-section refinement to grid_step/100.
    /// Throws std::invalid_argument unless 0 < grid_step <= valley_approx(M)/10, and
    /// std::runtime_error if no minimum exists below an offset of pi/2.
    double find_first_valley(const SubArray &sub, double grid_step, const ResponseOptions &opts = {});

    /// Same scan, mirrored: offset of the first minimum on the phi < eta side (returned positive).
    double find_first_valley_left(const SubArray &sub, double grid_step, const ResponseOptions &opts = {});

    struct PatternSample
    {
        double phi = 0.0;
        double theta = 0.0;
        std::complex<double> value;
    };

    /// Writes `phi_rad,theta_rad,af_abs,af_db` rows.
    void write_pattern_csv(std::ostream &os, const std::vector<PatternSample> &samples);
}

#endif
