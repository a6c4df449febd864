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

#include "dcaa/pattern.hpp"
#include "dcaa/angles.hpp"
#include "dcaa/bessel.hpp"
#include "dcaa/report.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace dcaa
{
    void ElementPattern::validate() const
    {
        if (!(half_power_width_deg > 0.0) || !(rolloff_coefficient > 0.0) || !(floor_attenuation_db > 0.0))
            throw std::invalid_argument("ElementPattern: width, roll-off and floor must all be positive.");
    }

    double ElementPattern::gain_db(double xi, double psi) const
    {
        const double xr = rad_to_deg(wrap_angle(xi)) / half_power_width_deg;
        const double pr = rad_to_deg(wrap_angle(psi)) / half_power_width_deg;
        const double a_h = -std::min(rolloff_coefficient * xr * xr, floor_attenuation_db);
        const double a_v = -std::min(rolloff_coefficient * pr * pr, floor_attenuation_db);
        return -std::min(-(a_h + a_v), floor_attenuation_db);
    }

    double ElementPattern::gain(double xi, double psi) const
    {
        return std::pow(10.0, gain_db(xi, psi) / 10.0);
    }

    double ElementPattern::amplitude(double xi, double psi) const
    {
        return std::exp(gain_db(xi, psi) * (std::numbers::ln10 / 20.0));
    }

    double element_gain(const ElementPattern &pattern, double xi, double psi)
    {
        return pattern.gain(xi, psi);
    }

    namespace
    {
        void check_theta(double theta)
        {
            if (!(theta >= 0.0 && theta <= kPi))
                throw std::invalid_argument("Zenith angle must lie in [0, pi].");
        }

        // j^n for integer n cycles through 1, j, -1, -j.
        const std::complex<double> kJPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

        std::complex<double> height_phase(const SubArray &sub, double theta, const ResponseOptions &opts)
        {
            if (!opts.include_height_phase || sub.height == 0.0)
                return {1.0, 0.0};
            return std::polar(1.0, -kTwoPi / sub.config.wavelength * sub.height * std::cos(theta));
        }
    }

    arma::cx_vec response_vector(const SubArray &sub, double phi, double theta, const ResponseOptions &opts)
    {
        check_theta(theta);
        const int M = sub.config.elements;
        const double ka_sin = kTwoPi / sub.config.wavelength * sub.config.radius * std::sin(theta);
        const double psi = theta - 0.5 * kPi;
        const std::complex<double> common = height_phase(sub, theta, opts);

        arma::cx_vec a(M);
        for (int m = 0; m < M; ++m)
        {
            const double xi = phi - sub.element_angles[m];
            a[m] = common * std::polar(opts.pattern.amplitude(xi, psi), -ka_sin * std::cos(xi));
        }
        return a;
    }

    std::complex<double> array_factor(const SubArray &sub, double phi, double theta, const ResponseOptions &opts)
    {
        const arma::cx_vec a = response_vector(sub, phi, theta, opts);
        return arma::as_scalar(a.st() * sub.delta);
    }

    int default_series_order(const ArrayConfig &config)
    {
        validate(config);
        return int(std::ceil(4.0 * kPi * config.radius / config.wavelength)) + 40;
    }

    std::complex<double> array_factor_series(const SubArray &sub, double phi, double theta, int n_max,
                                             const ResponseOptions &opts)
    {
        if (n_max < 1)
            throw std::invalid_argument("array_factor_series: n_max must be >= 1.");
        check_theta(theta);

        const int M = sub.config.elements;
        const double k0a = kTwoPi / sub.config.wavelength * sub.config.radius;
        const double psi = theta - 0.5 * kPi;
        const double half = 0.5 * (phi - sub.orientation);
        const double x = 2.0 * k0a * std::sin(theta) * std::sin(half);
        const double residual = k0a * (1.0 - std::sin(theta));

        // Per-element weights: pattern amplitude times the delay-line residual away from theta = pi/2.
        std::vector<std::complex<double>> weight(M);
        std::vector<double> step_angle(M);
        for (int m = 0; m < M; ++m)
        {
            const double u = kPi * double(m) / double(M - 1);
            step_angle[m] = u;
            weight[m] = std::polar(opts.pattern.amplitude(phi - sub.element_angles[m], psi), residual * std::sin(u));
        }

        const std::vector<double> jn = bessel_j_orders(n_max, x);
        std::complex<double> sum(0.0, 0.0);
        for (int n = -n_max; n <= n_max; ++n)
        {
            const int an = n < 0 ? -n : n;
            double bessel = jn[(size_t)an];
            if (n < 0 && an % 2 == 1)
                bessel = -bessel;
            if (bessel == 0.0)
                continue;

            std::complex<double> s_n(0.0, 0.0);
            for (int m = 0; m < M; ++m)
                s_n += weight[m] * std::polar(1.0, -double(n) * step_angle[m]);

            sum += kJPow[((n % 4) + 4) % 4] * std::polar(1.0, double(n) * half) * bessel * s_n;
        }
        return height_phase(sub, theta, opts) * sum;
    }

    double valley_approx(int elements)
    {
        if (elements < 2)
            throw std::invalid_argument("valley_approx: M must be >= 2.");
        return 2.0 * std::asin(3.83 / (2.0 * double(elements)));
    }

    double beamwidth(int elements)
    {
        if (elements < 2)
            throw std::invalid_argument("beamwidth: M must be >= 2.");
        return 4.0 * std::asin(3.83 / (2.0 * double(elements)));
    }

    namespace
    {
        double scan_first_valley(const SubArray &sub, double grid_step, const ResponseOptions &opts, double direction)
        {
            const double limit = valley_approx(sub.config.elements) / 10.0;
            if (!(grid_step > 0.0) || grid_step > limit * (1.0 + 1e-12))
                throw std::invalid_argument("find_first_valley: grid_step must lie in (0, valley_approx(M)/10].");

            const double eta = sub.orientation;
            auto magnitude = [&](double offset)
            { return std::abs(array_factor(sub, eta + direction * offset, 0.5 * kPi, opts)); };

            const int n_steps = int(std::floor(0.5 * kPi / grid_step));
            double prev2 = magnitude(0.0);
            double prev1 = magnitude(grid_step);
            for (int i = 2; i <= n_steps; ++i)
            {
                const double cur = magnitude(double(i) * grid_step);
                if (prev1 < prev2 && prev1 <= cur)
                {
                    // Golden-section search on the bracket [(i-2)h, i*h] around the grid minimum.
                    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
                    double lo = double(i - 2) * grid_step;
                    double hi = double(i) * grid_step;
                    double c = hi - inv_phi * (hi - lo);
                    double d = lo + inv_phi * (hi - lo);
                    double fc = magnitude(c);
                    double fd = magnitude(d);
                    const double tol = grid_step / 100.0;
                    while (hi - lo > tol)
                    {
                        if (fc < fd)
                        {
                            hi = d;
                            d = c;
                            fd = fc;
                            c = hi - inv_phi * (hi - lo);
                            fc = magnitude(c);
                        }
                        else
                        {
                            lo = c;
                            c = d;
                            fc = fd;
                            d = lo + inv_phi * (hi - lo);
                            fd = magnitude(d);
                        }
                    }
                    return 0.5 * (lo + hi);
                }
                prev2 = prev1;
                prev1 = cur;
            }
            throw std::runtime_error("find_first_valley: no local minimum within pi/2 of the main lobe.");
        }
    }

    double find_first_valley(const SubArray &sub, double grid_step, const ResponseOptions &opts)
    {
        return scan_first_valley(sub, grid_step, opts, 1.0);
    }

    double find_first_valley_left(const SubArray &sub, double grid_step, const ResponseOptions &opts)
    {
        return scan_first_valley(sub, grid_step, opts, -1.0);
    }

    void write_pattern_csv(std::ostream &os, const std::vector<PatternSample> &samples)
    {
        os << "phi_rad,theta_rad,af_abs,af_db\n";
        for (const auto &s : samples)
        {
            const double mag = std::abs(s.value);
            const double db = 20.0 * std::log10(std::max(mag, 1e-300));
            os << format_number(s.phi) << ',' << format_number(s.theta) << ',' << format_number(mag) << ','
               << format_number(db) << '\n';
        }
    }
}
