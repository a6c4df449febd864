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

#include "doctest.h"
#include "oracles.hpp"

#include "dcaa/angles.hpp"
#include "dcaa/cylinder.hpp"

#include <algorithm>

using namespace dcaa;

TEST_CASE("sUCA count and stack size")
{
    CHECK(suca_count(16) == 13);
    CHECK(suca_count(32) == 26);
    CHECK(suca_count(64) == 52);
    CHECK(suca_count(128) == 104);
    const CylinderArray c = design_cylinder(16, 47.2e9);
    CHECK(c.sucas == 13);
    CHECK(c.n_subarrays() == 26);
    CHECK(c.subarrays.size() == 26);
    CHECK_THROWS_AS(design_cylinder(1, 47.2e9), std::invalid_argument);
    CHECK_THROWS_AS(suca_count(0), std::invalid_argument);
}

TEST_CASE("orientations: plus/minus pairs and wrap")
{
    const CylinderArray c = design_cylinder(16, 47.2e9);
    CHECK(c.subarrays[1].orientation == doctest::Approx(0.23995).epsilon(1e-4));
    CHECK(c.subarrays[1].orientation == doctest::Approx(2 * std::asin(3.83 / 32)).epsilon(1e-14));
    for (int M : {16, 23, 64})
    {
        const CylinderArray cyl = design_cylinder(M, 47.2e9);
        for (int n = 0; n < cyl.sucas; ++n)
        {
            const double plus = cyl.subarrays[(size_t)n].orientation;
            const double minus = cyl.subarrays[size_t(n + cyl.sucas)].orientation;
            CHECK(std::fabs(std::remainder(plus - 2.0 * n * std::asin(3.83 / (2.0 * M)), kTwoPi)) < 1e-12);
            CHECK(std::fabs(std::remainder(minus - plus + kPi, kTwoPi)) < 1e-12);
            CHECK(cyl.is_plus(n));
            CHECK_FALSE(cyl.is_plus(n + cyl.sucas));
        }
        for (const auto &s : cyl.subarrays)
        {
            CHECK(s.orientation > -kPi);
            CHECK(s.orientation <= kPi);
        }
    }
}

TEST_CASE("layer heights step by half a wavelength")
{
    const CylinderArray c = design_cylinder(32, 47.2e9);
    const double half = c.config.wavelength / 2;
    CHECK(c.layer_spacing == doctest::Approx(half).epsilon(1e-15));
    CHECK(c.total_height == doctest::Approx((c.sucas - 1) * half).epsilon(1e-14));
    for (int n = 0; n < c.sucas; ++n)
    {
        CHECK(c.subarrays[(size_t)n].height == doctest::Approx(n * half).epsilon(1e-14));
        CHECK(c.subarrays[size_t(n + c.sucas)].height == c.subarrays[(size_t)n].height);
        if (n > 0)
            CHECK(c.subarrays[(size_t)n].height > c.subarrays[size_t(n - 1)].height);
        for (int m = 0; m < c.config.elements; ++m)
            CHECK(c.subarrays[(size_t)n].positions(2, m) == doctest::Approx(n * half).epsilon(1e-14));
    }
    CylinderOptions o;
    o.layer_spacing_wavelengths = 0.0;
    CHECK_THROWS_AS(design_cylinder(16, 47.2e9, o), std::invalid_argument);
}

TEST_CASE("response matrix columns and fused outputs agree")
{
    const CylinderArray c = design_cylinder(16, 47.2e9);
    oracle::Gen g(11);
    for (int t = 0; t < 40; ++t)
    {
        const double phi = g.uniform(-kPi, kPi), theta = g.uniform(0, kPi);
        const arma::cx_mat A = response_matrix(c, phi, theta);
        REQUIRE(A.n_rows == 16);
        REQUIRE(A.n_cols == 26);
        const arma::cx_vec r = subarray_outputs(c, phi, theta);
        REQUIRE(r.n_elem == 26);
        for (int n = 0; n < 26; ++n)
        {
            const arma::cx_vec col = response_vector(c.subarrays[(size_t)n], phi, theta, c.response);
            CHECK(arma::norm(A.col(n) - col) == 0.0);
            // Column-by-column product with the delay phasors.
            const std::complex<double> via_matrix = arma::accu(A.col(n) % c.subarrays[(size_t)n].delta);
            CHECK(std::abs(via_matrix - r[n]) <= 1e-12 * std::max(1.0, std::abs(r[n])));
            CHECK(std::isfinite(r[n].real()));
            CHECK(std::isfinite(r[n].imag()));
        }
    }
    CHECK_THROWS_AS(subarray_outputs(c, 0.0, 4.0), std::invalid_argument);
}

TEST_CASE("outputs match the geometric oracle including layer height")
{
    const CylinderArray c = design_cylinder(16, 47.2e9);
    oracle::Gen g(12);
    for (int t = 0; t < 30; ++t)
    {
        const double phi = g.uniform(-kPi, kPi), theta = g.uniform(0.05, kPi - 0.05);
        const arma::cx_vec r = subarray_outputs(c, phi, theta);
        for (int n = 0; n < c.n_subarrays(); ++n)
        {
            const auto &s = c.subarrays[(size_t)n];
            const auto ref = oracle::array_factor(16, 47.2e9, s.orientation, phi, theta, s.height);
            const std::complex<double> rd(double(ref.real()), double(ref.imag()));
            CHECK(std::abs(r[n] - rd) <= 1e-9 * std::max(1e-3, std::abs(rd)));
        }
    }
}

TEST_CASE("height phase flag removes only the vertical term")
{
    CylinderOptions o;
    o.response.include_height_phase = false;
    const CylinderArray flat = design_cylinder(16, 47.2e9, o);
    const CylinderArray full = design_cylinder(16, 47.2e9);
    const arma::cx_vec a = subarray_outputs(flat, 0.4, 1.0);
    const arma::cx_vec b = subarray_outputs(full, 0.4, 1.0);
    const double k0 = kTwoPi / full.config.wavelength;
    for (int n = 0; n < full.n_subarrays(); ++n)
        CHECK(std::abs(b[n] - a[n] * std::polar(1.0, -k0 * full.subarrays[(size_t)n].height * std::cos(1.0))) < 1e-12);
    // In the horizontal plane the two agree.
    CHECK(arma::norm(subarray_outputs(flat, 0.4, kPi / 2) - subarray_outputs(full, 0.4, kPi / 2)) < 1e-10);
}

TEST_CASE("boresight of each sub-array dominates the output vector")
{
    const CylinderArray c = design_cylinder(16, 47.2e9);
    const double ref = std::abs(subarray_outputs(c, c.subarrays[0].orientation, kPi / 2)[0]);
    for (int n = 0; n < c.n_subarrays(); ++n)
    {
        const arma::cx_vec r = subarray_outputs(c, c.subarrays[(size_t)n].orientation, kPi / 2);
        CHECK(arma::index_max(arma::abs(r)) == arma::uword(n));
        CHECK(std::abs(r[n]) == doctest::Approx(ref).epsilon(1e-10));
    }
}

namespace
{
    // Largest |AF| between the first valley and pi/2 off boresight, relative to the peak.
    double first_sidelobe_ratio(const SubArray &s)
    {
        const double eta = s.orientation;
        const double valley = find_first_valley(s, valley_approx(s.config.elements) / 100);
        double side = 0.0;
        double prev = std::abs(array_factor(s, eta + valley, kPi / 2));
        bool rising = false;
        for (double off = valley; off < kPi / 2; off += 1e-4)
        {
            const double v = std::abs(array_factor(s, eta + off, kPi / 2));
            if (v < prev && rising)
            {
                side = prev;
                break;
            }
            rising = v > prev;
            prev = v;
        }
        return side / std::abs(array_factor(s, eta, kPi / 2));
    }
}

TEST_CASE("neighbouring boresights fall below the first sidelobe")
{
    for (int M : {16, 64})
    {
        const CylinderArray c = design_cylinder(M, 47.2e9);
        const double sll = first_sidelobe_ratio(c.subarrays[0]);
        CHECK(sll > 0.0);
        CHECK(sll < 1.0);
        for (int n = 0; n + 1 < c.sucas; ++n)
        {
            const SubArray &here = c.subarrays[(size_t)n];
            const SubArray &next = c.subarrays[size_t(n + 1)];
            const double leak = std::abs(array_factor(here, next.orientation, kPi / 2));
            const double peak = std::abs(array_factor(next, next.orientation, kPi / 2));
            CHECK(leak / peak <= sll);
        }
    }
}

TEST_CASE("main lobes cover the whole azimuth circle")
{
    for (int M : {16, 33, 64})
    {
        const CylinderArray c = design_cylinder(M, 47.2e9);
        const double half = valley_approx(M);
        for (double phi = -kPi + 1e-4; phi <= kPi; phi += 1e-3)
        {
            bool covered = false;
            for (const auto &s : c.subarrays)
                covered = covered || std::fabs(wrap_angle(phi - s.orientation)) <= half;
            CHECK(covered);
        }
    }
}

TEST_CASE("roster export")
{
    const CylinderArray c = design_cylinder(16, 47.2e9);
    const nlohmann::json r = roster_json(c);
    REQUIRE(r.size() == 26);
    CHECK(r[0]["index"] == 0);
    CHECK(r[0]["sign"] == "+");
    CHECK(r[13]["sign"] == "-");
    CHECK(r[1]["eta_rad"].get<double>() == c.subarrays[1].orientation);
    CHECK(r[25]["height_m"].get<double>() == c.subarrays[25].height);
    for (const auto &e : r)
        CHECK(e.size() == 4);
}
