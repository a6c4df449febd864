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
#include "dcaa/benchmark_ula.hpp"

#include <algorithm>

using namespace dcaa;

namespace
{
    UlaScenario random_scenario(oracle::Gen &g, int M, const std::vector<int> &sectors)
    {
        UlaScenario s;
        s.elements = M;
        s.sectors = sectors;
        for (std::size_t k = 0; k < sectors.size(); ++k)
            s.channels.push_back(g.cvec(M));
        return s;
    }
}

TEST_CASE("sectors: half-open intervals")
{
    CHECK(sector_of(0.0) == 2);
    CHECK(sector_of(-kPi / 2) == 1);
    CHECK(sector_of(2 * kPi / 3) == 3);
    CHECK(sector_of(-kPi / 3) == 1);
    CHECK(sector_of(std::nextafter(-kPi / 3, 0.0)) == 2);
    CHECK(sector_of(kPi / 3) == 2);
    CHECK(sector_of(std::nextafter(kPi / 3, 4.0)) == 3);
    CHECK(sector_of(kPi) == 3);
    CHECK(sector_of(-kPi) == 3); // wraps to +pi
    CHECK(sector_of(std::nextafter(-kPi, 0.0)) == 1);
    CHECK(sector_of(2 * kPi) == 2);
    oracle::Gen g(1);
    int counts[4] = {0, 0, 0, 0};
    for (int t = 0; t < 30000; ++t)
        ++counts[sector_of(g.uniform(-kPi, kPi))];
    for (int s = 1; s <= 3; ++s)
        CHECK(std::abs(counts[s] - 10000) < 400);
}

TEST_CASE("DFT matrix and codebooks")
{
    for (int M : {1, 2, 7, 64, 128})
    {
        const arma::cx_mat U = dft_matrix(M);
        CHECK(arma::norm(U * U.t() - arma::eye<arma::cx_mat>((size_t)M, (size_t)M), "fro") < 1e-12 * M);
        const double s = 1.0 / std::sqrt(double(M));
        for (int l = 0; l < M; l += std::max(1, M / 8))
            for (int m = 0; m < M; m += std::max(1, M / 5))
                CHECK(std::abs(U(l, m) - std::polar(s, -2.0 * kPi * double(l) * double(m) / M)) < 1e-12);
    }
    const DftCodebook cb = make_codebook(16, {3, 0, 9});
    CHECK(cb.n_rf() == 3);
    CHECK(arma::norm(cb.F * cb.F.t() - arma::eye<arma::cx_mat>(3, 3), "fro") < 1e-12);
    CHECK(arma::norm(cb.F.row(0) - dft_matrix(16).row(3)) == 0.0);
    for (arma::uword r = 0; r < 3; ++r)
        CHECK(arma::norm(cb.F.row(r)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(make_codebook(4, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(make_codebook(4, {4}), std::invalid_argument);
    CHECK_THROWS_AS(dft_matrix(0), std::invalid_argument);
}

TEST_CASE("beam selection")
{
    oracle::Gen g(2);
    // Single user, single beam: the strongest DFT projection.
    for (int t = 0; t < 30; ++t)
    {
        const arma::cx_vec h = g.cvec(16);
        const DftCodebook cb = select_dft_beams({h}, {2.0}, 1.0, 1);
        const arma::uword best = arma::index_max(arma::abs(dft_matrix(16) * h));
        CHECK(cb.beams[0] == int(best));
    }
    // Full codebook.
    const DftCodebook all = select_dft_beams({g.cvec(8), g.cvec(8)}, {1.0, 1.0}, 1.0, 8);
    std::vector<int> b = all.beams;
    std::sort(b.begin(), b.end());
    CHECK(b == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
    // Nondecreasing trace.
    for (int t = 0; t < 30; ++t)
    {
        std::vector<double> trace;
        select_dft_beams({g.cvec(32), g.cvec(32), g.cvec(32)}, {5.0, 1.0, 20.0}, 1.0, 6, &trace);
        REQUIRE(trace.size() == 6);
        for (std::size_t i = 1; i < trace.size(); ++i)
            CHECK(trace[i] >= trace[i - 1] - 1e-12 * trace[i]);
    }
    CHECK_THROWS_AS(select_dft_beams({g.cvec(4)}, {1.0}, 1.0, 5), std::invalid_argument);
}

TEST_CASE("uplink combiner: matched filter, scale invariance, optimality")
{
    oracle::Gen g(3);
    const DftCodebook cb = make_codebook(8, {0, 2, 5});
    const arma::cx_vec h = g.cvec(8);
    const arma::cx_vec w = mmse_ula_uplink(cb.F, {h}, {3.0}, 1.0, 0);
    const arma::cx_vec fh = cb.F * h;
    CHECK(std::abs(arma::cdot(w, fh)) == doctest::Approx(arma::norm(w) * arma::norm(fh)).epsilon(1e-12));
    CHECK(arma::norm(w - 3.0 * fh) < 1e-12 * arma::norm(w));

    for (int t = 0; t < 20; ++t)
    {
        const std::vector<arma::cx_vec> H = {g.cvec(8), g.cvec(8)};
        const std::vector<double> P = {g.uniform(0.5, 10), g.uniform(0.5, 10)};
        for (int k = 0; k < 2; ++k)
        {
            const arma::cx_vec wk = mmse_ula_uplink(cb.F, H, P, 1.0, k);
            const double best = sinr_ula_uplink(cb.F, wk, H, P, 1.0, k);
            CHECK(sinr_ula_uplink(cb.F, std::complex<double>(-2.5, 0.7) * wk, H, P, 1.0, k) ==
                  doctest::Approx(best).epsilon(1e-12));
            double top = 0;
            for (int i = 0; i < 10000; ++i)
                top = std::max(top, sinr_ula_uplink(cb.F, g.unit_cvec(3), H, P, 1.0, k));
            CHECK(best >= top * (1 - 1e-12));
        }
    }
}

TEST_CASE("uplink: hand-evaluated two-user sector")
{
    UlaScenario s;
    s.elements = 2;
    s.sectors = {2, 2};
    s.channels = {arma::cx_vec{1.0, 1.0}, arma::cx_vec{1.0, 0.0}};
    const LinkReport r = uplink_ula(s, {1.0, 1.0});
    // With the full unitary codebook: SINR_1 = h1^H diag(1/2, 1) h1 = 3/2,
    // SINR_2 = h2^H [[2,1],[1,2]]^{-1} h2 = 2/3.
    CHECK(r.per_user_sinr[0] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(r.per_user_sinr[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(r.sum_rate == doctest::Approx(std::log2(2.5) + std::log2(5.0 / 3.0)).epsilon(1e-12));
    std::vector<int> sel = r.selection;
    std::sort(sel.begin(), sel.end());
    CHECK(sel == std::vector<int>{2, 3});
}

TEST_CASE("uplink: sectors are isolated")
{
    oracle::Gen g(4);
    UlaScenario s = random_scenario(g, 16, {1, 2, 2, 3});
    const std::vector<double> snr = {4.0, 4.0, 4.0, 4.0};
    const LinkReport a = uplink_ula(s, snr);
    CHECK(a.selection.size() == 4);
    // Users alone in their sector see no interference.
    for (int k : {0, 3})
    {
        const arma::cx_vec fh = dft_matrix(16).row(std::size_t(a.selection[k == 0 ? 0 : 3] % 16)) * s.channels[(size_t)k];
        CHECK(a.per_user_sinr[(size_t)k] == doctest::Approx(4.0 * std::norm(fh[0])).epsilon(1e-12));
    }
    // Replacing a sector-1 channel leaves sector 2 untouched.
    s.channels[0] = 100.0 * g.cvec(16);
    const LinkReport b = uplink_ula(s, snr);
    CHECK(b.per_user_sinr[1] == a.per_user_sinr[1]);
    CHECK(b.per_user_sinr[2] == a.per_user_sinr[2]);

    UlaScenario zero = s;
    for (auto &h : zero.channels)
        h.zeros();
    CHECK(uplink_ula(zero, snr).sum_rate == 0.0);
    CHECK_THROWS_AS(uplink_ula(s, {1.0}), std::invalid_argument);
}

TEST_CASE("downlink: coupling is zero across sectors")
{
    oracle::Gen g(5);
    const UlaScenario s = random_scenario(g, 8, {1, 2, 2, 3, 1});
    const std::vector<double> p(5, 2.0);
    const auto cbs = ula_downlink_codebooks(s, p);
    CHECK(cbs[0].n_rf() == 2);
    CHECK(cbs[1].n_rf() == 2);
    CHECK(cbs[2].n_rf() == 1);
    const DualLink link = ula_dual_link(s, cbs);
    CHECK(link.noise == s.sigma2);
    const auto W = dual_mmse_precoders(link, arma::vec(p));
    const arma::mat G = coupling_gains(link, W);
    for (int k = 0; k < 5; ++k)
        for (int i = 0; i < 5; ++i)
            if (s.sectors[(size_t)k] != s.sectors[(size_t)i])
                CHECK(G(k, i) == 0.0);
    const arma::vec sinr = sinr_from_gains(G, arma::vec(p), link.noise);
    for (int k = 0; k < 5; ++k)
        CHECK(sinr[k] == doctest::Approx(sinr_ula_downlink(s, cbs, W, p, k)).epsilon(1e-12));
}

TEST_CASE("downlink: single user and power budget")
{
    oracle::Gen g(6);
    const UlaScenario one = random_scenario(g, 8, {3});
    const LinkReport r = downlink_ula(one, 5.0);
    CHECK(r.power[0] == 5.0);
    CHECK(r.iterations == 1);

    for (int t = 0; t < 30; ++t)
    {
        const UlaScenario s = random_scenario(g, 16, {1, 1, 2, 3, 3, 3});
        const LinkReport d = downlink_ula(s, 60.0);
        double sum = 0;
        for (double p : d.power)
        {
            CHECK(p >= 0.0);
            sum += p;
        }
        CHECK(sum == doctest::Approx(60.0).epsilon(1e-9));
        CHECK(d.iterations <= 10);
        CHECK(d.selection.size() == 6);
    }
}

TEST_CASE("downlink: symbol-level simulation matches the closed form")
{
    oracle::Gen g(7);
    for (int t = 0; t < 2; ++t)
    {
        const UlaScenario s = random_scenario(g, 8, {1, 2, 2, 2});
        const std::vector<double> p = {2.0, 3.0, 1.0, 4.0};
        const auto cbs = ula_downlink_codebooks(s, p);
        const auto W = dual_mmse_precoders(ula_dual_link(s, cbs), arma::vec(p));
        RngStream rng(8, (std::uint64_t)t);
        const auto mc = simulate_ula_downlink_symbols(s, cbs, W, p, 100000, rng);
        for (int k = 0; k < 4; ++k)
        {
            const double cf = sinr_ula_downlink(s, cbs, W, p, k);
            CHECK(std::fabs(mc[(size_t)k] - cf) / cf < 0.02);
        }
    }
}
