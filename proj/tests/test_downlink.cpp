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
#include "dcaa/downlink.hpp"

#include <algorithm>
#include <numeric>

using namespace dcaa;

namespace
{
    DownlinkScenario random_scenario(oracle::Gen &g, int ports, int users, int M, double total)
    {
        DownlinkScenario s;
        s.elements = M;
        s.total_power = total;
        for (int k = 0; k < users; ++k)
            s.channels.push_back(g.cvec(ports));
        return s;
    }

    double sum_rate(const SelectionMatrix &S, const std::vector<arma::cx_vec> &W, const DownlinkScenario &s,
                    const std::vector<double> &p)
    {
        double r = 0;
        for (int k = 0; k < s.users(); ++k)
            r += std::log2(1 + sinr_downlink(S, W, s, p, k));
        return r;
    }
}

TEST_CASE("waterfilling: closed cases")
{
    // One user takes everything.
    CHECK(waterfill_levels(arma::vec{2.0}, arma::vec{0.7}, 5.0)[0] == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(waterfill_levels(arma::vec{2.0}, arma::vec{0.7}, 5.0, WaterfillMode::rescale)[0] ==
          doctest::Approx(5.0).epsilon(1e-15));

    // Identical users split evenly.
    const arma::vec even = waterfill_levels(arma::vec{1.5, 1.5}, arma::vec{0.3, 0.3}, 4.0);
    CHECK(even[0] == doctest::Approx(2.0));
    CHECK(even[1] == doctest::Approx(2.0));

    // Unequal offsets: mu = (P + sum offsets) / K when every user stays active.
    const arma::vec p = waterfill_levels(arma::vec{1.0, 2.0}, arma::vec{1.0, 1.0}, 3.0);
    const double mu = (3.0 + 1.0 + 0.5) / 2;
    CHECK(p[0] == doctest::Approx(mu - 1.0));
    CHECK(p[1] == doctest::Approx(mu - 0.5));

    // A weak user drops out; active-set keeps the exact level, rescale scales the survivors.
    const arma::vec g3 = {1.0, 1.0, 0.01}, z3 = {0.1, 0.1, 1.0};
    const arma::vec a = waterfill_levels(g3, z3, 1.0);
    CHECK(a[2] == 0.0);
    CHECK(a[0] == doctest::Approx(0.5));
    const arma::vec r = waterfill_levels(g3, z3, 1.0, WaterfillMode::rescale);
    CHECK(r[2] == 0.0);
    CHECK(arma::accu(r) == doctest::Approx(1.0).epsilon(1e-12));

    // Zero gain users get nothing.
    const arma::vec zg = waterfill_levels(arma::vec{0.0, 1.0}, arma::vec{1.0, 1.0}, 2.0);
    CHECK(zg[0] == 0.0);
    CHECK(zg[1] == doctest::Approx(2.0));

    CHECK_THROWS_AS(waterfill_levels(arma::vec{0.0, 0.0}, arma::vec{1.0, 1.0}, 1.0), DegenerateChannel);
    CHECK_THROWS_AS(waterfill_levels(arma::vec{1.0}, arma::vec{1.0, 1.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(waterfill_levels(arma::vec{1.0}, arma::vec{1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("waterfilling: power conservation on random inputs")
{
    oracle::Gen g(1);
    for (int t = 0; t < 2000; ++t)
    {
        const int K = g.integer(1, 12);
        arma::vec gain((size_t)K), z((size_t)K);
        for (int k = 0; k < K; ++k)
        {
            gain[k] = std::exp(g.uniform(-8, 4));
            z[k] = std::exp(g.uniform(-3, 3));
        }
        const double P = std::exp(g.uniform(-3, 6));
        for (auto mode : {WaterfillMode::active_set, WaterfillMode::rescale})
        {
            const arma::vec p = waterfill_levels(gain, z, P, mode);
            CHECK(std::fabs(arma::accu(p) - P) <= 1e-9 * P);
            CHECK(p.min() >= 0.0);
        }
    }
}

TEST_CASE("waterfilling: matches a simplex grid search without interference")
{
    oracle::Gen g(2);
    for (int t = 0; t < 10; ++t)
    {
        const double P = g.uniform(1.0, 20.0), noise = g.uniform(0.5, 2.0);
        const arma::vec gain = {g.uniform(0.1, 3.0), g.uniform(0.1, 3.0), g.uniform(0.1, 3.0)};
        auto objective = [&](double a, double b, double c) {
            return std::log2(1 + a * gain[0] / noise) + std::log2(1 + b * gain[1] / noise) +
                   std::log2(1 + c * gain[2] / noise);
        };
        const arma::vec p = waterfill_levels(gain, arma::vec(3, arma::fill::value(noise)), P);
        const double wf = objective(p[0], p[1], p[2]);
        double grid = -1;
        const int steps = 200;
        for (int i = 0; i <= steps; ++i)
            for (int j = 0; j + i <= steps; ++j)
                grid = std::max(grid, objective(P * i / steps, P * j / steps, P * (steps - i - j) / steps));
        CHECK(wf >= grid - 1e-12);
        // The grid optimum is within one grid cell of the continuous one.
        double slope = 0;
        for (int k = 0; k < 3; ++k)
            slope = std::max(slope, gain[k] / noise / std::log(2.0));
        CHECK(wf - grid <= 2 * slope * P / steps);
    }
}

TEST_CASE("precoders: matched filter, unit norm, symmetry")
{
    oracle::Gen g(3);
    DownlinkScenario one = random_scenario(g, 8, 1, 16, 10.0);
    const SelectionMatrix S(8, {1, 4, 6});
    const arma::cx_vec w = mmse_precoder(S, one, {10.0}, 0);
    const arma::cx_vec mf = S.apply(arma::conj(one.channels[0]));
    CHECK(std::abs(std::abs(arma::cdot(w, mf)) / arma::norm(mf) - 1.0) < 1e-12);
    CHECK(sinr_downlink(S, {w}, one, {10.0}, 0) ==
          doctest::Approx(10.0 * std::norm(arma::dot(one.channels[0], S.scatter(w))) / (16 * one.sigma2)));
    CHECK(sinr_downlink(S, {w}, one, {0.0}, 0) == 0.0);

    for (int t = 0; t < 20; ++t)
    {
        const DownlinkScenario s = random_scenario(g, 10, 4, 8, 5.0);
        const SelectionMatrix T(10, {0, 1, 2, 3, 4, 5});
        const std::vector<double> p = {1.0, 2.0, 0.5, 1.5};
        for (int k = 0; k < 4; ++k)
            CHECK(arma::norm(mmse_precoder(T, s, p, k)) == doctest::Approx(1.0).epsilon(1e-12));
    }

    // Two users whose channels are port swaps of one another.
    const arma::cx_vec h1 = {std::complex<double>(0.9, 0.2), std::complex<double>(0.1, -0.4)};
    const arma::cx_vec h2 = {h1[1], h1[0]};
    DownlinkScenario sym;
    sym.channels = {h1, h2};
    sym.elements = 4;
    sym.total_power = 6.0;
    const SelectionMatrix both(2, {0, 1});
    const std::vector<double> p = {3.0, 3.0};
    const std::vector<arma::cx_vec> W = {mmse_precoder(both, sym, p, 0), mmse_precoder(both, sym, p, 1)};
    CHECK(sinr_downlink(both, W, sym, p, 0) == doctest::Approx(sinr_downlink(both, W, sym, p, 1)).epsilon(1e-12));
}

TEST_CASE("dual link gains reproduce the downlink SINR expression")
{
    oracle::Gen g(4);
    for (int t = 0; t < 30; ++t)
    {
        const DownlinkScenario s = random_scenario(g, 12, 3, 8, 4.0);
        const SelectionMatrix S(12, {0, 3, 5, 7, 11});
        const DualLink link = dual_link(S, s);
        const arma::vec p = {g.uniform(0, 2), g.uniform(0, 2), g.uniform(0, 2)};
        const auto W = dual_mmse_precoders(link, p);
        const arma::vec viagains = sinr_from_gains(coupling_gains(link, W), p, link.noise);
        const std::vector<double> pv = arma::conv_to<std::vector<double>>::from(p);
        for (int k = 0; k < 3; ++k)
            CHECK(viagains[k] == doctest::Approx(sinr_downlink(S, W, s, pv, k)).epsilon(1e-12));
    }
}

TEST_CASE("single user: one iteration, full power")
{
    oracle::Gen g(5);
    DownlinkScenario s = random_scenario(g, 10, 1, 8, 7.0);
    const LinkReport r = optimize_downlink(s, 3);
    CHECK(r.iterations == 1);
    CHECK(r.converged);
    CHECK(r.power[0] == 7.0);
}

TEST_CASE("power iteration: conservation, trace and reported iterate")
{
    oracle::Gen g(6);
    for (int t = 0; t < 40; ++t)
    {
        DownlinkScenario s = random_scenario(g, 16, 5, 8, g.uniform(1.0, 200.0));
        for (auto mode : {WaterfillMode::active_set, WaterfillMode::rescale})
        {
            DownlinkOptions o;
            o.mode = mode;
            const LinkReport r = optimize_downlink(s, 7, o);
            CHECK(std::fabs(std::accumulate(r.power.begin(), r.power.end(), 0.0) - s.total_power) <=
                  1e-9 * s.total_power);
            CHECK(*std::min_element(r.power.begin(), r.power.end()) >= 0.0);
            CHECK(r.trace.size() == (size_t)r.iterations);
            CHECK(r.p_change.size() == (size_t)r.iterations);
            CHECK(r.iterations <= s.t_max);
            if (r.converged)
            {
                CHECK(r.p_change.back() < s.eps_th);
                CHECK(r.sum_rate == doctest::Approx(r.trace.back()).epsilon(1e-12));
            }
            else
            {
                CHECK(r.iterations == s.t_max);
                CHECK(r.sum_rate == doctest::Approx(*std::max_element(r.trace.begin(), r.trace.end())).epsilon(1e-12));
            }
            // Reported SINRs are those of the reported powers and precoders.
            const SelectionMatrix S(16, r.selection);
            CHECK(sum_rate(S, r.beamformers, s, r.power) == doctest::Approx(r.sum_rate).epsilon(1e-10));
        }
    }
}

TEST_CASE("power iteration: t_max = 1 and a loose threshold")
{
    oracle::Gen g(7);
    DownlinkScenario s = random_scenario(g, 12, 4, 8, 50.0);
    s.t_max = 1;
    s.eps_th = 1e-12;
    const LinkReport a = optimize_downlink(s, 6);
    CHECK(a.iterations == 1);
    CHECK_FALSE(a.converged);

    s.t_max = 10;
    s.eps_th = 1e9;
    const LinkReport b = optimize_downlink(s, 6);
    CHECK(b.iterations == 1);
    CHECK(b.converged);

    s.t_max = 0;
    CHECK_THROWS_AS(optimize_downlink(s, 6), std::invalid_argument);
}

TEST_CASE("power iteration: converged point is a fixed point")
{
    oracle::Gen g(8);
    int checked = 0;
    for (int t = 0; t < 60; ++t)
    {
        DownlinkScenario s = random_scenario(g, 16, 4, 8, g.uniform(5.0, 100.0));
        s.t_max = 50;
        const LinkReport r = optimize_downlink(s, 6);
        if (!r.converged)
            continue;
        ++checked;
        const SelectionMatrix S(16, r.selection);
        std::vector<arma::cx_vec> W;
        for (int k = 0; k < 4; ++k)
            W.push_back(mmse_precoder(S, s, r.power, k));
        const std::vector<double> next = waterfill(S, W, s, r.power);
        double change = 0;
        for (int k = 0; k < 4; ++k)
            change += std::fabs(next[(size_t)k] - r.power[(size_t)k]);
        CHECK(change < s.eps_th);
    }
    CHECK(checked >= 50);
}

TEST_CASE("power iteration beats uniform allocation on most trials")
{
    oracle::Gen g(9);
    int wins = 0;
    for (int t = 0; t < 200; ++t)
    {
        const DownlinkScenario s = random_scenario(g, 16, 5, 8, std::pow(10.0, g.uniform(-1.0, 2.0)) * 5);
        const LinkReport r = optimize_downlink(s, 8);
        if (r.sum_rate >= r.initial_sum_rate - 1e-12)
            ++wins;
        else
            MESSAGE("trial " << t << ": " << r.sum_rate << " < uniform " << r.initial_sum_rate);
    }
    CHECK(wins >= 190);
}

TEST_CASE("initial rate is the uniform-power evaluation")
{
    oracle::Gen g(10);
    const DownlinkScenario s = random_scenario(g, 10, 3, 4, 9.0);
    const LinkReport r = optimize_downlink(s, 5);
    const SelectionMatrix S(10, r.selection);
    const std::vector<double> u(3, 3.0);
    std::vector<arma::cx_vec> W;
    for (int k = 0; k < 3; ++k)
        W.push_back(mmse_precoder(S, s, u, k));
    CHECK(r.initial_sum_rate == doctest::Approx(sum_rate(S, W, s, u)).epsilon(1e-12));
}

TEST_CASE("port selection runs once unless updating is enabled")
{
    oracle::Gen g(11);
    DownlinkScenario s = random_scenario(g, 12, 4, 8, 40.0);
    s.eps_th = 1e-9;
    int calls = 0;
    DownlinkOptions o;
    o.selector = [&](const UplinkScenario &up, int n_rf) {
        ++calls;
        return greedy_selection_rule(up, n_rf);
    };
    const LinkReport fixed = optimize_downlink(s, 6, o);
    CHECK(calls == 1);

    // The selection is made on the conjugate channels at uniform power.
    arma::vec p0(4, arma::fill::value(10.0));
    CHECK(fixed.selection == greedy_select(dual_uplink(s, p0), 6).selection);

    calls = 0;
    o.update_selection = true;
    const LinkReport upd = optimize_downlink(s, 6, o);
    CHECK(calls == 1 + upd.iterations);
}

TEST_CASE("symbol-level simulation reproduces the downlink SINR")
{
    oracle::Gen g(12);
    for (int t = 0; t < 3; ++t)
    {
        const DownlinkScenario s = random_scenario(g, 8, 3, 4, 12.0);
        const SelectionMatrix S(8, {0, 2, 3, 5, 7});
        const std::vector<double> p = {3.0, 5.0, 4.0};
        std::vector<arma::cx_vec> W;
        for (int k = 0; k < 3; ++k)
            W.push_back(mmse_precoder(S, s, p, k));
        RngStream rng(5, (std::uint64_t)t);
        const std::vector<double> mc = simulate_downlink_symbols(S, W, s, p, 100000, rng);
        for (int k = 0; k < 3; ++k)
        {
            const double cf = sinr_downlink(S, W, s, p, k);
            CHECK(std::fabs(mc[(size_t)k] - cf) / cf < 0.02);
        }
    }

    // Noise free with a single user: no residual at all.
    DownlinkScenario quiet = random_scenario(g, 4, 1, 4, 1.0);
    quiet.sigma2 = 0.0;
    const SelectionMatrix S(4, {0, 1});
    RngStream rng(6, 0);
    const std::vector<arma::cx_vec> W = {S.apply(arma::conj(quiet.channels[0])) /
                                         arma::norm(S.apply(arma::conj(quiet.channels[0])))};
    CHECK(std::isinf(simulate_downlink_symbols(S, W, quiet, {1.0}, 10000, rng)[0]));
}

TEST_CASE("scaling all powers leaves the noise-free SINR unchanged")
{
    oracle::Gen g(13);
    DownlinkScenario s = random_scenario(g, 8, 3, 4, 12.0);
    const SelectionMatrix S(8, {0, 2, 4, 6});
    const std::vector<double> p = {3.0, 5.0, 4.0};
    std::vector<arma::cx_vec> W;
    for (int k = 0; k < 3; ++k)
        W.push_back(mmse_precoder(S, s, p, k));
    s.sigma2 = 0.0;
    std::vector<double> p2 = p;
    for (double &x : p2)
        x *= 3.0;
    RngStream a(1, 1), b(1, 1);
    const auto m1 = simulate_downlink_symbols(S, W, s, p, 20000, a);
    const auto m2 = simulate_downlink_symbols(S, W, s, p2, 20000, b);
    for (int k = 0; k < 3; ++k)
        CHECK(m2[(size_t)k] == doctest::Approx(m1[(size_t)k]).epsilon(1e-9));
}
