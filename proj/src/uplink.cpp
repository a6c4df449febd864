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

#include "dcaa/uplink.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dcaa
{
    void UplinkScenario::validate() const
    {
        if (channels.empty())
            throw std::invalid_argument("UplinkScenario: need at least one user.");
        if (transmit_snr.size() != channels.size())
            throw std::invalid_argument("UplinkScenario: one transmit SNR per user expected.");
        for (const auto &h : channels)
            if (h.n_elem != channels.front().n_elem || h.n_elem == 0)
                throw std::invalid_argument("UplinkScenario: channels must share a nonzero length.");
        for (double s : transmit_snr)
            if (!(s >= 0.0))
                throw std::invalid_argument("UplinkScenario: transmit SNR must be nonnegative.");
        if (elements < 1 || !(sigma2 > 0.0))
            throw std::invalid_argument("UplinkScenario: need M >= 1 and sigma2 > 0.");
    }

    arma::cx_mat UplinkScenario::channel_matrix() const
    {
        arma::cx_mat H(std::size_t(ports()), channels.size());
        for (std::size_t k = 0; k < channels.size(); ++k)
            H.col(k) = channels[k];
        return H;
    }

    arma::vec UplinkScenario::powers() const
    {
        return arma::vec(transmit_snr) * sigma2;
    }

    namespace
    {
        void check(const SelectionMatrix &S, const UplinkScenario &scen)
        {
            scen.validate();
            if (S.n_ports() != scen.ports())
                throw std::invalid_argument("Uplink: selection and channel sizes differ.");
        }

        // C_k = S (sum_{i != k} P_i h_i h_i^H + M sigma2 I) S^T
        arma::cx_mat interference_covariance(const SelectionMatrix &S, const UplinkScenario &scen, int k)
        {
            const arma::vec P = scen.powers();
            arma::cx_mat C(std::size_t(S.n_rf()), std::size_t(S.n_rf()), arma::fill::zeros);
            for (int i = 0; i < scen.users(); ++i)
            {
                if (i == k)
                    continue;
                const arma::cx_vec g = S.apply(scen.channels[(size_t)i]);
                C += P[i] * g * g.t();
            }
            C.diag() += scen.port_noise();
            return 0.5 * (C + C.t());
        }

        arma::cx_vec hermitian_solve(const arma::cx_mat &C, const arma::cx_vec &b)
        {
            arma::cx_mat R;
            if (!arma::chol(R, C))
                throw NumericalError("Uplink: interference covariance is not positive definite.");
            const arma::cx_vec y = arma::solve(arma::trimatl(R.t()), b);
            return arma::solve(arma::trimatu(R), y);
        }

        LinkReport report_from_picks(const UplinkScenario &scen, const std::vector<int> &picks)
        {
            LinkReport rep = evaluate_uplink(SelectionMatrix(scen.ports(), picks), scen);
            rep.selection = picks;
            return rep;
        }
    }

    std::complex<double> complex_normal(RngStream &rng, double variance)
    {
        const double s = std::sqrt(0.5 * variance);
        const double re = rng.normal(0.0, s);
        const double im = rng.normal(0.0, s);
        return {re, im};
    }

    arma::cx_vec mmse_combiner(const SelectionMatrix &S, const UplinkScenario &scen, int k)
    {
        check(S, scen);
        if (k < 0 || k >= scen.users())
            throw std::out_of_range("mmse_combiner: user index out of range.");
        const arma::cx_vec g = S.apply(scen.channels[(size_t)k]);
        arma::cx_vec w = hermitian_solve(interference_covariance(S, scen, k), g);
        const double n = arma::norm(w);
        if (n == 0.0)
            return arma::cx_vec(std::size_t(S.n_rf()), arma::fill::zeros);
        return w / n;
    }

    double sinr_uplink(const SelectionMatrix &S, const std::vector<arma::cx_vec> &combiners, const UplinkScenario &scen,
                       int k)
    {
        check(S, scen);
        const arma::cx_vec &w = combiners.at((size_t)k);
        const double sig = scen.transmit_snr[(size_t)k] * std::norm(arma::cdot(w, S.apply(scen.channels[(size_t)k])));
        if (sig == 0.0)
            return 0.0;
        double den = double(scen.elements) * std::pow(arma::norm(w), 2);
        for (int i = 0; i < scen.users(); ++i)
            if (i != k)
                den += scen.transmit_snr[(size_t)i] * std::norm(arma::cdot(w, S.apply(scen.channels[(size_t)i])));
        return sig / den;
    }

    double sum_rate_uplink(const SelectionMatrix &S, const UplinkScenario &scen)
    {
        check(S, scen);
        const arma::vec P = scen.powers();
        double rate = 0.0;
        for (int k = 0; k < scen.users(); ++k)
        {
            const arma::cx_vec g = S.apply(scen.channels[(size_t)k]);
            const arma::cx_vec x = hermitian_solve(interference_covariance(S, scen, k), g);
            rate += std::log2(1.0 + P[k] * std::real(arma::cdot(g, x)));
        }
        return rate;
    }

    LinkReport evaluate_uplink(const SelectionMatrix &S, const UplinkScenario &scen)
    {
        check(S, scen);
        LinkReport rep;
        rep.selection = S.omega();
        for (int k = 0; k < scen.users(); ++k)
            rep.beamformers.push_back(mmse_combiner(S, scen, k));
        for (int k = 0; k < scen.users(); ++k)
            rep.per_user_sinr.push_back(sinr_uplink(S, rep.beamformers, scen, k));
        finalize_rates(rep);
        return rep;
    }

    double sum_rate_uplink_explicit(const SelectionMatrix &S, const UplinkScenario &scen)
    {
        return evaluate_uplink(S, scen).sum_rate;
    }

    LinkReport greedy_select(const UplinkScenario &scen, int n_rf)
    {
        scen.validate();
        if (n_rf < 1 || n_rf > scen.ports())
            throw std::invalid_argument("greedy_select: n_rf must lie in [1, 2N].");
        const GreedyResult g = greedy_subset(scen.channel_matrix(), scen.powers(), scen.port_noise(), n_rf);
        LinkReport rep = report_from_picks(scen, g.picks);
        rep.trace = g.trace;
        return rep;
    }

    LinkReport exhaustive_select(const UplinkScenario &scen, int n_rf)
    {
        scen.validate();
        if (n_rf < 1 || n_rf > scen.ports())
            throw std::invalid_argument("exhaustive_select: n_rf must lie in [1, 2N].");
        const GreedyResult g = exhaustive_subset(scen.channel_matrix(), scen.powers(), scen.port_noise(), n_rf);
        LinkReport rep = report_from_picks(scen, g.picks);
        rep.trace = g.trace;
        return rep;
    }

    std::vector<double> simulate_uplink_symbols(const SelectionMatrix &S, const std::vector<arma::cx_vec> &combiners,
                                                const UplinkScenario &scen,
                                                const std::vector<arma::cx_vec> &port_phases, int n_symbols,
                                                RngStream &rng)
    {
        check(S, scen);
        if (n_symbols < 1)
            throw std::invalid_argument("simulate_uplink_symbols: need at least one symbol.");
        if (int(port_phases.size()) != scen.ports())
            throw std::invalid_argument("simulate_uplink_symbols: one phasor set per port expected.");
        for (int p : S.omega())
            if (int(port_phases[(size_t)p].n_elem) != scen.elements)
                throw std::invalid_argument("simulate_uplink_symbols: phasor sets must have M entries.");

        const int K = scen.users();
        const int R = S.n_rf();
        const arma::vec P = scen.powers();
        // Combined per-user gains b(k, i) = w_k^H S h_i.
        arma::cx_mat b((size_t)K, (size_t)K);
        for (int k = 0; k < K; ++k)
            for (int i = 0; i < K; ++i)
                b(k, i) = arma::cdot(combiners.at((size_t)k), S.apply(scen.channels[(size_t)i]));

        arma::cx_mat Y((size_t)K, (size_t)n_symbols);
        arma::cx_mat X((size_t)K, (size_t)n_symbols);
        arma::cx_vec s((size_t)K);
        arma::cx_vec port_noise((size_t)R);
        for (int t = 0; t < n_symbols; ++t)
        {
            for (int i = 0; i < K; ++i)
                s[i] = complex_normal(rng, P[i]);
            for (int r = 0; r < R; ++r)
            {
                const arma::cx_vec &ph = port_phases[std::size_t(S.omega()[(size_t)r])];
                std::complex<double> acc = 0.0;
                for (int m = 0; m < scen.elements; ++m)
                    acc += ph[m] * complex_normal(rng, scen.sigma2);
                port_noise[r] = acc;
            }
            for (int k = 0; k < K; ++k)
                Y(k, t) = arma::cdot(combiners[(size_t)k], port_noise) + arma::dot(b.row(k), s);
            X.col(t) = s;
        }
        return estimate_sinr(Y, X, P);
    }

    std::vector<double> estimate_sinr(const arma::cx_mat &received, const arma::cx_mat &symbols, const arma::vec &powers)
    {
        if (received.n_rows != symbols.n_rows || received.n_cols != symbols.n_cols || powers.n_elem != received.n_rows)
            throw std::invalid_argument("estimate_sinr: shape mismatch.");
        const double n = double(received.n_cols);
        std::vector<double> out(received.n_rows);
        for (arma::uword k = 0; k < received.n_rows; ++k)
        {
            const arma::cx_rowvec y = received.row(k);
            const arma::cx_rowvec x = symbols.row(k);
            const double ex = arma::accu(arma::square(arma::abs(x)));
            if (ex == 0.0)
            {
                out[k] = 0.0;
                continue;
            }
            const std::complex<double> a = arma::cdot(x, y) / ex;
            const double resid = arma::accu(arma::square(arma::abs(y - a * x))) / n;
            const double signal = std::norm(a) * powers[k];
            out[k] = resid > 1e-20 * signal ? signal / resid : std::numeric_limits<double>::infinity();
        }
        return out;
    }
}
