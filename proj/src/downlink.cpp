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

#include "dcaa/downlink.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dcaa
{
    namespace
    {
        arma::cx_vec hermitian_solve(const arma::cx_mat &C, const arma::cx_vec &b)
        {
            arma::cx_mat R;
            if (!arma::chol(R, 0.5 * (C + C.t())))
                throw NumericalError("Downlink: precoder covariance is not positive definite.");
            const arma::cx_vec y = arma::solve(arma::trimatl(R.t()), b);
            return arma::solve(arma::trimatu(R), y);
        }

        double sum_log2(const arma::vec &sinr)
        {
            double r = 0.0;
            for (double s : sinr)
                r += std::log2(1.0 + s);
            return r;
        }
    }

    std::vector<arma::cx_vec> dual_mmse_precoders(const DualLink &link, const arma::vec &p)
    {
        const int K = link.users();
        if (int(p.n_elem) != K)
            throw std::invalid_argument("dual_mmse_precoders: one power per user expected.");
        if (!(link.noise > 0.0))
            throw std::invalid_argument("dual_mmse_precoders: noise must be positive.");
        std::vector<arma::cx_vec> W((size_t)K);
        for (int k = 0; k < K; ++k)
        {
            const arma::cx_vec &g = link.features[(size_t)k];
            arma::cx_mat C(g.n_elem, g.n_elem, arma::fill::zeros);
            for (int i = 0; i < K; ++i)
                if (i != k && link.interferes(k, i))
                {
                    const arma::cx_vec &gi = link.features[(size_t)i];
                    C += p[i] * gi * gi.t();
                }
            C.diag() += link.noise;
            arma::cx_vec w = hermitian_solve(C, g);
            const double n = arma::norm(w);
            W[(size_t)k] = n > 0.0 ? arma::cx_vec(w / n) : w;
        }
        return W;
    }

    arma::mat coupling_gains(const DualLink &link, const std::vector<arma::cx_vec> &precoders)
    {
        const int K = link.users();
        arma::mat G((size_t)K, (size_t)K, arma::fill::zeros);
        for (int k = 0; k < K; ++k)
            for (int i = 0; i < K; ++i)
                if (link.interferes(k, i))
                    G(k, i) = std::norm(arma::cdot(link.features[(size_t)k], precoders[(size_t)i]));
        return G;
    }

    arma::vec sinr_from_gains(const arma::mat &gains, const arma::vec &p, double noise)
    {
        arma::vec out(p.n_elem);
        for (arma::uword k = 0; k < p.n_elem; ++k)
        {
            const double sig = p[k] * gains(k, k);
            if (sig == 0.0)
            {
                out[k] = 0.0;
                continue;
            }
            double den = noise;
            for (arma::uword i = 0; i < p.n_elem; ++i)
                if (i != k)
                    den += p[i] * gains(k, i);
            out[k] = sig / den;
        }
        return out;
    }

    arma::vec waterfill_levels(const arma::vec &gain, const arma::vec &interference_plus_noise, double total,
                               WaterfillMode mode)
    {
        const arma::uword K = gain.n_elem;
        if (interference_plus_noise.n_elem != K || K == 0)
            throw std::invalid_argument("waterfill_levels: size mismatch.");
        if (!(total > 0.0))
            throw std::invalid_argument("waterfill_levels: total power must be positive.");

        // Offsets Z_k / g_k; users with zero gain can never be served.
        std::vector<arma::uword> live;
        arma::vec offset(K);
        offset.fill(std::numeric_limits<double>::infinity());
        for (arma::uword k = 0; k < K; ++k)
            if (gain[k] > 0.0)
            {
                offset[k] = interference_plus_noise[k] / gain[k];
                live.push_back(k);
            }
        if (live.empty())
            throw DegenerateChannel("waterfill: every effective gain is zero.");

        double mu = 0.0;
        if (mode == WaterfillMode::rescale)
        {
            double s = 0.0;
            for (arma::uword k : live)
                s += offset[k];
            mu = (total + s) / double(live.size());
        }
        else
        {
            std::stable_sort(live.begin(), live.end(), [&](arma::uword a, arma::uword b) { return offset[a] < offset[b]; });
            double prefix = 0.0;
            for (std::size_t n = 0; n < live.size(); ++n)
            {
                prefix += offset[live[n]];
                const double level = (total + prefix) / double(n + 1);
                if (n + 1 == live.size() || level <= offset[live[n + 1]])
                {
                    mu = level;
                    break;
                }
            }
        }

        arma::vec p(K, arma::fill::zeros);
        for (arma::uword k : live)
            p[k] = std::max(mu - offset[k], 0.0);
        const double s = arma::accu(p);
        if (!(s > 0.0))
            throw DegenerateChannel("waterfill: no user left above the water level.");
        for (arma::uword k = 0; k < K; ++k)
            p[k] = total * (p[k] / s);
        return p;
    }

    LinkReport iterate_power(DualLink link, double total_power, const PowerIterationOptions &opts,
                             const std::function<DualLink(const arma::vec &)> &refresh)
    {
        const int K = link.users();
        if (K < 1)
            throw std::invalid_argument("iterate_power: need at least one user.");
        if (!(total_power > 0.0) || opts.t_max < 1 || !(opts.eps_th > 0.0))
            throw std::invalid_argument("iterate_power: need P > 0, t_max >= 1 and eps_th > 0.");

        arma::vec p_prev((size_t)K);
        p_prev.fill(total_power / double(K));

        LinkReport rep;
        {
            const auto W0 = dual_mmse_precoders(link, p_prev);
            rep.initial_sum_rate = sum_log2(sinr_from_gains(coupling_gains(link, W0), p_prev, link.noise));
        }

        struct Iterate
        {
            std::vector<arma::cx_vec> W;
            arma::vec p, sinr;
            double rate = -1.0;
        };
        Iterate best, last;
        rep.converged = false;
        for (int t = 1; t <= opts.t_max; ++t)
        {
            if (refresh)
                link = refresh(p_prev);
            last.W = dual_mmse_precoders(link, p_prev);
            const arma::mat G = coupling_gains(link, last.W);
            arma::vec z((size_t)K);
            for (int k = 0; k < K; ++k)
            {
                double acc = link.noise;
                for (int j = 0; j < K; ++j)
                    if (j != k)
                        acc += p_prev[j] * G(k, j);
                z[k] = acc;
            }
            last.p = waterfill_levels(G.diag(), z, total_power, opts.mode);
            last.sinr = sinr_from_gains(G, last.p, link.noise);
            last.rate = sum_log2(last.sinr);

            const double change = arma::accu(arma::abs(last.p - p_prev));
            rep.trace.push_back(last.rate);
            rep.p_change.push_back(change);
            rep.iterations = t;
            if (last.rate > best.rate)
                best = last;
            p_prev = last.p;
            if (change < opts.eps_th)
            {
                rep.converged = true;
                break;
            }
        }

        const Iterate &out = rep.converged ? last : best;
        rep.beamformers = out.W;
        rep.power = arma::conv_to<std::vector<double>>::from(out.p);
        rep.per_user_sinr = arma::conv_to<std::vector<double>>::from(out.sinr);
        finalize_rates(rep);
        return rep;
    }

    void DownlinkScenario::validate() const
    {
        if (channels.empty())
            throw std::invalid_argument("DownlinkScenario: need at least one user.");
        for (const auto &h : channels)
            if (h.n_elem != channels.front().n_elem || h.n_elem == 0)
                throw std::invalid_argument("DownlinkScenario: channels must share a nonzero length.");
        if (!(total_power > 0.0) || !(sigma2 > 0.0) || elements < 1)
            throw std::invalid_argument("DownlinkScenario: need P_DL > 0, sigma2 > 0 and M >= 1.");
        if (t_max < 1 || !(eps_th > 0.0))
            throw std::invalid_argument("DownlinkScenario: need t_max >= 1 and eps_th > 0.");
    }

    DualLink dual_link(const SelectionMatrix &S, const DownlinkScenario &scen)
    {
        scen.validate();
        if (S.n_ports() != scen.ports())
            throw std::invalid_argument("dual_link: selection and channel sizes differ.");
        DualLink link;
        for (const auto &h : scen.channels)
            link.features.push_back(S.apply(arma::conj(h)));
        link.noise = double(scen.elements) * scen.sigma2;
        return link;
    }

    UplinkScenario dual_uplink(const DownlinkScenario &scen, const arma::vec &p)
    {
        UplinkScenario up;
        for (const auto &h : scen.channels)
            up.channels.push_back(arma::conj(h));
        for (double v : p)
            up.transmit_snr.push_back(v / scen.sigma2);
        up.elements = scen.elements;
        up.sigma2 = scen.sigma2;
        return up;
    }

    arma::cx_vec mmse_precoder(const SelectionMatrix &S, const DownlinkScenario &scen, const std::vector<double> &p,
                               int k)
    {
        if (k < 0 || k >= scen.users())
            throw std::out_of_range("mmse_precoder: user index out of range.");
        const DualLink link = dual_link(S, scen);
        return dual_mmse_precoders(link, arma::vec(p))[(size_t)k];
    }

    double sinr_downlink(const SelectionMatrix &S, const std::vector<arma::cx_vec> &precoders,
                         const DownlinkScenario &scen, const std::vector<double> &p, int k)
    {
        scen.validate();
        const double invM = 1.0 / double(scen.elements);
        const arma::cx_vec &h = scen.channels.at((size_t)k);
        const double sig = invM * p.at((size_t)k) * std::norm(arma::dot(h, S.scatter(precoders.at((size_t)k))));
        if (sig == 0.0)
            return 0.0;
        double den = scen.sigma2;
        for (int i = 0; i < scen.users(); ++i)
            if (i != k)
                den += invM * p.at((size_t)i) * std::norm(arma::dot(h, S.scatter(precoders.at((size_t)i))));
        return sig / den;
    }

    std::vector<double> waterfill(const SelectionMatrix &S, const std::vector<arma::cx_vec> &precoders,
                                  const DownlinkScenario &scen, const std::vector<double> &p_prev, WaterfillMode mode)
    {
        const DualLink link = dual_link(S, scen);
        if (int(p_prev.size()) != link.users() || int(precoders.size()) != link.users())
            throw std::invalid_argument("waterfill: one power and one precoder per user expected.");
        const arma::mat G = coupling_gains(link, precoders);
        arma::vec z(p_prev.size());
        for (int k = 0; k < link.users(); ++k)
        {
            double acc = link.noise;
            for (int j = 0; j < link.users(); ++j)
                if (j != k)
                    acc += p_prev[(size_t)j] * G(k, j);
            z[k] = acc;
        }
        return arma::conv_to<std::vector<double>>::from(waterfill_levels(G.diag(), z, scen.total_power, mode));
    }

    SelectionMatrix greedy_selection_rule(const UplinkScenario &scen, int n_rf)
    {
        return SelectionMatrix(scen.ports(), greedy_select(scen, n_rf).selection);
    }

    LinkReport optimize_downlink(const DownlinkScenario &scen, int n_rf, const DownlinkOptions &opts)
    {
        scen.validate();
        if (n_rf < 1 || n_rf > scen.ports())
            throw std::invalid_argument("optimize_downlink: n_rf must lie in [1, 2N].");
        const SelectionRule select = opts.selector ? opts.selector : SelectionRule(greedy_selection_rule);

        arma::vec p0(std::size_t(scen.users()));
        p0.fill(scen.total_power / double(scen.users()));
        SelectionMatrix S = select(dual_uplink(scen, p0), n_rf);

        PowerIterationOptions po;
        po.t_max = scen.t_max;
        po.eps_th = scen.eps_th;
        po.mode = opts.mode;
        std::function<DualLink(const arma::vec &)> refresh;
        if (opts.update_selection)
            refresh = [&](const arma::vec &p) {
                S = select(dual_uplink(scen, p), n_rf);
                return dual_link(S, scen);
            };
        LinkReport rep = iterate_power(dual_link(S, scen), scen.total_power, po, refresh);
        rep.selection = S.omega();
        return rep;
    }

    std::vector<double> simulate_downlink_symbols(const SelectionMatrix &S, const std::vector<arma::cx_vec> &precoders,
                                                  const DownlinkScenario &scen, const std::vector<double> &p,
                                                  int n_symbols, RngStream &rng)
    {
        if (scen.channels.empty() || scen.elements < 1 || !(scen.sigma2 >= 0.0))
            throw std::invalid_argument("simulate_downlink_symbols: malformed scenario.");
        if (n_symbols < 1)
            throw std::invalid_argument("simulate_downlink_symbols: need at least one symbol.");
        const int K = scen.users();
        if (int(p.size()) != K || int(precoders.size()) != K)
            throw std::invalid_argument("simulate_downlink_symbols: one power and one precoder per user expected.");

        // Port-domain precoders S^T w_i, with the splitter factor.
        const double split = std::sqrt(1.0 / double(scen.elements));
        arma::cx_mat X_ports(std::size_t(scen.ports()), (size_t)K);
        for (int i = 0; i < K; ++i)
            X_ports.col(i) = split * S.scatter(precoders[(size_t)i]);
        arma::cx_mat Hrows((size_t)K, std::size_t(scen.ports()));
        for (int k = 0; k < K; ++k)
            Hrows.row(k) = scen.channels[(size_t)k].st();
        const arma::cx_mat B = Hrows * X_ports; // B(k, i) = sqrt(1/M) h_k^T S^T w_i

        arma::cx_mat Y((size_t)K, (size_t)n_symbols);
        arma::cx_mat Xs((size_t)K, (size_t)n_symbols);
        arma::cx_vec s((size_t)K);
        for (int t = 0; t < n_symbols; ++t)
        {
            for (int i = 0; i < K; ++i)
                s[i] = complex_normal(rng, p[(size_t)i]);
            const arma::cx_vec y = B * s;
            for (int k = 0; k < K; ++k)
                Y(k, t) = y[k] + (scen.sigma2 > 0.0 ? complex_normal(rng, scen.sigma2) : 0.0);
            Xs.col(t) = s;
        }
        return estimate_sinr(Y, Xs, arma::vec(p));
    }
}
