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

#include "dcaa/benchmark_ula.hpp"
#include "dcaa/angles.hpp"
#include "dcaa/selection.hpp"
#include "dcaa/uplink.hpp"

#include <cmath>
#include <stdexcept>

namespace dcaa
{
    int sector_of(double phi)
    {
        const double x = wrap_angle(phi);
        if (x <= -kPi / 3.0)
            return 1;
        if (x <= kPi / 3.0)
            return 2;
        return 3;
    }

    arma::cx_mat dft_matrix(int elements)
    {
        if (elements < 1)
            throw std::invalid_argument("dft_matrix: need at least one element.");
        const double scale = 1.0 / std::sqrt(double(elements));
        arma::cx_mat U((size_t)elements, (size_t)elements);
        for (int l = 0; l < elements; ++l)
            for (int m = 0; m < elements; ++m)
            {
                // Reduce l*m modulo M first so the phase stays exact for large arrays.
                const long long lm = (long long)(l) * m % elements;
                U(l, m) = std::polar(scale, -kTwoPi * double(lm) / double(elements));
            }
        return U;
    }

    DftCodebook make_codebook(int elements, const std::vector<int> &beams)
    {
        if (int(beams.size()) > elements)
            throw std::invalid_argument("make_codebook: more beams than elements.");
        std::vector<bool> used((size_t)elements, false);
        for (int b : beams)
        {
            if (b < 0 || b >= elements || used[(size_t)b])
                throw std::invalid_argument("make_codebook: beams must be distinct indices in [0, M).");
            used[(size_t)b] = true;
        }
        const arma::cx_mat U = dft_matrix(elements);
        DftCodebook cb;
        cb.elements = elements;
        cb.beams = beams;
        cb.F.set_size(beams.size(), (size_t)elements);
        for (std::size_t i = 0; i < beams.size(); ++i)
            cb.F.row(i) = U.row(std::size_t(beams[i]));
        return cb;
    }

    DftCodebook select_dft_beams(const std::vector<arma::cx_vec> &channels, const std::vector<double> &powers,
                                 double sigma2, int n_rf, std::vector<double> *trace)
    {
        if (channels.empty() || channels.size() != powers.size())
            throw std::invalid_argument("select_dft_beams: one power per channel expected.");
        const int M = int(channels.front().n_elem);
        if (n_rf < 1 || n_rf > M)
            throw std::invalid_argument("select_dft_beams: n_rf must lie in [1, M].");
        arma::cx_mat H((size_t)M, channels.size());
        for (std::size_t k = 0; k < channels.size(); ++k)
        {
            if (int(channels[k].n_elem) != M)
                throw std::invalid_argument("select_dft_beams: channels must share a length.");
            H.col(k) = channels[k];
        }
        const GreedyResult g = greedy_subset(dft_matrix(M) * H, arma::vec(powers), sigma2, n_rf);
        if (trace)
            *trace = g.trace;
        return make_codebook(M, g.picks);
    }

    arma::cx_vec mmse_ula_uplink(const arma::cx_mat &F, const std::vector<arma::cx_vec> &channels,
                                 const std::vector<double> &powers, double sigma2, int k)
    {
        if (k < 0 || k >= int(channels.size()) || powers.size() != channels.size())
            throw std::invalid_argument("mmse_ula_uplink: bad user index or power list.");
        arma::cx_mat inner(F.n_cols, F.n_cols, arma::fill::zeros);
        for (std::size_t i = 0; i < channels.size(); ++i)
            if (int(i) != k)
                inner += powers[i] * channels[i] * channels[i].t();
        inner.diag() += sigma2;
        arma::cx_mat C = F * inner * F.t();
        C = 0.5 * (C + C.t());
        arma::cx_mat R;
        if (!arma::chol(R, C))
            throw NumericalError("mmse_ula_uplink: covariance is not positive definite.");
        const arma::cx_vec b = F * channels[(size_t)k];
        const arma::cx_vec y = arma::solve(arma::trimatl(R.t()), b);
        return powers[(size_t)k] * arma::cx_vec(arma::solve(arma::trimatu(R), y));
    }

    double sinr_ula_uplink(const arma::cx_mat &F, const arma::cx_vec &w, const std::vector<arma::cx_vec> &channels,
                           const std::vector<double> &powers, double sigma2, int k)
    {
        const double sig = powers.at((size_t)k) * std::norm(arma::cdot(w, F * channels.at((size_t)k)));
        if (sig == 0.0)
            return 0.0;
        double den = sigma2 * std::pow(arma::norm(F.t() * w), 2);
        for (std::size_t i = 0; i < channels.size(); ++i)
            if (int(i) != k)
                den += powers[i] * std::norm(arma::cdot(w, F * channels[i]));
        return sig / den;
    }

    void UlaScenario::validate() const
    {
        if (channels.empty() || sectors.size() != channels.size())
            throw std::invalid_argument("UlaScenario: one sector per user expected.");
        if (elements < 1 || !(sigma2 > 0.0))
            throw std::invalid_argument("UlaScenario: need M >= 1 and sigma2 > 0.");
        for (std::size_t k = 0; k < channels.size(); ++k)
        {
            if (int(channels[k].n_elem) != elements)
                throw std::invalid_argument("UlaScenario: channels must have M entries.");
            if (sectors[k] < 1 || sectors[k] > 3)
                throw std::invalid_argument("UlaScenario: sector must be 1, 2 or 3.");
        }
    }

    std::vector<int> UlaScenario::members(int sector) const
    {
        std::vector<int> out;
        for (std::size_t k = 0; k < sectors.size(); ++k)
            if (sectors[k] == sector)
                out.push_back(int(k));
        return out;
    }

    LinkReport uplink_ula(const UlaScenario &scen, const std::vector<double> &transmit_snr)
    {
        scen.validate();
        if (transmit_snr.size() != scen.channels.size())
            throw std::invalid_argument("uplink_ula: one transmit SNR per user expected.");
        const int K = scen.users();
        LinkReport rep;
        rep.per_user_sinr.assign((size_t)K, 0.0);
        rep.beamformers.resize((size_t)K);
        for (int s = 1; s <= 3; ++s)
        {
            const std::vector<int> mem = scen.members(s);
            if (mem.empty())
                continue;
            std::vector<arma::cx_vec> H;
            std::vector<double> P;
            for (int k : mem)
            {
                H.push_back(scen.channels[(size_t)k]);
                P.push_back(transmit_snr[(size_t)k] * scen.sigma2);
            }
            std::vector<double> trace;
            const DftCodebook cb = select_dft_beams(H, P, scen.sigma2, int(mem.size()), &trace);
            for (int b : cb.beams)
                rep.selection.push_back((s - 1) * scen.elements + b);
            for (std::size_t j = 0; j < mem.size(); ++j)
            {
                const arma::cx_vec w = mmse_ula_uplink(cb.F, H, P, scen.sigma2, int(j));
                rep.beamformers[std::size_t(mem[j])] = w;
                rep.per_user_sinr[std::size_t(mem[j])] = sinr_ula_uplink(cb.F, w, H, P, scen.sigma2, int(j));
            }
        }
        finalize_rates(rep);
        rep.trace = {rep.sum_rate};
        return rep;
    }

    std::vector<DftCodebook> ula_downlink_codebooks(const UlaScenario &scen, const std::vector<double> &p)
    {
        scen.validate();
        std::vector<DftCodebook> cbs(3);
        for (int s = 1; s <= 3; ++s)
        {
            const std::vector<int> mem = scen.members(s);
            if (mem.empty())
            {
                cbs[std::size_t(s - 1)] = make_codebook(scen.elements, {});
                continue;
            }
            std::vector<arma::cx_vec> H;
            std::vector<double> P;
            for (int k : mem)
            {
                H.push_back(arma::conj(scen.channels[(size_t)k]));
                P.push_back(p.at((size_t)k));
            }
            cbs[std::size_t(s - 1)] = select_dft_beams(H, P, scen.sigma2, int(mem.size()));
        }
        return cbs;
    }

    DualLink ula_dual_link(const UlaScenario &scen, const std::vector<DftCodebook> &codebooks)
    {
        scen.validate();
        if (codebooks.size() != 3)
            throw std::invalid_argument("ula_dual_link: one codebook per sector expected.");
        DualLink link;
        for (int k = 0; k < scen.users(); ++k)
        {
            const DftCodebook &cb = codebooks[std::size_t(scen.sectors[(size_t)k] - 1)];
            link.features.push_back(cb.F * arma::conj(scen.channels[(size_t)k]));
        }
        link.groups = scen.sectors;
        link.noise = scen.sigma2;
        return link;
    }

    LinkReport downlink_ula(const UlaScenario &scen, double total_power, const PowerIterationOptions &opts)
    {
        scen.validate();
        std::vector<double> p0(std::size_t(scen.users()), total_power / double(scen.users()));
        const std::vector<DftCodebook> cbs = ula_downlink_codebooks(scen, p0);
        LinkReport rep = iterate_power(ula_dual_link(scen, cbs), total_power, opts);
        for (int s = 1; s <= 3; ++s)
            for (int b : cbs[std::size_t(s - 1)].beams)
                rep.selection.push_back((s - 1) * scen.elements + b);
        return rep;
    }

    double sinr_ula_downlink(const UlaScenario &scen, const std::vector<DftCodebook> &codebooks,
                             const std::vector<arma::cx_vec> &precoders, const std::vector<double> &p, int k)
    {
        scen.validate();
        const int sk = scen.sectors.at((size_t)k);
        const arma::cx_vec &h = scen.channels[(size_t)k];
        const arma::cx_mat &F = codebooks.at(std::size_t(sk - 1)).F;
        const double sig = p.at((size_t)k) * std::norm(arma::dot(h, F.t() * precoders.at((size_t)k)));
        if (sig == 0.0)
            return 0.0;
        double den = scen.sigma2;
        for (int i = 0; i < scen.users(); ++i)
            if (i != k && scen.sectors[(size_t)i] == sk)
                den += p.at((size_t)i) * std::norm(arma::dot(h, F.t() * precoders.at((size_t)i)));
        return sig / den;
    }

    std::vector<double> simulate_ula_downlink_symbols(const UlaScenario &scen,
                                                      const std::vector<DftCodebook> &codebooks,
                                                      const std::vector<arma::cx_vec> &precoders,
                                                      const std::vector<double> &p, int n_symbols, RngStream &rng)
    {
        scen.validate();
        if (n_symbols < 1)
            throw std::invalid_argument("simulate_ula_downlink_symbols: need at least one symbol.");
        const int K = scen.users();
        // Each sector array radiates only its own users' streams.
        arma::cx_mat B((size_t)K, (size_t)K, arma::fill::zeros);
        for (int k = 0; k < K; ++k)
            for (int i = 0; i < K; ++i)
                if (scen.sectors[(size_t)i] == scen.sectors[(size_t)k])
                {
                    const arma::cx_mat &F = codebooks.at(std::size_t(scen.sectors[(size_t)i] - 1)).F;
                    B(k, i) = arma::dot(scen.channels[(size_t)k], F.t() * precoders.at((size_t)i));
                }

        arma::cx_mat Y((size_t)K, (size_t)n_symbols);
        arma::cx_mat Xs((size_t)K, (size_t)n_symbols);
        arma::cx_vec s((size_t)K);
        for (int t = 0; t < n_symbols; ++t)
        {
            for (int i = 0; i < K; ++i)
                s[i] = complex_normal(rng, p.at((size_t)i));
            const arma::cx_vec y = B * s;
            for (int k = 0; k < K; ++k)
                Y(k, t) = y[k] + complex_normal(rng, scen.sigma2);
            Xs.col(t) = s;
        }
        return estimate_sinr(Y, Xs, arma::vec(p));
    }
}
