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

#include "dcaa/selection.hpp"

#include <algorithm>
#include <cmath>

namespace dcaa
{
    SelectionMatrix::SelectionMatrix(int n_ports, std::vector<int> omega) : n_ports_(n_ports), omega_(std::move(omega))
    {
        if (n_ports < 1)
            throw std::invalid_argument("SelectionMatrix: need at least one port.");
        if (omega_.empty() || int(omega_.size()) > n_ports)
            throw std::invalid_argument("SelectionMatrix: need 1 <= n_rf <= number of ports.");
        std::vector<bool> used((size_t)n_ports, false);
        for (int p : omega_)
        {
            if (p < 0 || p >= n_ports)
                throw std::invalid_argument("SelectionMatrix: port index out of range.");
            if (used[(size_t)p])
                throw std::invalid_argument("SelectionMatrix: port selected twice.");
            used[(size_t)p] = true;
        }
    }

    arma::mat SelectionMatrix::dense() const
    {
        arma::mat S(omega_.size(), (size_t)n_ports_, arma::fill::zeros);
        for (std::size_t i = 0; i < omega_.size(); ++i)
            S(i, std::size_t(omega_[i])) = 1.0;
        return S;
    }

    arma::cx_vec SelectionMatrix::apply(const arma::cx_vec &h) const
    {
        if (int(h.n_elem) != n_ports_)
            throw std::invalid_argument("SelectionMatrix::apply: length mismatch.");
        arma::cx_vec out(omega_.size());
        for (std::size_t i = 0; i < omega_.size(); ++i)
            out[i] = h[std::size_t(omega_[i])];
        return out;
    }

    arma::cx_vec SelectionMatrix::scatter(const arma::cx_vec &w) const
    {
        if (w.n_elem != omega_.size())
            throw std::invalid_argument("SelectionMatrix::scatter: length mismatch.");
        arma::cx_vec out((size_t)n_ports_, arma::fill::zeros);
        for (std::size_t i = 0; i < omega_.size(); ++i)
            out[std::size_t(omega_[i])] = w[i];
        return out;
    }

    bool satisfies_selection_constraints(const arma::mat &S)
    {
        if (S.n_rows == 0 || S.n_rows > S.n_cols)
            return false;
        for (double v : S)
            if (v != 0.0 && v != 1.0)
                return false;
        for (arma::uword i = 0; i < S.n_rows; ++i)
            if (arma::accu(S.row(i)) != 1.0)
                return false;
        for (arma::uword j = 0; j < S.n_cols; ++j)
            if (arma::accu(S.col(j)) > 1.0)
                return false;
        return true;
    }

    namespace
    {
        void check_inputs(const arma::cx_mat &features, const arma::vec &powers, double noise)
        {
            if (powers.n_elem != features.n_cols)
                throw std::invalid_argument("Selection: one power per user expected.");
            if (!(noise > 0.0))
                throw std::invalid_argument("Selection: noise level must be positive.");
            if (arma::any(powers < 0.0))
                throw std::invalid_argument("Selection: powers must be nonnegative.");
        }
    }

    double subset_sum_rate(const arma::cx_mat &features, const arma::vec &powers, double noise,
                           const std::vector<int> &subset)
    {
        check_inputs(features, powers, noise);
        if (subset.empty())
            return 0.0;
        arma::uvec rows(subset.size());
        for (std::size_t i = 0; i < subset.size(); ++i)
            rows[i] = arma::uword(subset[i]);
        const arma::cx_mat G = features.rows(rows);
        const arma::uword K = G.n_cols;

        arma::cx_mat full = G * arma::diagmat(arma::conv_to<arma::cx_vec>::from(powers)) * G.t();
        double rate = 0.0;
        for (arma::uword k = 0; k < K; ++k)
        {
            if (powers[k] == 0.0)
                continue;
            const arma::cx_vec g = G.col(k);
            arma::cx_mat C = full - powers[k] * g * g.t();
            C.diag() += noise;
            C = 0.5 * (C + C.t());
            arma::cx_mat R;
            if (!arma::chol(R, C))
                throw NumericalError("subset_sum_rate: covariance is not positive definite.");
            const arma::cx_vec y = arma::solve(arma::trimatl(R.t()), g);
            rate += std::log2(1.0 + powers[k] * arma::accu(arma::square(arma::abs(y))));
        }
        return rate;
    }

    GreedyResult greedy_subset(const arma::cx_mat &features, const arma::vec &powers, double noise, int count)
    {
        check_inputs(features, powers, noise);
        const int n_cand = int(features.n_rows);
        const int K = int(features.n_cols);
        if (count < 1 || count > n_cand)
            throw std::invalid_argument("greedy_subset: infeasible subset size.");

        // conj(f(c, i)) * p_i, so that A(j, c) = features.row(j) * pf.row(c)^T.
        const arma::cx_mat pf = arma::conj(features) * arma::diagmat(arma::conv_to<arma::cx_vec>::from(powers));
        arma::vec self((size_t)n_cand);
        for (int c = 0; c < n_cand; ++c)
            self[c] = noise + arma::accu(powers.t() % arma::square(arma::abs(features.row(c))));

        arma::cx_mat L((size_t)count, (size_t)count, arma::fill::zeros);
        arma::cx_mat Y((size_t)count, (size_t)K, arma::fill::zeros); // Y.col(k) = L^{-1} g_k
        arma::vec t((size_t)K, arma::fill::zeros);
        std::vector<bool> taken((size_t)n_cand, false);

        GreedyResult res;
        arma::cx_vec a((size_t)count), l((size_t)count);
        arma::cx_rowvec eta((size_t)K), best_eta((size_t)K);
        arma::cx_vec best_l((size_t)count);

        for (int s = 0; s < count; ++s)
        {
            double best_rate = -1.0;
            int best_c = -1;
            double best_d = 0.0;
            for (int c = 0; c < n_cand; ++c)
            {
                if (taken[(size_t)c])
                    continue;
                double rate = 0.0;
                bool fallback = false;
                double d = 0.0;
                if (s > 0)
                {
                    for (int j = 0; j < s; ++j)
                        a[j] = arma::dot(features.row(std::size_t(res.picks[(size_t)j])), pf.row((size_t)c));
                    // Forward substitution L l = a.
                    for (int j = 0; j < s; ++j)
                    {
                        std::complex<double> acc = a[j];
                        for (int q = 0; q < j; ++q)
                            acc -= L(j, q) * l[q];
                        l[j] = acc / L(j, j);
                    }
                }
                double d2 = self[c];
                for (int j = 0; j < s; ++j)
                    d2 -= std::norm(l[j]);
                if (!(d2 > 0.0))
                    fallback = true;
                else
                {
                    d = std::sqrt(d2);
                    for (int k = 0; k < K; ++k)
                    {
                        std::complex<double> acc = features((size_t)c, (size_t)k);
                        for (int j = 0; j < s; ++j)
                            acc -= std::conj(l[j]) * Y(j, k);
                        eta[k] = acc / d;
                        const double pt = powers[k] * (t[k] + std::norm(eta[k]));
                        if (1.0 - pt < 1e-6)
                        {
                            fallback = true;
                            break;
                        }
                        rate -= std::log2(1.0 - pt);
                    }
                }
                if (fallback)
                {
                    std::vector<int> trial = res.picks;
                    trial.push_back(c);
                    rate = subset_sum_rate(features, powers, noise, trial);
                    if (!(d2 > 0.0))
                        throw NumericalError("greedy_subset: covariance lost positive definiteness.");
                    d = std::sqrt(d2);
                    for (int k = 0; k < K; ++k)
                    {
                        std::complex<double> acc = features((size_t)c, (size_t)k);
                        for (int j = 0; j < s; ++j)
                            acc -= std::conj(l[j]) * Y(j, k);
                        eta[k] = acc / d;
                    }
                }
                if (rate > best_rate)
                {
                    best_rate = rate;
                    best_c = c;
                    best_d = d;
                    best_eta = eta;
                    best_l.head((size_t)s) = l.head((size_t)s);
                }
            }

            taken[(size_t)best_c] = true;
            res.picks.push_back(best_c);
            for (int j = 0; j < s; ++j)
                L(s, j) = std::conj(best_l[j]);
            L(s, s) = best_d;
            for (int k = 0; k < K; ++k)
            {
                Y(s, k) = best_eta[k];
                t[k] += std::norm(best_eta[k]);
            }
            res.trace.push_back(best_rate);
        }
        return res;
    }

    double binomial(int n, int k)
    {
        if (k < 0 || k > n)
            return 0.0;
        k = std::min(k, n - k);
        double r = 1.0;
        for (int i = 1; i <= k; ++i)
            r = r * double(n - k + i) / double(i);
        return std::round(r);
    }

    GreedyResult exhaustive_subset(const arma::cx_mat &features, const arma::vec &powers, double noise, int count,
                                   double max_subsets)
    {
        check_inputs(features, powers, noise);
        const int n = int(features.n_rows);
        if (count < 1 || count > n)
            throw std::invalid_argument("exhaustive_subset: infeasible subset size.");
        if (binomial(n, count) > max_subsets)
            throw std::invalid_argument("exhaustive_subset: too many subsets to enumerate.");

        std::vector<int> idx((size_t)count);
        for (int i = 0; i < count; ++i)
            idx[(size_t)i] = i;
        GreedyResult best;
        double best_rate = -1.0;
        while (true)
        {
            const double r = subset_sum_rate(features, powers, noise, idx);
            if (r > best_rate)
            {
                best_rate = r;
                best.picks = idx;
            }
            int i = count - 1;
            while (i >= 0 && idx[(size_t)i] == n - count + i)
                --i;
            if (i < 0)
                break;
            ++idx[(size_t)i];
            for (int j = i + 1; j < count; ++j)
                idx[(size_t)j] = idx[std::size_t(j - 1)] + 1;
        }
        best.trace = {best_rate};
        return best;
    }
}
