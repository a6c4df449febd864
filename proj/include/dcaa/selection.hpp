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

#ifndef DCAA_SELECTION_HPP
#define DCAA_SELECTION_HPP

#include <armadillo>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dcaa
{
    /// Raised when a Hermitian system that must be positive definite is not.
    struct NumericalError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    /// Binary RF-chain-to-port assignment: row i selects port omega[i] (0-based).
    ///
    /// Construction enforces one port per chain and no port used twice.
    class SelectionMatrix
    {
    public:
        SelectionMatrix(int n_ports, std::vector<int> omega);

        int n_rf() const { return int(omega_.size()); }
        int n_ports() const { return n_ports_; }
        const std::vector<int> &omega() const { return omega_; }

        /// n_rf x n_ports 0/1 matrix.
        arma::mat dense() const;

        /// S * h, i.e. the selected entries of h in chain order.
        arma::cx_vec apply(const arma::cx_vec &h) const;

        /// S^T * w, scattered back onto the ports.
        arma::cx_vec scatter(const arma::cx_vec &w) const;

    private:
        int n_ports_;
        std::vector<int> omega_;
    };

    /// Structural check of a dense 0/1 matrix: unit rows, distinct columns, entries in {0, 1}.
    bool satisfies_selection_constraints(const arma::mat &S);

    /// MMSE sum rate of a candidate subset.
    ///
    /// Row c of `features` is the per-user feature of candidate c (a port or a beam). For the
    /// subset T, g_k = features(T, k) and the rate is sum_k log2(1 + p_k g_k^H C_k^{-1} g_k) with
    /// C_k = noise * I + sum_{i != k} p_i g_i g_i^H. Each C_k is solved directly.
    double subset_sum_rate(const arma::cx_mat &features, const arma::vec &powers, double noise,
                           const std::vector<int> &subset);

    struct GreedyResult
    {
        std::vector<int> picks;    // in pick order
        std::vector<double> trace; // sum rate after each pick
    };

    /// Greedy subset growth: at each step add the candidate that maximizes subset_sum_rate.
    ///
    /// Candidates are scored incrementally from a bordered Cholesky factor of
    /// A = noise * I + sum_k p_k g_k g_k^H and t_k = g_k^H A^{-1} g_k, using
    /// log2(1 + SINR_k) = -log2(1 - p_k t_k). Ties go to the lowest candidate index.
    GreedyResult greedy_subset(const arma::cx_mat &features, const arma::vec &powers, double noise, int count);

    /// Exhaustive search over all subsets of size `count`; first maximizer in lexicographic order.
    GreedyResult exhaustive_subset(const arma::cx_mat &features, const arma::vec &powers, double noise, int count,
                                   double max_subsets = 1e6);

    /// Binomial coefficient as a double (exact below 2^53).
    double binomial(int n, int k);
}

#endif
