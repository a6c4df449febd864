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

#include "dcaa/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace dcaa
{
    std::vector<double> bessel_j_orders(int n_max, double x)
    {
        if (n_max < 0)
            throw std::invalid_argument("bessel_j_orders: n_max must be non-negative.");
        if (!std::isfinite(x))
            throw std::invalid_argument("bessel_j_orders: argument must be finite.");

        std::vector<double> out((size_t)n_max + 1, 0.0);
        const double ax = std::fabs(x);
        if (ax == 0.0)
        {
            out[0] = 1.0;
            return out;
        }

        // Start order: far enough above both n_max and |x| that the truncation error is below
        // double precision (the recurrence is dominated by J_n in the downward direction).
        const int top = std::max(n_max, int(std::ceil(ax)));
        int start = top + 20 + int(std::ceil(std::sqrt(40.0 * double(top))));
        if (start % 2 == 1)
            ++start;

        const double rescale_at = 1e250;
        double j_next = 0.0;  // J_{k+1}
        double j_curr = 1e-300; // J_k, arbitrary seed
        double norm = 0.0;    // J_0 + 2 * sum_{k>=1} J_{2k}, in the current scale

        for (int k = start; k > 0; --k)
        {
            const double j_prev = 2.0 * double(k) / ax * j_curr - j_next; // J_{k-1}
            j_next = j_curr;
            j_curr = j_prev;
            const int order = k - 1;

            if (order % 2 == 0 && order > 0)
                norm += 2.0 * j_curr;
            if (order <= n_max)
                out[(size_t)order] = j_curr;

            if (std::fabs(j_curr) > rescale_at)
            {
                const double s = 1.0 / rescale_at;
                j_curr *= s;
                j_next *= s;
                norm *= s;
                for (int i = order; i <= n_max; ++i)
                    out[(size_t)i] *= s;
            }
        }
        norm += j_curr; // J_0

        const double inv = 1.0 / norm;
        for (int n = 0; n <= n_max; ++n)
        {
            out[(size_t)n] *= inv;
            if (x < 0.0 && n % 2 == 1)
                out[(size_t)n] = -out[(size_t)n];
        }
        return out;
    }

    double bessel_j(int n, double x)
    {
        const int an = n < 0 ? -n : n;
        const double v = bessel_j_orders(an, x)[(size_t)an];
        return (n < 0 && an % 2 == 1) ? -v : v;
    }
}
