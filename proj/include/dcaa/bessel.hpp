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

#ifndef DCAA_BESSEL_HPP
#define DCAA_BESSEL_HPP

#include <vector>

namespace dcaa
{
    /// Bessel functions of the first kind J_0(x) ... J_{n_max}(x) for integer orders.
    ///
    /// Miller's downward recurrence started well above max(n_max, |x|) and normalized with
    /// J_0 + 2*sum J_{2k} = 1. Absolute accuracy is ~1e-14 for |x| up to a few hundred.
    /// Negative arguments use J_n(-x) = (-1)^n J_n(x).
    std::vector<double> bessel_j_orders(int n_max, double x);

    /// Single-order convenience wrapper; negative orders use J_{-n} = (-1)^n J_n.
    double bessel_j(int n, double x);
}

#endif
