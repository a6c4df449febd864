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

#ifndef DCAA_RNG_HPP
#define DCAA_RNG_HPP

#include <cstdint>
#include <random>

namespace dcaa
{
    /// Reproducible random stream keyed by (seed, stream id).
    ///
    /// The engine is std::mt19937_64 seeded through std::seed_seq, both of which are fully specified
    /// by the standard. Uniform and normal variates are derived here rather than through the
    /// <random> distributions, whose algorithms differ between standard libraries.
    class RngStream
    {
    public:
        RngStream(std::uint64_t seed, std::uint64_t stream_id);

        std::uint64_t seed() const { return seed_; }
        std::uint64_t stream_id() const { return stream_; }

        std::uint64_t next_u64() { return engine_(); }

        /// Uniform on the open interval (0, 1); never returns 0 or 1.
        double uniform();

        /// Uniform on (lo, hi).
        double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

        /// Normal(mean, sd^2) via the Box-Muller transform (pairs are cached).
        double normal(double mean = 0.0, double sd = 1.0);

        /// -1 or +1 with equal probability.
        double sign();

    private:
        std::uint64_t seed_;
        std::uint64_t stream_;
        std::mt19937_64 engine_;
        double cached_normal_ = 0.0;
        bool has_cached_ = false;
    };

    /// Stream id for (trial, user): a splitmix64 mix, so adding users does not perturb earlier ones.
    std::uint64_t stream_id_for(std::uint64_t trial, std::uint64_t user);
}

#endif
