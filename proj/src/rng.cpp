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

#include "dcaa/rng.hpp"
#include "dcaa/angles.hpp"

#include <cmath>

namespace dcaa
{
    namespace
    {
        std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream)
        {
            std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(stream),
                              std::uint32_t(stream >> 32)};
            return std::mt19937_64(seq);
        }

        std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9e3779b97f4a7c15ULL;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
            return x ^ (x >> 31);
        }
    }

    RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_(stream_id), engine_(seeded_engine(seed, stream_id))
    {
    }

    double RngStream::uniform()
    {
        // 53 random bits, centred in their bucket: (k + 0.5) / 2^53.
        const std::uint64_t k = engine_() >> 11;
        return (double(k) + 0.5) * 0x1.0p-53;
    }

    double RngStream::normal(double mean, double sd)
    {
        if (has_cached_)
        {
            has_cached_ = false;
            return mean + sd * cached_normal_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        cached_normal_ = r * std::sin(kTwoPi * u2);
        has_cached_ = true;
        return mean + sd * r * std::cos(kTwoPi * u2);
    }

    double RngStream::sign()
    {
        return (engine_() >> 63) ? 1.0 : -1.0;
    }

    std::uint64_t stream_id_for(std::uint64_t trial, std::uint64_t user)
    {
        return splitmix64(splitmix64(trial) ^ (user * 0xd1b54a32d192ed03ULL + 1));
    }
}
