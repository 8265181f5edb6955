// SPDX-License-Identifier: Apache-2.0
//
// starris - impedance-level modeling of simultaneously transmitting and
// reflecting surfaces, with uplink NOMA outage analysis and simulation
// Copyright (C) 2026 the starris contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STARRIS_RNG_HPP
#define STARRIS_RNG_HPP

#include <cmath>
#include <cstdint>

namespace starris
{

// 64-bit avalanche finalizer (splitmix64 style). Used to derive independent
// seeds from (seed, index) pairs so that Monte Carlo results depend only on
// logical trial indices, never on scheduling or worker count.
inline std::uint64_t avalanche64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a)
{
    return avalanche64(avalanche64(seed) ^ avalanche64(a + 0xA5A5A5A5A5A5A5A5ULL));
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
{
    return mix_seed(mix_seed(seed, a), b);
}

// Small value-type random stream. Cloneable and cheap to construct, so every
// Monte Carlo trial owns a stream derived purely from (seed, trial index).
// The raw generator is a splitmix64 walk; normal deviates come from a
// Box-Muller pair with the second deviate cached.
class RngStream
{
  public:
    explicit RngStream(std::uint64_t seed) : state_(avalanche64(seed ^ 0x853C49E6748FEA9BULL)) {}

    std::uint64_t next_u64()
    {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53-bit resolution
    double next_double()
    {
        return double(next_u64() >> 11) * 0x1.0p-53;
    }

    // standard normal deviate
    double next_normal()
    {
        if (has_cached_)
        {
            has_cached_ = false;
            return cached_;
        }
        double u1 = 1.0 - next_double(); // in (0, 1], keeps the log finite
        double u2 = next_double();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 6.283185307179586476925286766559 * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

    // independent child stream; deriving is itself a draw-free operation
    RngStream substream(std::uint64_t index) const
    {
        return RngStream(mix_seed(state_, index));
    }

  private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace starris

#endif
