// SPDX-License-Identifier: Apache-2.0
//
// relaycap - capacity bounds for Gaussian relay channels with ISI and colored noise
// Copyright (C) 2026 relaycap contributors
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

#ifndef RELAYCAP_RNG_HPP
#define RELAYCAP_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace relaycap
{

// Deterministic PRNG: xoshiro256++ seeded through splitmix64, with Gaussian
// variates via Box-Muller. std:: distributions are avoided on purpose - their
// output is implementation-defined, and scenario outputs must be byte-identical
// across platforms for a given (seed, stream) pair.
class Rng
{
  public:
    // `stream` selects an independent substream of the same master seed, so
    // parallel workers can draw without sharing state.
    explicit Rng(uint64_t seed, uint64_t stream = 0)
    {
        uint64_t sm = seed + stream * 0x9E3779B97F4A7C15ULL;
        for (auto &word : s)
            word = splitmix64(sm);
        have_spare = false;
        spare = 0.0;
    }

    // Next raw 64-bit value (xoshiro256++).
    uint64_t next_u64()
    {
        const uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        const uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform()
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi)
    {
        return lo + (hi - lo) * uniform();
    }

    // Standard normal via Box-Muller; caches the second variate of each pair.
    double normal()
    {
        if (have_spare)
        {
            have_spare = false;
            return spare;
        }
        // Guard against log(0): shift u1 into (0, 1].
        double u1 = 1.0 - uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * 3.14159265358979323846 * u2;
        spare = r * std::sin(theta);
        have_spare = true;
        return r * std::cos(theta);
    }

    // Circularly-symmetric complex normal with E|z|^2 = 1.
    std::complex<double> complex_normal()
    {
        const double scale = 0.70710678118654752440; // 1/sqrt(2)
        return {scale * normal(), scale * normal()};
    }

  private:
    static uint64_t splitmix64(uint64_t &state)
    {
        uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static uint64_t rotl(uint64_t x, int k)
    {
        return (x << k) | (x >> (64 - k));
    }

    uint64_t s[4];
    bool have_spare;
    double spare;
};

} // namespace relaycap

#endif // RELAYCAP_RNG_HPP
