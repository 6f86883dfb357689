// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace mcrand {

//---------------------------------------------------------------------------//
/*!
 * SplitMix64 finalizer. Used to fold structured identifiers (scenario,
 * replication, purpose) into a 64-bit stream id.
 */
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

constexpr std::uint64_t stream_id(std::uint64_t a, std::uint64_t b) noexcept
{
    return splitmix64(splitmix64(a) ^ (b + 0x632be59bd9b4e019ull));
}

constexpr std::uint64_t stream_id(std::uint64_t a, std::uint64_t b,
                                  std::uint64_t c) noexcept
{
    return stream_id(stream_id(a, b), c);
}

//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 block function (Salmon et al., SC'11).
 */
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter apply(Counter ctr, Key key) noexcept
    {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        return ctr;
    }
};

//---------------------------------------------------------------------------//
/*!
 * Counter-based random stream.
 *
 * A stream is fully determined by (seed, stream); draws are a pure function
 * of (seed, stream, position), so any replication can be replayed in
 * isolation and results never depend on how work was scheduled.
 *
 * Variates are generated with fixed, documented transforms (no std::
 * distributions) so outputs are identical across standard libraries.
 */
class RandomStream {
  public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream)
    {
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept
    {
        if (lane_ == 2) {
            refill();
        }
        const auto i = 2 * lane_++;
        return (std::uint64_t{block_[i + 1]} << 32) | block_[i];
    }

    //! Uniform on the open interval (0, 1).
    double uniform() noexcept
    {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    //! Uniform integer in [0, n) without modulo bias (Lemire).
    std::uint64_t below(std::uint64_t n) noexcept
    {
        unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<unsigned __int128>((*this)()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    //! Standard normal via Box-Muller; the second variate is cached.
    double normal() noexcept
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double sd) noexcept
    {
        return mean + sd * normal();
    }

    double exponential(double mean) noexcept
    {
        return -mean * std::log(uniform());
    }

    //! Chi-square with integer degrees of freedom (sum of squared normals).
    double chi_square(int df) noexcept
    {
        double sum = 0;
        for (int i = 0; i < df; ++i) {
            const double z = normal();
            sum += z * z;
        }
        return sum;
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

  private:
    void refill() noexcept
    {
        const Philox4x32::Counter ctr{
            static_cast<std::uint32_t>(position_),
            static_cast<std::uint32_t>(position_ >> 32),
            static_cast<std::uint32_t>(stream_),
            static_cast<std::uint32_t>(stream_ >> 32)};
        block_ = Philox4x32::apply(ctr, key_);
        ++position_;
        lane_ = 0;
    }

    Philox4x32::Key key_;
    std::uint64_t stream_;
    std::uint64_t position_ = 0;
    Philox4x32::Counter block_{};
    int lane_ = 2;
    bool has_spare_ = false;
    double spare_ = 0;
};

}  // namespace mcrand
