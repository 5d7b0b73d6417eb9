// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace rw {

//! Philox4x32-10 counter-based generator (Salmon et al., SC'11)
class Philox4x32
{
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter apply(Counter c, Key k) noexcept
    {
        for (int r = 0; r < 10; ++r)
        {
            if (r)
            {
                k[0] += 0x9E3779B9u;
                k[1] += 0xBB67AE85u;
            }
            std::uint64_t const p0 = std::uint64_t{0xD2511F53u} * c[0];
            std::uint64_t const p1 = std::uint64_t{0xCD9E8D57u} * c[2];
            auto const hi0 = static_cast<std::uint32_t>(p0 >> 32);
            auto const lo0 = static_cast<std::uint32_t>(p0);
            auto const hi1 = static_cast<std::uint32_t>(p1 >> 32);
            auto const lo1 = static_cast<std::uint32_t>(p1);
            c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        }
        return c;
    }
};

//! Stream tags separating the independent uses of one seed
enum class Stream : std::uint32_t
{
    cell = 1,
    far_block = 2,
    subcell = 3,
    bootstrap = 4,
    permutation = 5,
    synthetic = 6
};

inline std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

//! Keyed source of normals and uniforms addressed by (index, slot)
class KeyedNormal
{
  public:
    KeyedNormal(std::uint64_t seed, Stream stream, std::uint64_t replicate) noexcept
    {
        std::uint64_t const k = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream)));
        key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
        rep_ = static_cast<std::uint32_t>(replicate);
        rep_hi_ = static_cast<std::uint32_t>(replicate >> 32);
    }

    //! Two independent standard normals for the 64-bit index and slot
    std::array<double, 2> normal_pair(std::int64_t index, std::uint32_t slot) const noexcept
    {
        auto const u = static_cast<std::uint64_t>(index);
        auto r = Philox4x32::apply({static_cast<std::uint32_t>(u),
                                    static_cast<std::uint32_t>(u >> 32), slot,
                                    rep_ ^ (rep_hi_ * 0x85EBCA6Bu)},
                                   key_);
        double const u1 = to_unit(r[0], r[1]);
        double const u2 = to_unit(r[2], r[3]);
        double const rad = std::sqrt(-2 * std::log(u1));
        double const th = 2 * std::numbers::pi * u2;
        return {rad * std::cos(th), rad * std::sin(th)};
    }

    //! Standard normal number `i` of a slot
    double normal(std::int64_t i, std::uint32_t slot) const noexcept
    {
        std::int64_t const pair = i >= 0 ? i / 2 : -((-i + 1) / 2);
        return normal_pair(pair, slot)[static_cast<std::size_t>(i - 2 * pair)];
    }

    //! Uniform on (0,1]
    double uniform(std::int64_t index, std::uint32_t slot) const noexcept
    {
        auto const u = static_cast<std::uint64_t>(index);
        auto r = Philox4x32::apply({static_cast<std::uint32_t>(u),
                                    static_cast<std::uint32_t>(u >> 32), slot,
                                    rep_ ^ (rep_hi_ * 0x85EBCA6Bu)},
                                   key_);
        return to_unit(r[0], r[1]);
    }

  private:
    static double to_unit(std::uint32_t a, std::uint32_t b) noexcept
    {
        std::uint64_t const x = (std::uint64_t{a} << 32 | b) >> 11;
        return static_cast<double>(x + 1) * 0x1.0p-53;
    }

    Philox4x32::Key key_{};
    std::uint32_t rep_ = 0;
    std::uint32_t rep_hi_ = 0;
};

}  // namespace rw
