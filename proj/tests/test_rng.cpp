// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "rieszwave/rng.hpp"

using namespace rw;

TEST_CASE("Philox4x32-10 known-answer vectors")
{
    // Random123 kat_vectors
    auto a = Philox4x32::apply({0, 0, 0, 0}, {0, 0});
    CHECK(a[0] == 0x6627e8d5u);
    CHECK(a[1] == 0xe169c58du);
    CHECK(a[2] == 0xbc57ac4cu);
    CHECK(a[3] == 0x9b00dbd8u);

    auto b = Philox4x32::apply({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                               {0xffffffffu, 0xffffffffu});
    CHECK(b[0] == 0x408f276du);
    CHECK(b[1] == 0x41c83b0eu);
    CHECK(b[2] == 0xa20bc7c6u);
    CHECK(b[3] == 0x6d5451fdu);

    auto c = Philox4x32::apply({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                               {0xa4093822u, 0x299f31d0u});
    CHECK(c[0] == 0xd16cfe09u);
    CHECK(c[1] == 0x94fdccebu);
    CHECK(c[2] == 0x5001e420u);
    CHECK(c[3] == 0x24126ea1u);
}

TEST_CASE("keyed normals are reproducible and separated by key")
{
    KeyedNormal a(42, Stream::cell, 7);
    KeyedNormal b(42, Stream::cell, 7);
    KeyedNormal c(42, Stream::cell, 8);
    KeyedNormal d(42, Stream::subcell, 7);
    KeyedNormal e(43, Stream::cell, 7);
    for (int i = -5; i < 5; ++i)
    {
        CHECK(a.normal(i, 3) == b.normal(i, 3));
        CHECK(a.normal(i, 3) != c.normal(i, 3));
        CHECK(a.normal(i, 3) != d.normal(i, 3));
        CHECK(a.normal(i, 3) != e.normal(i, 3));
        CHECK(a.normal(i, 3) != a.normal(i, 4));
    }
    // normal(i) walks the pairs in order, negative indices included
    for (std::int64_t p : {-3, -1, 0, 2})
    {
        auto z = a.normal_pair(p, 1);
        CHECK(a.normal(2 * p, 1) == z[0]);
        CHECK(a.normal(2 * p + 1, 1) == z[1]);
    }
}

TEST_CASE("keyed normal moments")
{
    KeyedNormal g(2024, Stream::synthetic, 0);
    long const n = 400000;
    double s1 = 0, s2 = 0, s4 = 0, u1 = 0;
    double u_min = 1, u_max = 0;
    for (long i = 0; i < n; ++i)
    {
        double const z = g.normal(i, 0);
        s1 += z;
        s2 += z * z;
        s4 += z * z * z * z;
        double const u = g.uniform(i, 9);
        u_min = std::min(u_min, u);
        u_max = std::max(u_max, u);
        u1 += u;
    }
    CHECK(u_min > 0);
    CHECK(u_max <= 1);
    double const N = static_cast<double>(n);
    CHECK(std::fabs(s1 / N) < 4 / std::sqrt(N));
    CHECK(std::fabs(s2 / N - 1) < 4 * std::sqrt(2 / N));
    CHECK(std::fabs(s4 / N - 3) < 4 * std::sqrt(96 / N));
    CHECK(std::fabs(u1 / N - 0.5) < 4 * std::sqrt(1 / (12 * N)));
}

TEST_CASE("splitmix64 decorrelates nearby seeds")
{
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 1000; ++s)
        seen.insert(splitmix64(s));
    CHECK(seen.size() == 1000);
}
