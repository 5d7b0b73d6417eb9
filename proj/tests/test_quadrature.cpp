// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rieszwave/quadrature.hpp"

using namespace rw;
using std::numbers::pi;

TEST_CASE("kronrod rule integrates polynomials")
{
    for (int deg = 0; deg <= 20; ++deg)
    {
        auto f = [deg](double x) { return std::pow(x, deg); };
        auto r = quad::adaptive(f, 0, 1);
        CHECK(r.value == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-13));
        CHECK(r.converged);
    }
}

TEST_CASE("adaptive handles oscillatory and peaked integrands")
{
    auto r = quad::adaptive([](double x) { return std::sin(x); }, 0, 50 * pi);
    CHECK(std::fabs(r.value) < 1e-10);
    auto g = quad::adaptive([](double x) { return 1 / (1e-4 + x * x); }, -1, 1);
    CHECK(g.value == doctest::Approx(2 / 1e-2 * std::atan(1 / 1e-2)).epsilon(1e-10));
}

TEST_CASE("power singularities at either endpoint")
{
    for (double beta : {0.1, 0.5, 0.9, 0.99})
    {
        auto f = [beta](double x) { return std::pow(x, -beta) * std::cos(x); };
        auto r = quad::singular_left(f, 0, 1, beta);
        // series of x^{-beta} cos x: sum (-1)^k /((2k)! (2k+1-beta))
        double ref = 0, fact = 1;
        for (int k = 0; k < 12; ++k)
        {
            if (k)
                fact *= (2 * k - 1) * (2 * k);
            ref += ((k % 2) ? -1 : 1) / (fact * (2 * k + 1 - beta));
        }
        CHECK(r.value == doctest::Approx(ref).epsilon(1e-11));
        // the offset argument is the exact distance to x = 2
        quad::OffsetIntegrand g = [beta](double, double off) { return std::pow(off, -beta); };
        auto s = quad::singular_right(g, 1, 2, beta);
        CHECK(s.value == doctest::Approx(1 / (1 - beta)).epsilon(1e-12));
    }
}

TEST_CASE("semi-infinite power tails")
{
    for (double p : {1.05, 1.3, 2.0, 3.5})
    {
        auto f = [p](double x) { return std::pow(x, -p) / (1 + 1 / (x * x)); };
        auto r = quad::semi_infinite(f, 2, p);
        // compare with a finite quadrature plus an explicit tail expansion
        double const X = 1e6;
        auto fin = quad::adaptive([&](double v) { double x = std::exp(v); return f(x) * x; },
                                  std::log(2.0), std::log(X));
        double tail = std::pow(X, 1 - p) / (p - 1) - std::pow(X, -1 - p) / (p + 1);
        CHECK(r.value == doctest::Approx(fin.value + tail).epsilon(1e-9));
    }
}

TEST_CASE("oscillatory tail series matches direct integration")
{
    double const U = 40, w = 3;
    for (double p : {-1.5, -2.0, -2.7})
    {
        double err = 0;
        auto J = quad::power_exp_tail(p, w, U, &err);
        // direct: panels of one period up to a far cut, then the series again
        double re = 0, im = 0;
        double const period = 2 * pi / w;
        double const far = U + 4000 * period;
        for (double a = U; a < far - 1e-9; a += period)
        {
            re += quad::adaptive([&](double x) { return std::pow(x, p) * std::cos(w * x); }, a, a + period).value;
            im += quad::adaptive([&](double x) { return std::pow(x, p) * std::sin(w * x); }, a, a + period).value;
        }
        auto Jf = quad::power_exp_tail(p, w, far);
        CHECK(J.real() == doctest::Approx(re + Jf.real()).epsilon(1e-9));
        CHECK(J.imag() == doctest::Approx(im + Jf.imag()).epsilon(1e-9));
        CHECK(err < 1e-12);
    }
}
