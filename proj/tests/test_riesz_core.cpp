// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "rieszwave/kernel_oracles.hpp"
#include "rieszwave/errors.hpp"
#include "rieszwave/quadrature.hpp"
#include "rieszwave/riesz_core.hpp"

using namespace rw;
using doctest::Approx;
using std::numbers::pi;

// reference values from tests/oracles/golden.py (mpmath, 30 digits)
constexpr double gamma_quarter = 3.62560990822190831;
constexpr double c_025 = 0.149270361082947661;
constexpr double c_05 = 0.398942280401432678;
constexpr double c_09 = 2.99096084955516384;
constexpr double c_01 = 0.0532119780556692982;

TEST_CASE("gamma function accuracy on (0,2)")
{
    CHECK(gamma_fn(0.25) == Approx(gamma_quarter).epsilon(1e-14));
    CHECK(gamma_fn(0.5) == Approx(std::sqrt(pi)).epsilon(1e-14));
    CHECK(gamma_fn(1.0) == Approx(1.0).epsilon(1e-15));
    CHECK(gamma_fn(1.5) == Approx(std::sqrt(pi) / 2).epsilon(1e-14));
    for (double x = 0.05; x < 1; x += 0.05)
        CHECK(gamma_fn(x + 1) == Approx(x * gamma_fn(x)).epsilon(1e-13));
}

TEST_CASE("c_alpha values")
{
    CHECK(c_alpha(0.5) == Approx(c_05).epsilon(1e-14));
    CHECK(c_alpha(0.25) == Approx(c_025).epsilon(1e-14));
    CHECK(c_alpha(0.9) == Approx(c_09).epsilon(1e-14));
    CHECK(c_alpha(0.1) == Approx(c_01).epsilon(1e-14));
    CHECK(c_alpha(1e-8) < 1e-7);
    CHECK(c_alpha(1e-8) > 0);
    CHECK_THROWS_AS(c_alpha(0.0), DomainError);
    CHECK_THROWS_AS(c_alpha(1.0), DomainError);
    CHECK_THROWS_AS(c_alpha(-0.3), DomainError);
}

TEST_CASE("c_{1-alpha} reproduces the Fourier pair of |xi|^{alpha-1}")
{
    // (1/pi) * integral over (0,inf) of xi^{a-1} cos xi = c_{1-a}
    for (double a : {0.1, 0.5})
    {
        quad::Options opt;
        opt.rel_tol = 1e-13;
        opt.abs_tol = 1e-15;
        auto f = [a](double x) { return std::pow(x, a - 1) * std::cos(x); };
        quad::Result r = quad::singular_left(f, 0, 1, 1 - a, opt);
        double const U = 2 * pi * 1000 + pi / 2;
        double edge = 1;
        for (int k = 0; k < 1000; ++k)
        {
            double const next = std::min(U, pi / 2 + 2 * pi * (k + 1));
            r += quad::adaptive(f, edge, next, opt);
            edge = next;
        }
        double const tail = quad::power_exp_tail(a - 1, 1, U).real();
        CHECK((r.value + tail) / pi == Approx(c_alpha(1 - a)).epsilon(1e-6));
    }
    CHECK(c_alpha(1 - 0.1) == Approx(c_09).epsilon(1e-14));
}

TEST_CASE("A_alpha table")
{
    CHECK(big_a_alpha(0) == Approx(pi / 2).epsilon(1e-15));
    CHECK(big_a_alpha(0.5) == Approx(2.50662827463100050).epsilon(1e-14));
    CHECK(big_a_alpha(-0.5) == Approx(1.67108551642066700).epsilon(1e-14));
    CHECK_THROWS_AS(big_a_alpha(1.0), DomainError);
    CHECK_THROWS_AS(big_a_alpha(-1.0), DomainError);
}

TEST_CASE("A_alpha is continuous across its pieces")
{
    int const n = 1000;
    std::vector<double> v(n);
    double const lo = -0.99, hi = 0.99;
    double const step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i)
        v[i] = big_a_alpha(lo + step * i);
    for (int i = 1; i + 2 < n; ++i)
    {
        double const jump = std::fabs(v[i + 1] - v[i]);
        double const local = std::max(std::fabs(v[i] - v[i - 1]),
                                      std::fabs(v[i + 2] - v[i + 1]));
        CHECK(jump < 10 * local + 1e-12);
        CHECK(v[i] > 0);
    }
    CHECK(big_a_alpha(1e-9) == Approx(pi / 2).epsilon(1e-8));
    CHECK(big_a_alpha(-1e-9) == Approx(pi / 2).epsilon(1e-8));
}

TEST_CASE("AlphaParams invariants")
{
    for (double a = 0.05; a < 0.999; a += 0.05)
    {
        AlphaParams p(a);
        CHECK(p.c_one_minus_alpha() == Approx(c_alpha(1 - a)));
        CHECK(p.c_half() == Approx(c_alpha((1 - a) / 2)));
        CHECK(p.a_alpha_minus_one() == Approx(big_a_alpha(a - 1)));
        CHECK(p.c_one_minus_alpha() > 0);
        CHECK(p.c_half() > 0);
        CHECK(p.a_alpha_minus_one() > 0);
        CHECK(std::isfinite(p.a_alpha_minus_one()));
    }
    CHECK_THROWS_AS(AlphaParams(1.0), DomainError);
    CHECK_THROWS_AS(AlphaParams(0.0), DomainError);
    CHECK(NoiseKind::white().is_white());
    CHECK(NoiseKind::white().exponent() == 1.0);
    CHECK(NoiseKind::colored(0.7).exponent() == 0.7);
    CHECK_THROWS_AS(NoiseKind::white().params(), DomainError);
}

TEST_CASE("Riesz kernel and mollifier")
{
    AlphaParams p(0.5);
    CHECK(f_alpha(1, p) == Approx(c_05).epsilon(1e-14));
    CHECK(f_alpha(-1, p) == f_alpha(1, p));
    CHECK(f_alpha(4, p) == Approx(c_05 / 2).epsilon(1e-14));
    CHECK(h_alpha(1, p) == Approx(c_025).epsilon(1e-14));
    CHECK(h_alpha(-2, p) == h_alpha(2, p));
    CHECK_THROWS_AS(f_alpha(0, p), SingularityError);
    CHECK_THROWS_AS(h_alpha(0, p), SingularityError);

    for (double a = 0.1; a < 0.96; a += 0.05)
    {
        AlphaParams q(a);
        for (double x : {0.1, 1.0, 10.0})
        {
            CHECK(f_alpha(x, q) > 0);
            CHECK(f_alpha(-x, q) == f_alpha(x, q));
            CHECK(f_alpha(2 * x, q) == Approx(std::pow(2.0, -a) * f_alpha(x, q)).epsilon(1e-14));
            CHECK(f_alpha(1.01 * x, q) < f_alpha(x, q));
        }
    }
}

TEST_CASE("mollifier cell average")
{
    AlphaParams p(0.5);
    double const b = p.mollifier_exponent();
    double const closed = p.c_half() / (1 - b) * (std::pow(1.5, 1 - b) - std::pow(0.5, 1 - b));
    CHECK(closed == Approx(0.158695592877433660).epsilon(1e-13));
    auto f = [&](double x) { return h_alpha(x, p); };
    CHECK(quad::adaptive(f, 0.5, 1.5).value == Approx(closed).epsilon(1e-12));
}

TEST_CASE("spectral density")
{
    CHECK(spectral_density(4.0, AlphaParams(0.5)) == Approx(0.5).epsilon(1e-15));
    for (double a : {0.1, 0.5, 0.9})
        CHECK(spectral_density(1.0, AlphaParams(a)) == 1.0);
    CHECK(spectral_density(10.0, AlphaParams(0.99)) == Approx(0.977237220955810).epsilon(1e-12));
    CHECK(spectral_density(3.0, NoiseKind::white()) == 1.0);
    CHECK_THROWS_AS(spectral_density(0.0, AlphaParams(0.5)), SingularityError);
    // pointwise limit as alpha -> 1
    double prev = 0;
    for (double a : {0.5, 0.9, 0.99, 0.999})
    {
        double const gap = std::fabs(spectral_density(7.0, AlphaParams(a)) - 1);
        if (prev > 0)
            CHECK(gap < prev);
        prev = gap;
    }
}

TEST_CASE("Dalang integral")
{
    auto white = dalang_integral(NoiseKind::white(), 1e-10);
    CHECK(white.value == Approx(pi).epsilon(1e-10));
    auto half = dalang_integral(AlphaParams(0.5), 1e-10);
    CHECK(std::fabs(half.value - 4.44288293815836622) <= 1e-10);
    CHECK(half.value == Approx(pi / std::sin(pi / 4)).epsilon(1e-11));
    CHECK(half.abs_error_bound <= 1e-10);
    for (double a : {0.1, 0.5, 0.9})
    {
        auto r = dalang_integral(AlphaParams(a), 1e-9);
        CHECK(std::isfinite(r.value));
        CHECK(r.value > 0);
        CHECK(r.abs_error_bound >= 0);
        CHECK(r.abs_error_bound <= 1e-9);
        CHECK(r.value == Approx(oracle::dalang_trapezoid(a)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(dalang_integral(AlphaParams(0.5), 0), DomainError);
}

TEST_CASE("mollifier convolves to the Riesz kernel")
{
    for (double a : {0.3, 0.5, 0.7, 0.9})
    {
        AlphaParams p(a);
        for (double x : {0.1, 1.0, 10.0})
        {
            auto r = verify_convolution_identity(p, x, 1e-8);
            CAPTURE(a);
            CAPTURE(x);
            CHECK(r.value <= 1e-4);
            auto m = verify_convolution_identity(p, -x, 1e-8);
            CHECK(m.value == Approx(r.value).epsilon(1e-12).scale(1e-12));
        }
    }
    CHECK(verify_convolution_identity(AlphaParams(0.5), 1, 1e-8).value <= 1e-4);
    CHECK(verify_convolution_identity(AlphaParams(0.9), 2, 1e-8).value <= 1e-4);
    CHECK_THROWS_AS(verify_convolution_identity(AlphaParams(0.5), 0, 1e-8),
                    SingularityError);
}

TEST_CASE("rectangle power integral")
{
    // midpoint Riemann sum on a fine grid; the squares touch so the
    // singular diagonal is only reached at a corner
    double const e = 0.5;
    int const n = 1000;
    double sum = 0;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
        {
            double const y = (i + 0.5) / n;
            double const z = 1 + (k + 0.5) / n;
            sum += std::pow(z - y, -e);
        }
    sum /= double(n) * n;
    CHECK(rectangle_power_integral(0, 1, 1, 2, e) == Approx(sum).epsilon(1e-3));
    // self square: 2 / ((1-e)(2-e)) for unit side
    CHECK(rectangle_power_integral(0, 1, 0, 1, e) == Approx(2 / ((1 - e) * (2 - e))).epsilon(1e-14));
    CHECK(rectangle_power_integral(0, 1, 2, 3, e) == Approx(rectangle_power_integral(2, 3, 0, 1, e)));
}

TEST_CASE("stable power differences")
{
    for (double q : {1.5, 1.1, 1.9})
    {
        for (double m : {0.0, 1.0, 2.0, 3.0, 17.0})
        {
            double const direct = std::pow(m + 1, q) - 2 * std::pow(m, q) + std::pow(std::fabs(m - 1), q);
            CHECK(power_second_difference(m, q) == Approx(direct).epsilon(1e-10));
            CHECK(power_second_difference(-m, q) == power_second_difference(m, q));
            CHECK(power_first_difference(m, q) == Approx(std::pow(m + 1, q) - std::pow(m, q)).epsilon(1e-10));
        }
        // large lags: leading term q(q-1) m^{q-2}
        double const m = 1e7;
        CHECK(power_second_difference(m, q) == Approx(q * (q - 1) * std::pow(m, q - 2)).epsilon(1e-6));
    }
}
