// SPDX-License-Identifier: Apache-2.0
#include "rieszwave/riesz_core.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "rieszwave/errors.hpp"
#include "rieszwave/quadrature.hpp"

namespace rw {

using std::numbers::pi;

double gamma_fn(double x)
{
    return boost::math::tgamma(x);
}

double c_alpha(double alpha)
{
    if (!(alpha > 0 && alpha < 1))
        throw DomainError("c_alpha: alpha must lie in the open interval (0,1)");
    return std::sin(alpha * pi / 2) * gamma_fn(1 - alpha) / pi;
}

double big_a_alpha(double alpha)
{
    if (!(alpha > -1 && alpha < 1))
        throw DomainError("big_a_alpha: alpha must lie in (-1,1)");
    if (alpha == 0)
        return pi / 2;
    double const s = std::sin(pi * alpha / 2);
    if (alpha > 0)
        return gamma_fn(alpha) * s / (1 - alpha);
    return gamma_fn(1 + alpha) * s / (alpha * (1 - alpha));
}

AlphaParams::AlphaParams(double alpha) : alpha_(alpha)
{
    if (!(alpha > 0 && alpha < 1))
        throw DomainError("alpha must lie in the open interval (0,1), got "
                          + std::to_string(alpha));
    c_cov_ = c_alpha(1 - alpha);
    c_half_ = c_alpha((1 - alpha) / 2);
    a_ = big_a_alpha(alpha - 1);
}

AlphaParams const& NoiseKind::params() const
{
    if (!params_)
        throw DomainError("white noise has no Riesz parameters");
    return *params_;
}

std::string NoiseKind::label() const
{
    if (!params_)
        return "white";
    std::ostringstream os;
    os << params_->alpha();
    return os.str();
}

double f_alpha(double x, AlphaParams const& p)
{
    if (x == 0)
        throw SingularityError("f_alpha is singular at x = 0");
    return p.c_one_minus_alpha() * std::pow(std::fabs(x), -p.alpha());
}

double h_alpha(double x, AlphaParams const& p)
{
    if (x == 0)
        throw SingularityError("h_alpha is singular at x = 0");
    return p.c_half() * std::pow(std::fabs(x), -p.mollifier_exponent());
}

double spectral_density(double xi, AlphaParams const& p)
{
    if (xi == 0)
        throw SingularityError("spectral density is singular at xi = 0");
    return std::pow(std::fabs(xi), p.alpha() - 1);
}

double spectral_density(double xi, NoiseKind const& kind)
{
    if (kind.is_white())
        return 1;
    return spectral_density(xi, kind.params());
}

KernelEval dalang_integral(NoiseKind const& kind, double quad_tol)
{
    if (!(quad_tol > 0))
        throw DomainError("dalang_integral: quad_tol must be positive");
    double const e = kind.exponent() - 1;
    auto f = [e](double xi) { return std::pow(xi, e) / (1 + xi * xi); };
    quad::Options opt;
    opt.abs_tol = quad_tol / 8;
    opt.rel_tol = 1e-14;
    quad::Result r = quad::singular_left(f, 0, 1, -e, opt);
    r += quad::semi_infinite(f, 1, 2 - e, opt);
    KernelEval out{2 * r.value, 2 * r.abs_error};
    if (!r.converged || out.abs_error_bound > quad_tol)
        throw QuadratureError("dalang_integral did not converge",
                              out.abs_error_bound);
    return out;
}

KernelEval dalang_integral(AlphaParams const& p, double quad_tol)
{
    return dalang_integral(NoiseKind::colored(p.alpha()), quad_tol);
}

KernelEval verify_convolution_identity(AlphaParams const& p, double x,
                                       double quad_tol)
{
    if (x == 0)
        throw SingularityError("convolution identity is singular at x = 0");
    if (!(quad_tol > 0))
        throw DomainError("verify_convolution_identity: quad_tol must be positive");
    double const X = std::fabs(x);
    double const b = p.mollifier_exponent();
    double const c2 = p.c_half() * p.c_half();
    auto pw = [b](double u) { return std::pow(u, -b); };
    auto g = [&](double y) { return c2 * pw(std::fabs(y)) * pw(std::fabs(X - y)); };
    auto g_reflected = [&](double v) { return g(-v); };
    // at a singular endpoint the offset is the exact distance to it
    auto near_zero = [&](double, double d) { return c2 * pw(d) * pw(X + d); };
    auto near_zero_in = [&](double, double d) { return c2 * pw(d) * pw(X - d); };
    auto near_x_in = [&](double, double d) { return c2 * pw(X - d) * pw(d); };
    auto near_x_out = [&](double, double d) { return c2 * pw(X + d) * pw(d); };

    quad::Options opt;
    opt.rel_tol = std::min(1e-12, quad_tol / 100);
    opt.abs_tol = 1e-300;
    quad::Result r = quad::semi_infinite(g_reflected, X, 2 * b, opt);
    r += quad::singular_right(quad::OffsetIntegrand(near_zero), -X, 0, b, opt);
    r += quad::singular_left(quad::OffsetIntegrand(near_zero_in), 0, X / 2, b, opt);
    r += quad::singular_right(quad::OffsetIntegrand(near_x_in), X / 2, X, b, opt);
    r += quad::singular_left(quad::OffsetIntegrand(near_x_out), X, 2 * X, b, opt);
    r += quad::semi_infinite(g, 2 * X, 2 * b, opt);
    double const target = f_alpha(x, p);
    KernelEval out{std::fabs(r.value - target) / target, r.abs_error / target};
    if (!r.converged)
        throw QuadratureError("convolution quadrature did not converge",
                              out.abs_error_bound);
    return out;
}

double rectangle_power_integral(double a1, double b1, double a2, double b2,
                                double e)
{
    if (!(e < 1))
        throw DomainError("rectangle_power_integral: exponent must be < 1");
    double const q = 2 - e;
    double const norm = 1 / ((1 - e) * (2 - e));
    auto phi = [q](double u) { return std::pow(std::fabs(u), q); };
    return norm * (phi(b1 - a2) + phi(a1 - b2) - phi(b1 - b2) - phi(a1 - a2));
}

double power_second_difference(double m, double q)
{
    m = std::fabs(m);
    if (m < 2)
        return std::pow(m + 1, q) - 2 * std::pow(m, q)
               + std::pow(std::fabs(m - 1), q);
    double const x = 1 / m;
    return std::pow(m, q)
           * (std::expm1(q * std::log1p(x)) + std::expm1(q * std::log1p(-x)));
}

double power_first_difference(double m, double q)
{
    if (m < 1)
        return std::pow(m + 1, q) - std::pow(std::fabs(m), q);
    return std::pow(m, q) * std::expm1(q * std::log1p(1 / m));
}

}  // namespace rw
