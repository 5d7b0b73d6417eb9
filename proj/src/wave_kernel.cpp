// SPDX-License-Identifier: Apache-2.0
#include "rieszwave/wave_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "rieszwave/errors.hpp"
#include "rieszwave/quadrature.hpp"

namespace rw {

using std::numbers::pi;

namespace {

//! amp * integral over [U, inf) of xi^power * (cos or sin)(omega xi);
//! omega == 0 with cosine selects the plain power.
struct TailTerm
{
    double amp;
    double power;
    double omega;
    bool cosine;
};

double tail_value(std::vector<TailTerm> const& terms, double U, double* err)
{
    double sum = 0;
    double e = 0;
    for (auto const& term : terms)
    {
        if (term.amp == 0)
            continue;
        if (term.omega == 0)
        {
            if (term.cosine)
                sum += term.amp * std::pow(U, term.power + 1) / (-term.power - 1);
            continue;
        }
        double w = std::fabs(term.omega);
        double te = 0;
        auto J = quad::power_exp_tail(term.power, w, U, &te);
        double v = term.cosine ? J.real() : J.imag();
        if (!term.cosine && term.omega < 0)
            v = -v;
        sum += term.amp * v;
        e += std::fabs(term.amp) * te;
    }
    *err = e;
    return sum;
}

//! Integral over (0, inf) of f, split into panels of the given width up to U,
//! plus the analytic tail. beta0 > 0 flags an xi^{-beta0} singularity at 0.
KernelEval spectral_integral(quad::Integrand const& f, double beta0,
                             double width, double U,
                             std::vector<TailTerm> const& tail, double quad_tol)
{
    long const n_panels = std::max(1L, static_cast<long>(std::ceil(U / width)));
    width = U / static_cast<double>(n_panels);
    quad::Options opt;
    opt.rel_tol = 1e-14;
    opt.abs_tol = quad_tol / (4.0 * static_cast<double>(n_panels));
    quad::Result r;
    if (beta0 > 0)
        r += quad::singular_left(f, 0, width, beta0, opt);
    else
        r += quad::adaptive(f, 0, width, opt);
    for (long i = 1; i < n_panels; ++i)
        r += quad::adaptive(f, i * width, (i + 1) * width, opt);
    double tail_err = 0;
    double const tv = tail_value(tail, U, &tail_err);
    KernelEval out{r.value + tv, r.abs_error + tail_err};
    if (!r.converged)
        throw QuadratureError("spectral quadrature did not converge",
                              out.abs_error_bound);
    return out;
}

// (z - sin z) for all z without cancellation near 0
double z_minus_sin(double z)
{
    if (std::fabs(z) > 0.5)
        return z - std::sin(z);
    double const z2 = z * z;
    double term = z * z2 / 6;
    double sum = 0;
    for (int k = 1; k < 12; ++k)
    {
        sum += term;
        term *= -z2 / ((2 * k + 2) * (2 * k + 3));
    }
    return sum;
}

double check_tol(double quad_tol)
{
    if (!(quad_tol > 0))
        throw DomainError("quad_tol must be positive");
    return quad_tol;
}

}  // namespace

std::string InitialData::check(double lo, double hi) const
{
    std::string msg = u0.check_bounds(lo, hi);
    if (msg.empty())
        msg = v0.check_bounds(lo, hi);
    return msg;
}

double wave_G(double t, double x)
{
    if (t < 0)
        throw DomainError("wave_G: t must be non-negative");
    return std::fabs(x) < t ? 0.5 : 0.0;
}

double i_zero(double t, double x, InitialData const& d)
{
    if (t < 0)
        throw DomainError("i_zero: t must be non-negative");
    double const v = d.v0.antiderivative(x + t) - d.v0.antiderivative(x - t);
    return 0.5 * v + 0.5 * (d.u0(x + t) + d.u0(x - t));
}

double weighted_energy(double t, double a)
{
    if (!(t > 0))
        throw DomainError("weighted_energy: t must be positive");
    if (!(a > -1 && a < 1))
        throw DomainError("weighted_energy: a must lie in (-1,1)");
    return std::pow(t, 1 - a) * std::pow(2.0, 1 - a) * big_a_alpha(a);
}

KernelEval weighted_energy_quadrature(double t, double a, double quad_tol)
{
    check_tol(quad_tol);
    if (!(t > 0) || !(a > -1 && a < 1))
        throw DomainError("weighted_energy_quadrature: need t > 0, a in (-1,1)");
    // 2 * integral over (0,inf) of sin^2(t xi) xi^{a-2}
    auto f = [t, a](double xi) {
        double const s = std::sin(t * xi);
        return s * s * std::pow(xi, a - 2);
    };
    double const width = pi / t;
    double const U = 400 * width;
    std::vector<TailTerm> tail = {{0.5, a - 2, 0, true}, {-0.5, a - 2, 2 * t, true}};
    KernelEval r = spectral_integral(f, a < 0 ? -a : 0, width, U, tail,
                                     quad_tol / 2);
    return {2 * r.value, 2 * r.abs_error_bound};
}

double l1_increment_space(double t, double x, double xp)
{
    double const d = std::fabs(xp - x);
    if (d == 0 || t <= 0)
        return 0;
    if (t <= d / 2)
        return t * t;
    return d * (t - d / 4);
}

double l1_increment_time(double t, double dt)
{
    if (dt < 0)
        throw DomainError("l1_increment_time: dt must be non-negative");
    return t * dt;
}

double script_A(double t, double x, double xp, AlphaParams const& p)
{
    double const d = std::fabs(xp - x);
    if (d == 0 || t <= 0)
        return 0;
    double const al = p.alpha();
    double const q = 2 - al;                 // power in the integrand
    double const kappa = p.c_one_minus_alpha() / ((1 - al) * (2 - al));
    auto P = [q](double u) { return std::pow(std::fabs(u), q + 1) / (2 * (q + 1)); };
    double const dq = std::pow(d, q);

    // Case I: the two cones are disjoint, s <= d/2
    double const s1 = std::min(t, d / 2);
    double total = P(2 * s1)
                   + 0.5 * ((P(d + 2 * s1) - P(d)) - 2 * dq * s1 + (P(d) - P(d - 2 * s1)));
    // Case II: the cones overlap, d/2 < s <= t
    if (t > d / 2)
    {
        total += dq * (t - d / 2)
                 + 0.5 * ((P(2 * t + d) - P(2 * d)) + P(2 * t - d)
                          - 2 * (P(2 * t) - P(d)));
    }
    return kappa * total;
}

double script_B(double t, double dt, AlphaParams const& p)
{
    if (dt < 0)
        throw DomainError("script_B: dt must be non-negative");
    if (dt == 0 || t <= 0)
        return 0;
    double const al = p.alpha();
    double const q = 2 - al;
    double const kappa = p.c_one_minus_alpha() / ((1 - al) * (2 - al));
    auto pw = [q](double u) { return std::pow(u, q + 1); };
    double const bracket = (pw(2 * t + 2 * dt) - pw(2 * dt))
                           - 2 * (pw(2 * t + dt) - pw(dt)) + pw(2 * t);
    return kappa * (t * std::pow(dt, q) + bracket / (4 * (q + 1)));
}

double additive_variance(double t, NoiseKind const& kind)
{
    if (t < 0)
        throw DomainError("additive_variance: t must be non-negative");
    if (kind.is_white())
        return t * t / 4;
    double const al = kind.params().alpha();
    return std::pow(2.0, 2 - al) * kind.params().a_alpha_minus_one()
           * std::pow(t, 3 - al) / (2 * pi * (3 - al));
}

KernelEval gaussian_increment_variance(double t, double dx, NoiseKind const& kind,
                                       double quad_tol)
{
    check_tol(quad_tol);
    if (!(t > 0) || dx < 0)
        throw DomainError("gaussian_increment_variance: need t > 0, dx >= 0");
    if (dx == 0)
        return {0, 0};
    double const e = kind.exponent() - 1;
    double const d = dx;
    // (1/pi) * integral over (0,inf) of xi^{e-3} sin^2(xi d/2) (2t xi - sin 2t xi)
    auto f = [=](double xi) {
        double const s = std::sin(0.5 * xi * d);
        return std::pow(xi, e - 3) * s * s * z_minus_sin(2 * t * xi);
    };
    double const width = std::min(2 * pi / d, pi / t) / 2;
    double U = std::max(64 / d, 32 / t);
    double const w_diff = std::fabs(2 * t - d);
    bool const use_diff = w_diff * U >= 30;
    if (!use_diff && w_diff > 1e-6 * (t + d))
        U = std::min(30 / w_diff, 1e4 * U);
    std::vector<TailTerm> tail = {
        {t, e - 2, 0, true},
        {-t, e - 2, d, true},
        {-0.5, e - 3, 2 * t, false},
        {0.25, e - 3, 2 * t + d, false},
    };
    double extra_err = 0;
    if (w_diff * U >= 30)
        tail.push_back({0.25, e - 3, 2 * t - d, false});
    else
        extra_err = 0.25 * w_diff * std::pow(U, e - 1) / (1 - e);
    KernelEval r = spectral_integral(f, 0, width, U, tail, quad_tol * pi / 2);
    return {r.value / pi, (r.abs_error_bound + extra_err) / pi};
}

KernelEval gaussian_increment_variance(double t, double dx, AlphaParams const& p,
                                       double quad_tol)
{
    return gaussian_increment_variance(t, dx, NoiseKind::colored(p.alpha()),
                                       quad_tol);
}

KernelEval gaussian_time_increment_variance(double t, double dt,
                                            NoiseKind const& kind,
                                            double quad_tol)
{
    check_tol(quad_tol);
    if (!(t > 0) || dt < 0)
        throw DomainError("gaussian_time_increment_variance: need t > 0, dt >= 0");
    if (dt == 0)
        return {0, 0};
    double const e = kind.exponent() - 1;
    double const tau = dt;
    // Q(xi) = xi^2 * integral over the time variable of the squared kernel
    // difference; series for small xi, where the direct form cancels
    std::vector<double> series;
    {
        double fact_even = 1;  // (2n)!
        double fact_odd = 1;   // (2n+1)!
        for (int n = 1; n <= 14; ++n)
        {
            fact_even *= (2 * n - 1) * (2 * n);
            fact_odd = fact_even * (2 * n + 1);
            double const k = 2 * n + 1;
            double const sgn = (n % 2 == 1) ? 1 : -1;
            double qn = t * sgn * std::pow(tau, 2 * n) / fact_even;
            qn += -sgn / fact_odd
                  * (-(std::pow(2 * t + 2 * tau, k) + std::pow(2 * t, k)) / 4
                     + (std::pow(2 * t + tau, k) - std::pow(tau, k)) / 2);
            series.push_back(qn);
        }
    }
    double const reach = 2 * t + 2 * tau;
    auto Q = [&](double xi) {
        if (xi * reach < 1)
        {
            double const x2 = xi * xi;
            double pw = x2;
            double sum = 0;
            for (double c : series)
            {
                sum += c * pw;
                pw *= x2;
            }
            return sum;
        }
        double const c = std::cos(tau * xi);
        return t * (1 - c) + tau / 2
               - (std::sin(2 * (t + tau) * xi) + std::sin(2 * t * xi)) / (4 * xi)
               + (std::sin((2 * t + tau) * xi) - std::sin(tau * xi)) / (2 * xi);
    };
    auto f = [&](double xi) { return std::pow(xi, e - 2) * Q(xi); };
    double const width = std::min(pi / (t + tau), 2 * pi / tau) / 2;
    double const U = std::max(64 / tau, 32 / (t + tau));
    std::vector<TailTerm> tail = {
        {t + tau / 2, e - 2, 0, true},
        {-t, e - 2, tau, true},
        {-0.25, e - 3, 2 * (t + tau), false},
        {-0.25, e - 3, 2 * t, false},
        {0.5, e - 3, 2 * t + tau, false},
        {-0.5, e - 3, tau, false},
    };
    KernelEval r = spectral_integral(f, 0, width, U, tail, quad_tol * pi / 2);
    return {r.value / pi, r.abs_error_bound / pi};
}

KernelEval coupled_difference_variance(double t, AlphaParams const& p,
                                       double quad_tol)
{
    check_tol(quad_tol);
    if (!(t > 0))
        throw DomainError("coupled_difference_variance: t must be positive");
    double const e = p.alpha() - 1;
    double const g = e / 2;
    // (1/pi) * integral of (xi^g - 1)^2 xi^{-3} (2t xi - sin 2t xi) / 4
    auto f = [=](double xi) {
        double const m = std::pow(xi, g) - 1;
        return m * m * z_minus_sin(2 * t * xi) / (4 * xi * xi * xi);
    };
    double const width = pi / t / 2;
    double const U = 400 * pi / t;
    std::vector<TailTerm> tail = {
        {t / 2, -2, 0, true},
        {-t, g - 2, 0, true},
        {t / 2, e - 2, 0, true},
        {-0.25, -3, 2 * t, false},
        {0.5, g - 3, 2 * t, false},
        {-0.25, e - 3, 2 * t, false},
    };
    KernelEval r = spectral_integral(f, -e, width, U, tail, quad_tol * pi / 2);
    return {r.value / pi, r.abs_error_bound / pi};
}

}  // namespace rw
