// SPDX-License-Identifier: Apache-2.0
#include "rieszwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "rieszwave/errors.hpp"

namespace rw::quad {
namespace {

// QUADPACK qk21 abscissae and weights
constexpr double xgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double wgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525871614, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double wg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel
{
    double a, b, value, error;
    bool operator<(Panel const& o) const { return error < o.error; }
};

Panel gk21(Integrand const& f, double a, double b)
{
    double const c = 0.5 * (a + b);
    double const r = 0.5 * (b - a);
    double const fc = f(c);
    double kron = wgk[10] * fc;
    double gauss = 0;
    for (int i = 0; i < 10; ++i)
    {
        double const dx = r * xgk[i];
        double const fs = f(c - dx) + f(c + dx);
        kron += wgk[i] * fs;
        if (i % 2 == 1)
            gauss += wg[i / 2] * fs;
    }
    kron *= r;
    gauss *= r;
    double err = std::fabs(kron - gauss);
    if (!std::isfinite(kron))
        err = HUGE_VAL;
    return {a, b, kron, err};
}

}  // namespace

Result& Result::operator+=(Result const& other)
{
    value += other.value;
    abs_error += other.abs_error;
    evaluations += other.evaluations;
    converged = converged && other.converged;
    return *this;
}

Result adaptive(Integrand const& f, double a, double b, Options const& opt)
{
    Result res;
    if (a == b)
        return res;
    std::priority_queue<Panel> heap;
    Panel first = gk21(f, a, b);
    heap.push(first);
    double total = first.value;
    double error = first.error;
    int intervals = 1;
    res.evaluations = 21;
    while (error > std::max(opt.abs_tol, opt.rel_tol * std::fabs(total)))
    {
        if (intervals >= opt.max_intervals)
        {
            res.converged = false;
            break;
        }
        Panel worst = heap.top();
        double const mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
        {
            // cannot subdivide further in floating point
            res.converged = false;
            break;
        }
        heap.pop();
        Panel left = gk21(f, worst.a, mid);
        Panel right = gk21(f, mid, worst.b);
        res.evaluations += 42;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }
    // recompute sums to limit cancellation from running updates
    total = 0;
    error = 0;
    while (!heap.empty())
    {
        total += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    res.value = total;
    res.abs_error = error;
    if (!std::isfinite(total))
        res.converged = false;
    return res;
}

Result singular_left(OffsetIntegrand const& f, double a, double b, double beta,
                     Options const& opt)
{
    if (!(beta < 1))
        throw DomainError("singular_left: exponent must be < 1");
    double const q = beta > 0 ? 1.0 / (1.0 - beta) : 1.0;
    double const len = b - a;
    auto g = [&](double u) {
        if (u <= 0)
            return 0.0;
        double const up = std::pow(u, q - 1);
        double const off = len * up * u;
        return f(a + off, off) * len * q * up;
    };
    return adaptive(g, 0.0, 1.0, opt);
}

Result singular_left(Integrand const& f, double a, double b, double beta,
                     Options const& opt)
{
    return singular_left([&f](double x, double) { return f(x); }, a, b, beta, opt);
}

Result singular_right(OffsetIntegrand const& f, double a, double b, double beta,
                      Options const& opt)
{
    // reflect: x = b - offset
    auto g = [&](double, double off) { return f(b - off, off); };
    return singular_left(g, a, b, beta, opt);
}

Result singular_right(Integrand const& f, double a, double b, double beta,
                      Options const& opt)
{
    return singular_right([&f](double x, double) { return f(x); }, a, b, beta, opt);
}

Result semi_infinite(Integrand const& f, double a, double decay,
                     Options const& opt)
{
    if (!(decay > 1) || !(a > 0))
        throw DomainError("semi_infinite: need decay > 1 and a > 0");
    // x = a u^{-1/(decay-1)} maps (0,1] onto [a, inf)
    double const q = 1.0 / (decay - 1.0);
    auto g = [&](double u) {
        if (u <= 0)
            return 0.0;
        double const x = a * std::pow(u, -q);
        return f(x) * x * q / u;
    };
    return adaptive(g, 0.0, 1.0, opt);
}

std::complex<double> power_exp_tail(double p, double omega, double U, double* err)
{
    using cd = std::complex<double>;
    cd const z(0.0, omega);
    cd term = std::pow(U, p);
    cd sum = term;
    double last = std::abs(term);
    for (int k = 1; k < 60; ++k)
    {
        cd next = term * (-(p - k + 1)) / (z * U);
        double const mag = std::abs(next);
        if (mag > last)
            break;  // asymptotic series started to diverge
        term = next;
        sum += term;
        last = mag;
        if (mag < 1e-18 * std::abs(sum))
            break;
    }
    if (err)
        *err = last / std::fabs(omega);
    return -std::exp(z * U) / z * sum;
}

}  // namespace rw::quad
