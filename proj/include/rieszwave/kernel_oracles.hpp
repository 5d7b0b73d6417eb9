// SPDX-License-Identifier: Apache-2.0
// Independent numerical references for the kernel closed forms. Nothing here
// calls the closed forms it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "rieszwave/quadrature.hpp"
#include "rieszwave/riesz_core.hpp"

namespace rw::oracle {

using Intervals = std::vector<std::pair<double, double>>;

//! integral over z in [lo, hi] of |y - z|^{-a}
inline double inner_power(double y, double lo, double hi, double a)
{
    double const e = 1 - a;
    auto F = [e](double u) { return std::copysign(std::pow(std::fabs(u), e) / e, u); };
    return F(hi - y) - F(lo - y);
}

//! (1/4) c_{1-a} times the double integral of |y - z|^{-a} over sets x sets.
//! The z integral is exact, the y integral adaptive.
inline double smoothed(Intervals const& sets, double a, double rel_tol = 1e-11)
{
    double const c = c_alpha(1 - a);
    quad::Options opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = 1e-300;
    double total = 0;
    for (auto [l1, h1] : sets)
    {
        for (auto [l2, h2] : sets)
        {
            std::vector<double> pts = {l1, h1};
            for (double p : {l2, h2})
                if (p > l1 && p < h1)
                    pts.push_back(p);
            std::sort(pts.begin(), pts.end());
            for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            {
                auto g = [&](double y) { return inner_power(y, l2, h2, a); };
                total += quad::adaptive(g, pts[i], pts[i + 1], opt).value;
            }
        }
    }
    return c * total / 4;
}

//! support of |1_{(-s,s)} - 1_{(d-s,d+s)}|
inline Intervals space_difference(double s, double d)
{
    if (2 * s <= d)
        return {{-s, s}, {d - s, d + s}};
    return {{-s, d - s}, {s, d + s}};
}

//! support of |1_{(-s-tau,s+tau)} - 1_{(-s,s)}|
inline Intervals time_difference(double s, double tau)
{
    return {{-s - tau, -s}, {s, s + tau}};
}

inline double script_A(double t, double d, double a)
{
    quad::Options opt;
    opt.rel_tol = 1e-9;
    opt.abs_tol = 1e-300;
    auto f = [&](double s) { return smoothed(space_difference(s, d), a); };
    if (t <= d / 2)
        return quad::adaptive(f, 0, t, opt).value;
    return quad::adaptive(f, 0, d / 2, opt).value + quad::adaptive(f, d / 2, t, opt).value;
}

inline double script_B(double t, double tau, double a)
{
    quad::Options opt;
    opt.rel_tol = 1e-9;
    opt.abs_tol = 1e-300;
    auto f = [&](double s) { return smoothed(time_difference(s, tau), a); };
    return quad::adaptive(f, 0, t, opt).value;
}

//! Composite trapezoid for the integral over R of |xi|^{a-1}/(1+xi^2):
//! xi = u^{1/a} on [0,1], xi = e^v on [1, 1e6]
inline double dalang_trapezoid(double a, long n = 400000)
{
    auto trap = [n](auto&& g, double lo, double hi) {
        double const step = (hi - lo) / static_cast<double>(n);
        double s = 0.5 * (g(lo) + g(hi));
        for (long i = 1; i < n; ++i)
            s += g(lo + step * static_cast<double>(i));
        return s * step;
    };
    auto near = [a](double u) { return 1 / (a * (1 + std::pow(u, 2 / a))); };
    auto far = [a](double v) {
        double const x = std::exp(v);
        return std::pow(x, a) / (1 + x * x);
    };
    return 2 * (trap(near, 0, 1) + trap(far, 0, std::log(1e6)));
}

}  // namespace rw::oracle
