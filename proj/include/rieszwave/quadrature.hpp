// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <functional>

namespace rw::quad {

struct Result
{
    double value = 0;
    double abs_error = 0;
    int evaluations = 0;
    bool converged = true;

    Result& operator+=(Result const& other);
};

struct Options
{
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
    int max_intervals = 20000;
};

using Integrand = std::function<double(double)>;
//! Integrand receiving x and its exact distance to the singular endpoint
using OffsetIntegrand = std::function<double(double x, double offset)>;

//! Globally adaptive Gauss-Kronrod (10/21) on a finite interval
Result adaptive(Integrand const& f, double a, double b, Options const& opt = {});

//! Integrand behaving like (x-a)^{-beta} near a, beta < 1.
//! The substitution x = a + (b-a) u^{1/(1-beta)} removes the singularity.
Result singular_left(Integrand const& f, double a, double b, double beta,
                     Options const& opt = {});
Result singular_left(OffsetIntegrand const& f, double a, double b, double beta,
                     Options const& opt = {});

//! Same with the singular point at b
Result singular_right(Integrand const& f, double a, double b, double beta,
                      Options const& opt = {});
Result singular_right(OffsetIntegrand const& f, double a, double b, double beta,
                      Options const& opt = {});

//! Integral over [a, inf) of f = O(x^{-decay}), decay > 1, a > 0
Result semi_infinite(Integrand const& f, double a, double decay,
                     Options const& opt = {});

//! Integral over [U, inf) of x^p e^{i omega x}, p < 0, omega*U >> 1,
//! from the integration-by-parts series. err receives the truncation size.
std::complex<double>
power_exp_tail(double p, double omega, double U, double* err = nullptr);

}  // namespace rw::quad
