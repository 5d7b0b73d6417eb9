// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "rieszwave/presets.hpp"
#include "rieszwave/riesz_core.hpp"

namespace rw {

struct InitialData
{
    Preset u0;
    Preset v0;

    double u0_lip_const() const { return u0.lipschitz(); }
    double u0_sup(double lo, double hi) const { return u0.sup_on(lo, hi); }
    double v0_sup(double lo, double hi) const { return v0.sup_on(lo, hi); }
    //! Spot-check of the declared constants on [lo, hi]; "" when valid
    std::string check(double lo, double hi) const;
};

//! Point (t, x) with the light-cone reach of the data window
struct ConeWindow
{
    double t = 0;
    double x = 0;
    double padding = 0;

    bool valid() const noexcept { return t >= 0 && padding >= t; }
};

//! G_t(x) = 1/2 on |x| < t
double wave_G(double t, double x);

//! d'Alembert term of the initial data
double i_zero(double t, double x, InitialData const& d);

//! Integral of |FG_t|^2 |xi|^a, closed form
double weighted_energy(double t, double a);
//! Same integral computed by quadrature
KernelEval weighted_energy_quadrature(double t, double a, double quad_tol);

double l1_increment_space(double t, double x, double xp);
double l1_increment_time(double t, double dt);

//! Doubly smoothed spatial increment integral, |G - G'| in both factors
double script_A(double t, double x, double xp, AlphaParams const& p);
//! Doubly smoothed temporal increment integral
double script_B(double t, double dt, AlphaParams const& p);

//! Variance of u(t,x) for b = 0, sigma = 1, zero data
double additive_variance(double t, NoiseKind const& kind);

//! Variance of u(t,x+dx) - u(t,x) in the additive case, by quadrature
KernelEval gaussian_increment_variance(double t, double dx, NoiseKind const& kind,
                                       double quad_tol);
KernelEval gaussian_increment_variance(double t, double dx, AlphaParams const& p,
                                       double quad_tol);

//! Variance of u(t+dt,x) - u(t,x) in the additive case, by quadrature
KernelEval gaussian_time_increment_variance(double t, double dt,
                                            NoiseKind const& kind,
                                            double quad_tol);

//! Variance of u_alpha(t,x) - u(t,x) under the coupling, additive case
KernelEval coupled_difference_variance(double t, AlphaParams const& p,
                                       double quad_tol);

}  // namespace rw
