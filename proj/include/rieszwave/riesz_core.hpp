// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

namespace rw {

//! Riesz exponent with the derived normalization constants
class AlphaParams
{
  public:
    explicit AlphaParams(double alpha);

    double alpha() const noexcept { return alpha_; }
    //! c_{1-alpha}, normalizes the covariance kernel f_alpha
    double c_one_minus_alpha() const noexcept { return c_cov_; }
    //! c_{(1-alpha)/2}, normalizes the mollifier h_alpha
    double c_half() const noexcept { return c_half_; }
    //! A_{alpha-1}
    double a_alpha_minus_one() const noexcept { return a_; }
    //! Exponent (1+alpha)/2 of the mollifier
    double mollifier_exponent() const noexcept { return 0.5 * (1 + alpha_); }

  private:
    double alpha_;
    double c_cov_;
    double c_half_;
    double a_;
};

//! White noise or Riesz-colored noise with exponent alpha
class NoiseKind
{
  public:
    static NoiseKind white() { return NoiseKind{}; }
    static NoiseKind colored(double alpha) { return NoiseKind{AlphaParams{alpha}}; }

    bool is_white() const noexcept { return !params_; }
    AlphaParams const& params() const;
    //! alpha for colored noise, 1 for the white limit
    double exponent() const noexcept { return params_ ? params_->alpha() : 1.0; }
    std::string label() const;

  private:
    NoiseKind() = default;
    explicit NoiseKind(AlphaParams p) : params_(p) {}
    std::optional<AlphaParams> params_;
};

struct KernelEval
{
    double value = 0;
    double abs_error_bound = 0;
};

double gamma_fn(double x);

double c_alpha(double alpha);
double big_a_alpha(double alpha);

double f_alpha(double x, AlphaParams const& p);
double h_alpha(double x, AlphaParams const& p);
//! Fourier transform of f_alpha; identically 1 for white noise
double spectral_density(double xi, NoiseKind const& kind);
double spectral_density(double xi, AlphaParams const& p);

KernelEval dalang_integral(NoiseKind const& kind, double quad_tol);
KernelEval dalang_integral(AlphaParams const& p, double quad_tol);

//! Relative deviation of (h*h)(x) from f(x); error bound is relative too.
KernelEval verify_convolution_identity(AlphaParams const& p, double x,
                                       double quad_tol);

//! Integral of |y-z|^{-e} over [a1,b1] x [a2,b2], e < 1
double rectangle_power_integral(double a1, double b1, double a2, double b2,
                                double e);

//! |m+1|^q - 2|m|^q + |m-1|^q without cancellation for large |m|
double power_second_difference(double m, double q);
//! |m+1|^q - |m|^q for m >= 0, without cancellation for large m
double power_first_difference(double m, double q);

}  // namespace rw
