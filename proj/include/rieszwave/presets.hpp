// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace rw {

enum class PresetKind
{
    zero,
    constant,
    affine,
    sine,
    tanh_scaled,
    bump
};

//! Closed-form scalar function with a certified Lipschitz constant.
//!
//! Textual forms: zero(), constant(c), affine(a,b) = a + b x,
//! sin(A,k,c) = A sin(k x) + c, tanh(A,k,c) = A tanh(k x) + c,
//! bump(A,w) = A (1 - (x/w)^2)^2 on |x| < w.
class Preset
{
  public:
    Preset() = default;
    Preset(PresetKind kind, std::vector<double> params);

    static Preset parse(std::string const& text);
    static Preset zero() { return {}; }
    static Preset constant(double c) { return {PresetKind::constant, {c}}; }

    PresetKind kind() const noexcept { return kind_; }
    std::vector<double> const& params() const noexcept { return p_; }
    bool is_zero() const noexcept;

    double operator()(double x) const;
    //! Primitive vanishing at x = 0
    double antiderivative(double x) const;
    double lipschitz() const;
    //! sup |f| over [lo, hi]; global bound for bounded presets
    double sup_on(double lo, double hi) const;
    //! Spot-check of the declared constants; returns the diagnostic or ""
    std::string check_bounds(double lo, double hi, int n_points = 10000) const;

    std::string to_string() const;

  private:
    PresetKind kind_ = PresetKind::zero;
    std::vector<double> p_;
};

}  // namespace rw
