// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rieszwave/noise_field.hpp"
#include "rieszwave/wave_kernel.hpp"

namespace rw {

struct CoefficientSet
{
    Preset b;
    Preset sigma;
    InitialData data;

    double lip_b() const { return b.lipschitz(); }
    double lip_sigma() const { return sigma.lipschitz(); }
    //! Every preset whose declared constants fail the spot check on [lo, hi]
    std::vector<std::string> diagnostics(double lo, double hi) const;

    static CoefficientSet additive()
    {
        return {Preset::zero(), Preset::constant(1), {Preset::zero(), Preset::zero()}};
    }
};

enum class Scheme
{
    leapfrog,
    picard
};

//! Lattice solution u(n h, x_j) for one noise realization.
//!
//! Row 0 holds u0 at every node. Row n >= 1 is computed on the nodes
//! j in [n-1, J-n+1]; outside that band the entries are unset (NaN).
class SolutionField
{
  public:
    SolutionField(GridSpec grid, CoefficientSet coeffs, NoiseKind kind, Scheme scheme);

    GridSpec const& grid() const noexcept { return grid_; }
    CoefficientSet const& coeffs() const noexcept { return coeffs_; }
    NoiseKind const& noise_kind() const noexcept { return kind_; }
    Scheme scheme() const noexcept { return scheme_; }
    long n_rows() const noexcept { return n_rows_; }
    long n_cols() const noexcept { return n_cols_; }

    double at(long n, long j) const { return v_[static_cast<std::size_t>(n * n_cols_ + j)]; }
    double& at(long n, long j) { return v_[static_cast<std::size_t>(n * n_cols_ + j)]; }
    double* row(long n) { return v_.data() + n * n_cols_; }
    double const* row(long n) const { return v_.data() + n * n_cols_; }
    //! Value at the lattice node (t, x)
    double value(double t, double x) const;
    long valid_lo(long n) const noexcept { return n == 0 ? 0 : n - 1; }
    long valid_hi(long n) const noexcept { return n == 0 ? n_cols_ - 1 : n_cols_ - n; }
    //! sup |this - other| over rows 0..n_rows-1 and the probe window
    double sup_distance(SolutionField const& other) const;

    //! Picard only: sup distances between successive iterates
    std::vector<double> const& history() const noexcept { return history_; }
    int iterations() const noexcept { return static_cast<int>(history_.size()); }
    void set_history(std::vector<double> h) { history_ = std::move(h); }

  private:
    GridSpec grid_;
    CoefficientSet coeffs_;
    NoiseKind kind_;
    Scheme scheme_;
    long n_rows_;
    long n_cols_;
    std::vector<double> v_;
    std::vector<double> history_;
};

SolutionField solve_leapfrog(NoiseField const& noise, CoefficientSet const& c);

//! Iterates the discrete mild map from u^(0) = I0 on a fixed noise field.
//! Stops after n_iter maps or once the sup distance of successive iterates
//! is at most tol.
SolutionField solve_picard(NoiseField const& noise, CoefficientSet const& c,
                           int n_iter, double tol);

struct CoupledSolution
{
    SolutionField white;
    std::vector<std::pair<double, SolutionField>> colored;

    SolutionField const& at(double alpha) const;
};

//! One white field drives u and every u_alpha. Plans are built once and
//! reused across replicates.
class CoupledSolver
{
  public:
    CoupledSolver(GridSpec grid, std::vector<double> alphas, CouplingSpec spec = {});

    GridSpec const& grid() const noexcept { return grid_; }
    std::vector<double> const& alphas() const noexcept { return alphas_; }
    WhiteLayout const& layout() const noexcept { return layout_; }
    ColoringPlan const& plan(std::size_t i) const { return *plans_[i]; }

    NoiseField white(std::uint64_t seed, std::uint64_t replicate) const;
    CoupledSolution solve(NoiseField const& white, CoefficientSet const& c) const;
    CoupledSolution solve(std::uint64_t seed, std::uint64_t replicate,
                          CoefficientSet const& c) const;
    //! Colored fields only, without solving
    NoiseField colored(std::size_t i, NoiseField const& white) const;

  private:
    GridSpec grid_;
    std::vector<double> alphas_;
    CouplingSpec spec_;
    WhiteLayout layout_;
    std::vector<std::shared_ptr<ColoringPlan const>> plans_;
};

CoupledSolution solve_coupled(NoiseField const& white, std::vector<double> const& alphas,
                              CoefficientSet const& c, CouplingSpec const& spec = {});

//! Exact variance of u(t, x_j) in the additive case (b = 0, sigma = 1, zero
//! data) under the lattice noise law; white_coef = 1 gives u_alpha - u.
//! A null plan selects white noise.
double lattice_additive_variance(ColoringPlan const* plan, GridSpec const& grid,
                                 long n, long j, double white_coef = 0);

//! Probe rows: replicate_id, alpha_or_white, t, x, value
void write_probe_header(std::ostream& os);
void write_probes(std::ostream& os, std::uint64_t replicate_id, SolutionField const& u,
                  std::vector<std::pair<double, double>> const& probes);

}  // namespace rw
