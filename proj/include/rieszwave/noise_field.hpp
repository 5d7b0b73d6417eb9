// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rieszwave/riesz_core.hpp"

namespace rw {

//! Uniform space-time lattice with dx = dt = h.
//!
//! Nodes sit at x_lo - T + j h, j = 0..n_nodes()-1, so the probe window
//! [x_lo, x_hi] keeps its full light cone down to t = 0. Cell j of a time
//! slab is centered on node j.
struct GridSpec
{
    double h = 0.02;
    double T = 1;
    double x_lo = 0;
    double x_hi = 0;

    //! Every violated invariant, one message each
    std::vector<std::string> diagnostics() const;
    void validate() const;

    long n_steps() const;
    long n_window() const;
    long n_nodes() const { return n_window() + 2 * n_steps() + 1; }
    double pad() const { return T; }
    //! Global cell index (position / h) of node 0
    long global_offset() const;
    double node_x(long j) const { return x_lo - T + static_cast<double>(j) * h; }
    long node_of(double x) const;
    long row_of(double t) const;
    //! Cells of slab n that the solver reads
    long active_lo(long n) const { return n == 0 ? 0 : n; }
    long active_hi(long n) const { return n == 0 ? n_nodes() - 1 : n_nodes() - 1 - n; }
};

//! Discretization controls of the white-to-colored coupling
struct CouplingSpec
{
    double eps_tail = 1e-3;
    long near_cells = 128;
    int blocks_per_octave = 8;
    long subcell_taps = 32;
    double max_radius_cells = 7.2e16;

    std::vector<std::string> diagnostics() const;
};

//! Extent of the white support beyond the lattice
struct WhiteLayout
{
    long margin = 0;
    int blocks_per_octave = 8;
    int n_octaves = 0;
    long subcell_margin = 0;

    long block_size(int octave) const;
    long n_far() const { return 2L * blocks_per_octave * n_octaves; }
};

class MollifierWeights;

WhiteLayout layout_for(std::vector<MollifierWeights> const& weights,
                       CouplingSpec const& spec);

class NoiseField
{
  public:
    NoiseField(GridSpec grid, NoiseKind kind, std::uint64_t seed,
               std::uint64_t replicate_id, WhiteLayout layout = {});

    GridSpec const& grid() const noexcept { return grid_; }
    NoiseKind const& kind() const noexcept { return kind_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t replicate_id() const noexcept { return rep_; }
    WhiteLayout const& layout() const noexcept { return layout_; }

    long n_slabs() const noexcept { return n_slabs_; }
    long n_cells() const noexcept { return n_cells_; }
    long row_width() const noexcept { return n_cells_ + 2 * layout_.margin; }

    //! Increment of cell j (lattice node j) in slab n
    double cell(long n, long j) const
    {
        return cells_[static_cast<std::size_t>(n * row_width() + layout_.margin + j)];
    }
    double& cell(long n, long j)
    {
        return cells_[static_cast<std::size_t>(n * row_width() + layout_.margin + j)];
    }
    //! Row n including the white margin; index 0 is margin cell -margin
    double const* extended_row(long n) const
    {
        return cells_.data() + n * row_width();
    }
    double* extended_row(long n) { return cells_.data() + n * row_width(); }
    double const* far_row(long n) const { return far_.data() + n * layout_.n_far(); }
    double* far_row(long n) { return far_.data() + n * layout_.n_far(); }
    long subcell_width() const noexcept { return n_cells_ + 2 * layout_.subcell_margin; }
    double const* subcell_row(long n) const
    {
        return sub_.data() + n * subcell_width();
    }
    double* subcell_row(long n) { return sub_.data() + n * subcell_width(); }

    NoiseField& operator*=(double a);
    NoiseField& add_scaled(double a, NoiseField const& other);

  private:
    GridSpec grid_;
    NoiseKind kind_;
    std::uint64_t seed_;
    std::uint64_t rep_;
    WhiteLayout layout_;
    long n_slabs_;
    long n_cells_;
    std::vector<double> cells_;
    std::vector<double> far_;
    std::vector<double> sub_;
};

NoiseField sample_white(GridSpec const& grid, std::uint64_t seed,
                        std::uint64_t replicate_id, WhiteLayout const& layout = {});

//! Cell-projection taps of the mollifier plus the sub-cell residual filter.
//!
//! tap(m) = (1/h) * integral over cell m and cell 0 of h_alpha(x - y), the
//! conditional mean of the colored cell given the white cells. The residual
//! filter carries the variance lost by that projection.
class MollifierWeights
{
  public:
    MollifierWeights(AlphaParams p, GridSpec const& grid, CouplingSpec const& spec);

    AlphaParams const& params() const noexcept { return p_; }
    double h() const noexcept { return h_; }
    double truncation_radius() const noexcept { return radius_; }
    long radius_cells() const noexcept { return radius_cells_; }
    double tail_l2_fraction() const noexcept { return tail_; }
    double reference_length() const noexcept { return ref_len_; }

    //! Projection tap for offset m (zero beyond the truncation radius)
    double tap(long m) const;
    //! Sum of tap(m) for m in [lo, hi], truncation applied
    double tap_sum(long lo, long hi) const;
    //! Integral of h_alpha over cell j (centered at j h)
    double cell_integral(long j) const;
    std::vector<double> const& residual_taps() const noexcept { return resid_; }

  private:
    double untruncated_sum(long lo, long hi) const;

    AlphaParams p_;
    double h_;
    double scale_;
    double q_;
    double norm_;
    double radius_;
    long radius_cells_;
    double tail_;
    double ref_len_;
    std::vector<double> resid_;
};

MollifierWeights mollifier_weights(double alpha, GridSpec const& grid,
                                   double eps_tail);
MollifierWeights mollifier_weights(double alpha, GridSpec const& grid,
                                   CouplingSpec const& spec);

//! Precomputed convolution of a white field into one colored field
class ColoringPlan
{
  public:
    ColoringPlan(MollifierWeights w, GridSpec const& grid, WhiteLayout const& layout);

    MollifierWeights const& weights() const noexcept { return w_; }
    NoiseField apply(NoiseField const& white) const;
    //! Exact variance of (sum of colored cells j in [lo,hi]) minus
    //! white_coef times the same white sum, under the generator's law
    double band_variance(long lo, long hi, double white_coef) const;

  private:
    MollifierWeights w_;
    GridSpec grid_;
    WhiteLayout layout_;
    long n_cells_;
    std::vector<double> near_;     // taps for |m| <= n_cells + margin
    std::vector<int> far_index_;   // far blocks in use
    std::vector<double> far_;      // n_cells x far_index_.size()
};

NoiseField color_noise(NoiseField const& white, MollifierWeights const& w);

//! Exact covariance of cells at the given lag in one time slab
double cell_cov_target(long lag, NoiseKind const& kind, GridSpec const& grid);
double cell_cov_target(long lag, double alpha, GridSpec const& grid);

struct SpectralBin
{
    double theta = 0;
    double periodogram = 0;
    double expected = 0;
    double stderr_ = 0;
    double deviation_sigma = 0;
};

struct SpectralReport
{
    std::vector<SpectralBin> bins;
    double max_deviation_sigma = 0;
    double loglog_slope = 0;
    bool decreasing_trend = false;
};

//! Periodogram of slab 0 against the spectral density of the cell masses
SpectralReport spectral_validate(NoiseKind const& kind, GridSpec const& grid,
                                 long n_samples, std::uint64_t seed,
                                 CouplingSpec const& spec = {});

//! Spectral density of cell masses on (-pi, pi], in units of h^2
double cell_spectral_density(double theta, NoiseKind const& kind);

void write_binary(std::ostream& os, NoiseField const& field);
NoiseField read_binary(std::istream& is);

}  // namespace rw
