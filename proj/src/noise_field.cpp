// SPDX-License-Identifier: Apache-2.0
#include "rieszwave/format.hpp"
#include "rieszwave/noise_field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <memory>
#include <numbers>
#include <ostream>

#include "rieszwave/errors.hpp"
#include "rieszwave/rng.hpp"

namespace rw {

using std::numbers::pi;

namespace {

bool integral_ratio(double a, double h, long* out)
{
    double const r = a / h;
    double const n = std::round(r);
    if (std::fabs(r - n) > 1e-9 * std::max(1.0, std::fabs(r)))
        return false;
    if (out)
        *out = static_cast<long>(n);
    return true;
}

}  // namespace

//---------------------------------------------------------------------------//
// GridSpec
//---------------------------------------------------------------------------//

std::vector<std::string> GridSpec::diagnostics() const
{
    std::vector<std::string> d;
    if (!(h > 0) || !std::isfinite(h))
        d.push_back("h: must be positive and finite");
    if (!(T >= 0) || !std::isfinite(T))
        d.push_back("T: must be non-negative and finite");
    if (!(x_hi >= x_lo))
        d.push_back("x_hi: must not be smaller than x_lo");
    if (!d.empty())
        return d;
    if (!integral_ratio(T, h, nullptr))
        d.push_back("T: T/h must be an integer");
    if (!integral_ratio(x_hi - x_lo, h, nullptr))
        d.push_back("x_hi: (x_hi - x_lo)/h must be an integer");
    if (!integral_ratio(x_lo, h, nullptr))
        d.push_back("x_lo: x_lo/h must be an integer (cells sit on the global lattice)");
    return d;
}

void GridSpec::validate() const
{
    auto d = diagnostics();
    if (!d.empty())
        throw DomainError("invalid grid: " + d.front());
}

long GridSpec::n_steps() const
{
    long n = 0;
    integral_ratio(T, h, &n);
    return n;
}

long GridSpec::n_window() const
{
    long n = 0;
    integral_ratio(x_hi - x_lo, h, &n);
    return n;
}

long GridSpec::global_offset() const
{
    long n = 0;
    integral_ratio(x_lo, h, &n);
    return n - n_steps();
}

long GridSpec::node_of(double x) const
{
    long j = 0;
    if (!integral_ratio(x - (x_lo - T), h, &j) || j < 0 || j >= n_nodes())
        throw DomainError("x = " + std::to_string(x) + " is not a lattice node");
    return j;
}

long GridSpec::row_of(double t) const
{
    long n = 0;
    if (!integral_ratio(t, h, &n) || n < 0 || n > n_steps())
        throw DomainError("t = " + std::to_string(t) + " is not a lattice row");
    return n;
}

std::vector<std::string> CouplingSpec::diagnostics() const
{
    std::vector<std::string> d;
    if (!(eps_tail > 0 && eps_tail < 1))
        d.push_back("coupling.eps_tail: must lie in (0,1)");
    if (blocks_per_octave < 1)
        d.push_back("coupling.blocks_per_octave: must be >= 1");
    if (near_cells < 1 || (blocks_per_octave >= 1 && near_cells % blocks_per_octave != 0))
        d.push_back("coupling.near_cells: must be a positive multiple of blocks_per_octave");
    if (subcell_taps < 0)
        d.push_back("coupling.subcell_taps: must be >= 0");
    if (!(max_radius_cells >= 1) || max_radius_cells > 9e18)
        d.push_back("coupling.max_radius_cells: must lie in [1, 9e18]");
    return d;
}

long WhiteLayout::block_size(int octave) const
{
    return (margin << octave) / blocks_per_octave;
}

WhiteLayout layout_for(std::vector<MollifierWeights> const& weights,
                       CouplingSpec const& spec)
{
    WhiteLayout lay;
    lay.margin = spec.near_cells;
    lay.blocks_per_octave = spec.blocks_per_octave;
    lay.subcell_margin = spec.subcell_taps;
    for (auto const& w : weights)
    {
        int n = 0;
        while (static_cast<double>(lay.margin) * std::ldexp(1.0, n)
               < static_cast<double>(w.radius_cells()))
            ++n;
        lay.n_octaves = std::max(lay.n_octaves, n);
    }
    return lay;
}

//---------------------------------------------------------------------------//
// NoiseField
//---------------------------------------------------------------------------//

NoiseField::NoiseField(GridSpec grid, NoiseKind kind, std::uint64_t seed,
                       std::uint64_t replicate_id, WhiteLayout layout)
    : grid_(grid)
    , kind_(kind)
    , seed_(seed)
    , rep_(replicate_id)
    , layout_(layout)
{
    grid_.validate();
    n_slabs_ = grid_.n_steps();
    n_cells_ = grid_.n_nodes();
    cells_.assign(static_cast<std::size_t>(n_slabs_ * row_width()), 0.0);
    far_.assign(static_cast<std::size_t>(n_slabs_ * layout_.n_far()), 0.0);
    sub_.assign(static_cast<std::size_t>(n_slabs_ * subcell_width()), 0.0);
}

NoiseField& NoiseField::operator*=(double a)
{
    for (auto& v : cells_)
        v *= a;
    for (auto& v : far_)
        v *= a;
    for (auto& v : sub_)
        v *= a;
    return *this;
}

NoiseField& NoiseField::add_scaled(double a, NoiseField const& other)
{
    if (other.cells_.size() != cells_.size() || other.far_.size() != far_.size()
        || other.sub_.size() != sub_.size())
        throw DomainError("noise fields have different supports");
    for (std::size_t i = 0; i < cells_.size(); ++i)
        cells_[i] += a * other.cells_[i];
    for (std::size_t i = 0; i < far_.size(); ++i)
        far_[i] += a * other.far_[i];
    for (std::size_t i = 0; i < sub_.size(); ++i)
        sub_[i] += a * other.sub_[i];
    return *this;
}

NoiseField sample_white(GridSpec const& grid, std::uint64_t seed,
                        std::uint64_t replicate_id, WhiteLayout const& layout)
{
    NoiseField f(grid, NoiseKind::white(), seed, replicate_id, layout);
    KeyedNormal const cell_rng(seed, Stream::cell, replicate_id);
    KeyedNormal const far_rng(seed, Stream::far_block, replicate_id);
    KeyedNormal const sub_rng(seed, Stream::subcell, replicate_id);
    double const h = grid.h;
    long const g0 = grid.global_offset();

    // fills out[i] = scale * normal(first + i) using each generated pair once
    auto fill = [](KeyedNormal const& rng, std::uint32_t slot, std::int64_t first,
                   long count, double scale, double* out) {
        std::int64_t i = first;
        std::int64_t const end = first + count;
        while (i < end)
        {
            std::int64_t const pair = i >= 0 ? i / 2 : -((-i + 1) / 2);
            auto const z = rng.normal_pair(pair, slot);
            for (int s = static_cast<int>(i - 2 * pair); s < 2 && i < end; ++s, ++i)
                out[i - first] = scale * z[static_cast<std::size_t>(s)];
        }
    };

    for (long n = 0; n < f.n_slabs(); ++n)
    {
        auto const slot = static_cast<std::uint32_t>(n);
        fill(cell_rng, slot, g0 - layout.margin, f.row_width(), h, f.extended_row(n));
        fill(sub_rng, slot, g0 - layout.subcell_margin, f.subcell_width(), 1.0,
             f.subcell_row(n));
        double* far = f.far_row(n);
        for (int o = 0; o < layout.n_octaves; ++o)
        {
            double const s = h * std::sqrt(static_cast<double>(layout.block_size(o)));
            for (int b = 0; b < layout.blocks_per_octave; ++b)
            {
                long const id = 2L * (o * layout.blocks_per_octave + b);
                auto const z = far_rng.normal_pair(id / 2, slot);
                far[id] = s * z[0];
                far[id + 1] = s * z[1];
            }
        }
    }
    return f;
}

//---------------------------------------------------------------------------//
// MollifierWeights
//---------------------------------------------------------------------------//

namespace {

// residual spectral density of the projected coupling, dimensionless
double residual_density(double theta, double alpha)
{
    if (theta == 0)
        return 0;
    double const g = (1 - alpha) / 2;
    double const st = std::sin(theta / 2);
    double const c4 = 4 * st * st;
    int const M = 400;
    double s1 = 0;
    double s2 = 0;
    for (int m = -M; m <= M; ++m)
    {
        double const u = std::fabs(theta + 2 * pi * m);
        double const w = c4 / (u * u);
        double const a = std::pow(u, -g);
        s1 += w * a;
        s2 += w * a * a;
    }
    double const up = theta + 2 * pi * (M + 0.5);
    double const um = 2 * pi * (M + 0.5) - theta;
    for (int q = 1; q <= 2; ++q)
    {
        double const e = q * g + 1;
        double const tail = c4 / (2 * pi) * (std::pow(up, -e) + std::pow(um, -e)) / e;
        (q == 1 ? s1 : s2) += tail;
    }
    return std::max(0.0, s2 - s1 * s1);
}

}  // namespace

MollifierWeights::MollifierWeights(AlphaParams p, GridSpec const& grid,
                                   CouplingSpec const& spec)
    : p_(p), h_(grid.h)
{
    grid.validate();
    auto diag = spec.diagnostics();
    if (!diag.empty())
        throw DomainError(diag.front());
    double const al = p.alpha();
    double const beta = p.mollifier_exponent();
    q_ = 2 - beta;
    norm_ = 1 / ((1 - beta) * (2 - beta));
    scale_ = p.c_half() * std::pow(h_, 1 - beta) * norm_;

    ref_len_ = static_cast<double>(grid.n_nodes()) * h_;
    double const c = p.c_one_minus_alpha();
    double const X = p.c_half() * p.c_half() * (1 - al) * (2 - al) / (al * c);
    double const eps = spec.eps_tail;
    // the L2 tail bound assumes R >= the reference length; below it the
    // cross term between the kept core and the tail is not small
    double const r_needed = ref_len_ * std::max(1.0, std::pow(X / eps, 1 / al));
    double const cells = std::ceil(r_needed / h_ - 1e-9);
    if (!(cells <= spec.max_radius_cells))
    {
        double const achieved
            = X * std::pow(ref_len_ / (spec.max_radius_cells * h_), al);
        throw TruncationError(
            "mollifier radius " + format_real(cells) + " cells exceeds the cap of "
                + format_real(spec.max_radius_cells) + " cells for alpha="
                + format_real(al) + "; tail fraction at the cap is "
                + format_real(achieved),
            achieved);
    }
    radius_cells_ = std::max(1L, static_cast<long>(cells));
    radius_ = static_cast<double>(radius_cells_) * h_;
    tail_ = X * std::pow(ref_len_ / radius_, al);

    long const K = spec.subcell_taps;
    if (K > 0)
    {
        int const Q = 2048;
        std::vector<double> amp(Q / 2 + 1);
        double const unit = std::pow(h_, 3 - al);
        for (int k = 0; k <= Q / 2; ++k)
            amp[k] = std::sqrt(unit * residual_density(2 * pi * k / Q, al));
        resid_.assign(static_cast<std::size_t>(K + 1), 0.0);
        for (long m = 0; m <= K; ++m)
        {
            double s = amp[0] + amp[Q / 2] * ((m % 2) ? -1 : 1);
            for (int k = 1; k < Q / 2; ++k)
                s += 2 * amp[k] * std::cos(2 * pi * k * m / Q);
            resid_[m] = s / Q;
        }
    }
}

double MollifierWeights::tap(long m) const
{
    if (std::labs(m) > radius_cells_)
        return 0;
    return scale_ * power_second_difference(static_cast<double>(m), q_);
}

double MollifierWeights::untruncated_sum(long lo, long hi) const
{
    auto D = [this](long m) {
        if (m >= 0)
            return power_first_difference(static_cast<double>(m), q_);
        return -power_first_difference(static_cast<double>(-m - 1), q_);
    };
    return scale_ * (D(hi) - D(lo - 1));
}

double MollifierWeights::tap_sum(long lo, long hi) const
{
    lo = std::max(lo, -radius_cells_);
    hi = std::min(hi, radius_cells_);
    if (lo > hi)
        return 0;
    if (hi - lo < 16)
    {
        double s = 0;
        for (long m = lo; m <= hi; ++m)
            s += tap(m);
        return s;
    }
    return untruncated_sum(lo, hi);
}

double MollifierWeights::cell_integral(long j) const
{
    double const e = 1 - p_.mollifier_exponent();
    double const a = std::fabs(static_cast<double>(j));
    double const pref = p_.c_half() * std::pow(h_, e) / e;
    if (j == 0)
        return 2 * pref * std::pow(0.5, e);
    return pref * (std::pow(a + 0.5, e) - std::pow(a - 0.5, e));
}

MollifierWeights mollifier_weights(double alpha, GridSpec const& grid, double eps_tail)
{
    CouplingSpec spec;
    spec.eps_tail = eps_tail;
    return MollifierWeights(AlphaParams{alpha}, grid, spec);
}

MollifierWeights mollifier_weights(double alpha, GridSpec const& grid,
                                   CouplingSpec const& spec)
{
    return MollifierWeights(AlphaParams{alpha}, grid, spec);
}

//---------------------------------------------------------------------------//
// ColoringPlan
//---------------------------------------------------------------------------//

ColoringPlan::ColoringPlan(MollifierWeights w, GridSpec const& grid,
                           WhiteLayout const& layout)
    : w_(std::move(w)), grid_(grid), layout_(layout), n_cells_(grid.n_nodes())
{
    long const K0 = layout.margin;
    double const coverage = static_cast<double>(K0) * std::ldexp(1.0, layout.n_octaves);
    if (static_cast<double>(w_.radius_cells()) > coverage && w_.radius_cells() > K0)
        throw DomainError("insufficient padding: white support reaches "
                          + std::to_string(coverage) + " cells, mollifier needs "
                          + std::to_string(w_.radius_cells()));
    long const n_resid = static_cast<long>(w_.residual_taps().size()) - 1;
    if (n_resid > layout.subcell_margin)
        throw DomainError("insufficient padding: sub-cell margin smaller than the residual filter");

    near_.resize(static_cast<std::size_t>(n_cells_ + K0));
    for (long m = 0; m < n_cells_ + K0; ++m)
        near_[m] = w_.tap(m);

    long const J = n_cells_ - 1;
    for (int o = 0; o < layout.n_octaves; ++o)
    {
        long const size = layout.block_size(o);
        for (int b = 0; b < layout.blocks_per_octave; ++b)
        {
            long const d_in = K0 * ((1L << o) - 1) + 1 + b * size;
            if (K0 + d_in > w_.radius_cells())
                continue;
            for (int side = 0; side < 2; ++side)
                far_index_.push_back(2 * (o * layout.blocks_per_octave + b) + side);
        }
    }
    std::size_t const nf = far_index_.size();
    far_.assign(static_cast<std::size_t>(n_cells_) * nf, 0.0);
    for (std::size_t f = 0; f < nf; ++f)
    {
        int const id = far_index_[f];
        int const side = id % 2;
        int const ob = id / 2;
        int const o = ob / layout.blocks_per_octave;
        int const b = ob % layout.blocks_per_octave;
        long const size = layout.block_size(o);
        long const d_in = K0 * ((1L << o) - 1) + 1 + b * size;
        long const d_out = d_in + size - 1;
        for (long j = 0; j < n_cells_; ++j)
        {
            long const base = (side == 0 ? j : J - j) + K0;
            far_[static_cast<std::size_t>(j) * nf + f]
                = w_.tap_sum(base + d_in, base + d_out) / static_cast<double>(size);
        }
    }
}

NoiseField ColoringPlan::apply(NoiseField const& white) const
{
    if (!white.kind().is_white())
        throw DomainError("color_noise: input field must be white");
    GridSpec const& g = white.grid();
    if (g.h != grid_.h || g.T != grid_.T || g.x_lo != grid_.x_lo || g.x_hi != grid_.x_hi)
        throw DomainError("color_noise: grids do not match");
    WhiteLayout const& lay = white.layout();
    if (lay.margin != layout_.margin || lay.n_octaves < layout_.n_octaves
        || lay.blocks_per_octave != layout_.blocks_per_octave
        || lay.subcell_margin < layout_.subcell_margin)
        throw DomainError("color_noise: insufficient padding in the white field");

    NoiseField out(grid_, NoiseKind::colored(w_.params().alpha()), white.seed(),
                   white.replicate_id());
    long const K0 = layout_.margin;
    long const R = w_.radius_cells();
    long const width = white.row_width();
    std::size_t const nf = far_index_.size();
    auto const& rho = w_.residual_taps();
    long const nr = static_cast<long>(rho.size()) - 1;
    long const sm = lay.subcell_margin;

    for (long n = 0; n < out.n_slabs(); ++n)
    {
        double const* ext = white.extended_row(n);
        double const* far = white.far_row(n);
        double const* sub = white.subcell_row(n);
        for (long j = g.active_lo(n); j <= g.active_hi(n); ++j)
        {
            long const c = j + K0;
            long const e_lo = std::max(0L, c - R);
            long const e_hi = std::min(width - 1, c + R);
            double acc = 0;
            for (long e = e_lo; e <= c; ++e)
                acc += near_[static_cast<std::size_t>(c - e)] * ext[e];
            for (long e = c + 1; e <= e_hi; ++e)
                acc += near_[static_cast<std::size_t>(e - c)] * ext[e];
            double const* fw = far_.data() + static_cast<std::size_t>(j) * nf;
            for (std::size_t f = 0; f < nf; ++f)
                acc += fw[f] * far[far_index_[f]];
            if (nr >= 0)
            {
                long const s = j + sm;
                acc += rho[0] * sub[s];
                for (long k = 1; k <= nr; ++k)
                    acc += rho[static_cast<std::size_t>(k)] * (sub[s - k] + sub[s + k]);
            }
            out.cell(n, j) = acc;
        }
    }
    return out;
}

double ColoringPlan::band_variance(long lo, long hi, double white_coef) const
{
    long const K0 = layout_.margin;
    long const width = n_cells_ + 2 * K0;
    double const h2 = grid_.h * grid_.h;
    double var = 0;
    for (long e = 0; e < width; ++e)
    {
        double c = w_.tap_sum(lo + K0 - e, hi + K0 - e);
        long const j = e - K0;
        if (j >= lo && j <= hi)
            c -= white_coef;
        var += h2 * c * c;
    }
    std::size_t const nf = far_index_.size();
    for (std::size_t f = 0; f < nf; ++f)
    {
        int const o = far_index_[f] / 2 / layout_.blocks_per_octave;
        double c = 0;
        for (long j = lo; j <= hi; ++j)
            c += far_[static_cast<std::size_t>(j) * nf + f];
        var += c * c * h2 * static_cast<double>(layout_.block_size(o));
    }
    auto const& rho = w_.residual_taps();
    long const nr = static_cast<long>(rho.size()) - 1;
    for (long i = lo - nr; i <= hi + nr; ++i)
    {
        double c = 0;
        for (long j = std::max(lo, i - nr); j <= std::min(hi, i + nr); ++j)
            c += rho[static_cast<std::size_t>(std::labs(j - i))];
        var += c * c;
    }
    return var;
}

NoiseField color_noise(NoiseField const& white, MollifierWeights const& w)
{
    ColoringPlan plan(w, white.grid(), white.layout());
    return plan.apply(white);
}

//---------------------------------------------------------------------------//
// Targets and spectral validation
//---------------------------------------------------------------------------//

double cell_cov_target(long lag, NoiseKind const& kind, GridSpec const& grid)
{
    double const h = grid.h;
    if (kind.is_white())
        return lag == 0 ? h * h : 0.0;
    double const al = kind.params().alpha();
    double const c = kind.params().c_one_minus_alpha();
    return h * c * std::pow(h, 2 - al)
           * power_second_difference(static_cast<double>(lag), 2 - al)
           / ((1 - al) * (2 - al));
}

double cell_cov_target(long lag, double alpha, GridSpec const& grid)
{
    return cell_cov_target(lag, NoiseKind::colored(alpha), grid);
}

double cell_spectral_density(double theta, NoiseKind const& kind)
{
    if (kind.is_white())
        return 1;
    if (theta == 0)
        throw SingularityError("cell spectral density is singular at 0");
    double const e = kind.params().alpha() - 1;
    double const st = std::sin(theta / 2);
    double const c4 = 4 * st * st;
    int const M = 2000;
    double s = 0;
    for (int m = -M; m <= M; ++m)
    {
        double const u = std::fabs(theta + 2 * pi * m);
        s += std::pow(u, e) * c4 / (u * u);
    }
    double const up = theta + 2 * pi * (M + 0.5);
    double const um = 2 * pi * (M + 0.5) - theta;
    s += c4 / (2 * pi) * (std::pow(up, e - 1) + std::pow(um, e - 1)) / (1 - e);
    return s;
}

SpectralReport spectral_validate(NoiseKind const& kind, GridSpec const& grid,
                                 long n_samples, std::uint64_t seed,
                                 CouplingSpec const& spec)
{
    if (n_samples < 1000)
        throw DomainError("spectral_validate: need at least 1000 samples");
    GridSpec g = grid;
    g.T = g.h;  // one time slab
    g.validate();
    long const M = g.n_nodes();
    if (M < 16)
        throw DomainError("spectral_validate: slab must have at least 16 cells");

    std::vector<MollifierWeights> weights;
    if (!kind.is_white())
        weights.emplace_back(kind.params(), g, spec);
    WhiteLayout const lay = kind.is_white() ? WhiteLayout{} : layout_for(weights, spec);
    std::unique_ptr<ColoringPlan> plan;
    if (!kind.is_white())
        plan = std::make_unique<ColoringPlan>(weights.front(), g, lay);

    double const unit = kind.is_white() ? g.h * g.h : std::pow(g.h, 3 - kind.exponent());
    std::vector<double> taper(static_cast<std::size_t>(M));
    double U = 0;
    for (long j = 0; j < M; ++j)
    {
        taper[j] = 0.5 * (1 - std::cos(2 * pi * (j + 0.5) / M));
        U += taper[j] * taper[j];
    }
    long const k_lo = 2;
    long const k_hi = M / 2;
    long const nk = k_hi - k_lo + 1;
    long const n_bins = std::min(8L, nk);
    std::vector<long> bin_of(static_cast<std::size_t>(nk));
    for (long i = 0; i < nk; ++i)
        bin_of[i] = i * n_bins / nk;

    std::vector<double> cosv(static_cast<std::size_t>(nk * M));
    std::vector<double> sinv(static_cast<std::size_t>(nk * M));
    for (long i = 0; i < nk; ++i)
        for (long j = 0; j < M; ++j)
        {
            double const a = 2 * pi * (k_lo + i) * j / M;
            cosv[i * M + j] = std::cos(a);
            sinv[i * M + j] = std::sin(a);
        }

    std::vector<double> sum(n_bins, 0.0), sum2(n_bins, 0.0), count(n_bins, 0.0);
    for (long i = 0; i < nk; ++i)
        count[bin_of[i]] += 1;
    std::vector<double> x(static_cast<std::size_t>(M));
    std::vector<double> bin(n_bins);
    for (long r = 0; r < n_samples; ++r)
    {
        NoiseField white = sample_white(g, seed, static_cast<std::uint64_t>(r), lay);
        NoiseField const field = plan ? plan->apply(white) : std::move(white);
        for (long j = 0; j < M; ++j)
            x[j] = taper[j] * field.cell(0, j);
        std::fill(bin.begin(), bin.end(), 0.0);
        for (long i = 0; i < nk; ++i)
        {
            double re = 0, im = 0;
            for (long j = 0; j < M; ++j)
            {
                re += x[j] * cosv[i * M + j];
                im -= x[j] * sinv[i * M + j];
            }
            bin[bin_of[i]] += (re * re + im * im) / (U * unit);
        }
        for (long b = 0; b < n_bins; ++b)
        {
            double const v = bin[b] / count[b];
            sum[b] += v;
            sum2[b] += v * v;
        }
    }

    SpectralReport rep;
    double const n = static_cast<double>(n_samples);
    std::vector<double> lx, ly;
    for (long b = 0; b < n_bins; ++b)
    {
        SpectralBin sb;
        double theta_sum = 0;
        double expect = 0;
        for (long i = 0; i < nk; ++i)
            if (bin_of[i] == b)
            {
                double const th = 2 * pi * (k_lo + i) / M;
                theta_sum += th;
                expect += cell_spectral_density(th, kind);
            }
        sb.theta = theta_sum / count[b];
        sb.expected = expect / count[b];
        sb.periodogram = sum[b] / n;
        double const var = std::max(0.0, sum2[b] / n - sb.periodogram * sb.periodogram);
        sb.stderr_ = std::sqrt(var / (n - 1));
        sb.deviation_sigma = sb.stderr_ > 0
                                 ? (sb.periodogram - sb.expected) / sb.stderr_
                                 : 0;
        rep.max_deviation_sigma = std::max(rep.max_deviation_sigma, std::fabs(sb.deviation_sigma));
        lx.push_back(std::log(sb.theta));
        ly.push_back(std::log(sb.periodogram));
        rep.bins.push_back(sb);
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i)
    {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i)
    {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    rep.loglog_slope = sxx > 0 ? sxy / sxx : 0;
    auto const& first = rep.bins.front();
    auto const& last = rep.bins.back();
    double const spread = 4 * std::hypot(first.stderr_, last.stderr_);
    rep.decreasing_trend = rep.loglog_slope < 0
                           && first.periodogram - last.periodogram > spread;
    return rep;
}

//---------------------------------------------------------------------------//
// Binary dump
//---------------------------------------------------------------------------//

namespace {

char const magic[4] = {'R', 'W', 'N', 'F'};
std::uint32_t const dump_version = 1;

template<class T>
void put(std::ostream& os, T v)
{
    static_assert(std::endian::native == std::endian::little,
                  "binary dump assumes a little-endian host");
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    os.write(buf, sizeof(T));
}

template<class T>
T get(std::istream& is)
{
    char buf[sizeof(T)];
    if (!is.read(buf, sizeof(T)))
        throw Error("truncated noise field dump");
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

}  // namespace

void write_binary(std::ostream& os, NoiseField const& field)
{
    os.write(magic, 4);
    put(os, dump_version);
    put(os, field.grid().h);
    put(os, field.grid().T);
    put(os, field.grid().x_lo);
    put(os, field.grid().x_hi);
    put(os, field.kind().exponent());
    put(os, field.seed());
    put(os, field.replicate_id());
    put(os, static_cast<std::int64_t>(field.n_slabs()));
    put(os, static_cast<std::int64_t>(field.n_cells()));
    for (long n = 0; n < field.n_slabs(); ++n)
        for (long j = 0; j < field.n_cells(); ++j)
            put(os, field.cell(n, j));
}

NoiseField read_binary(std::istream& is)
{
    char m[4];
    if (!is.read(m, 4) || std::memcmp(m, magic, 4) != 0)
        throw Error("not a noise field dump");
    if (get<std::uint32_t>(is) != dump_version)
        throw Error("unsupported noise field dump version");
    GridSpec g;
    g.h = get<double>(is);
    g.T = get<double>(is);
    g.x_lo = get<double>(is);
    g.x_hi = get<double>(is);
    double const ex = get<double>(is);
    auto const seed = get<std::uint64_t>(is);
    auto const rep = get<std::uint64_t>(is);
    NoiseField f(g, ex == 1 ? NoiseKind::white() : NoiseKind::colored(ex), seed, rep);
    auto const ns = get<std::int64_t>(is);
    auto const nc = get<std::int64_t>(is);
    if (ns != f.n_slabs() || nc != f.n_cells())
        throw Error("noise field dump has inconsistent dimensions");
    for (long n = 0; n < f.n_slabs(); ++n)
        for (long j = 0; j < f.n_cells(); ++j)
            f.cell(n, j) = get<double>(is);
    return f;
}

}  // namespace rw
