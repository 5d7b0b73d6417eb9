// SPDX-License-Identifier: Apache-2.0
#include "rieszwave/spde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "rieszwave/errors.hpp"
#include "rieszwave/format.hpp"

namespace rw {

std::vector<std::string> CoefficientSet::diagnostics(double lo, double hi) const
{
    std::vector<std::string> d;
    auto check = [&](char const* name, Preset const& p) {
        std::string msg = p.check_bounds(lo, hi);
        if (!msg.empty())
            d.push_back(std::string(name) + ": " + msg);
    };
    check("coeffs.b", b);
    check("coeffs.sigma", sigma);
    check("coeffs.u0", data.u0);
    check("coeffs.v0", data.v0);
    return d;
}

SolutionField::SolutionField(GridSpec grid, CoefficientSet coeffs, NoiseKind kind,
                             Scheme scheme)
    : grid_(grid)
    , coeffs_(std::move(coeffs))
    , kind_(kind)
    , scheme_(scheme)
    , n_rows_(grid.n_steps() + 1)
    , n_cols_(grid.n_nodes())
    , v_(static_cast<std::size_t>(n_rows_ * n_cols_),
         std::numeric_limits<double>::quiet_NaN())
{
}

double SolutionField::value(double t, double x) const
{
    long const n = grid_.row_of(t);
    long const j = grid_.node_of(x);
    if (j < valid_lo(n) || j > valid_hi(n))
        throw DomainError("node outside the computed light cone");
    return at(n, j);
}

double SolutionField::sup_distance(SolutionField const& other) const
{
    if (other.n_rows_ != n_rows_ || other.n_cols_ != n_cols_)
        throw DomainError("sup_distance: lattices differ");
    double d = 0;
    for (long n = 0; n < n_rows_; ++n)
        for (long j = valid_lo(n); j <= valid_hi(n); ++j)
            d = std::max(d, std::fabs(at(n, j) - other.at(n, j)));
    return d;
}

namespace {

void check_noise(NoiseField const& noise)
{
    noise.grid().validate();
    if (noise.n_slabs() != noise.grid().n_steps())
        throw DomainError("noise field does not cover the time horizon");
}

void check_row(SolutionField const& u, long n)
{
    for (long j = u.valid_lo(n); j <= u.valid_hi(n); ++j)
        if (!std::isfinite(u.at(n, j)))
            throw NumericalError("non-finite solution value", n, j);
}

//! One application of the discrete mild map with sources taken from `src`.
//! With src == out this is the explicit leapfrog scheme.
void propagate(NoiseField const& noise, CoefficientSet const& c,
               SolutionField const& src, SolutionField& out)
{
    GridSpec const& g = out.grid();
    double const h = g.h;
    long const N = g.n_steps();
    long const J = out.n_cols() - 1;
    bool const has_b = !c.b.is_zero();
    bool const has_s = !c.sigma.is_zero();

    for (long j = 0; j <= J; ++j)
        out.at(0, j) = c.data.u0(g.node_x(j));
    check_row(out, 0);
    if (N == 0)
        return;

    std::vector<double> s_prev(static_cast<std::size_t>(J + 1), 0.0);
    std::vector<double> s_cur(static_cast<std::size_t>(J + 1), 0.0);
    for (long j = 0; j <= J; ++j)
    {
        double const u = src.at(0, j);
        double v = i_zero(h, g.node_x(j), c.data);
        if (has_b)
            v += 0.5 * h * h * c.b(u);
        if (has_s)
        {
            s_prev[j] = c.sigma(u) * noise.cell(0, j);
            v += 0.5 * s_prev[j];
        }
        out.at(1, j) = v;
    }
    check_row(out, 1);

    for (long n = 1; n < N; ++n)
    {
        double const* un = out.row(n);
        double const* um = out.row(n - 1);
        double const* sn = src.row(n);
        double* up = out.row(n + 1);
        for (long j = n; j <= J - n; ++j)
        {
            double v = un[j + 1] + un[j - 1] - um[j];
            if (has_b)
                v += h * h * c.b(sn[j]);
            if (has_s)
            {
                s_cur[j] = c.sigma(sn[j]) * noise.cell(n, j);
                v += 0.5 * (s_prev[j] + s_cur[j]);
            }
            up[j] = v;
        }
        std::swap(s_prev, s_cur);
        check_row(out, n + 1);
    }
}

}  // namespace

SolutionField solve_leapfrog(NoiseField const& noise, CoefficientSet const& c)
{
    check_noise(noise);
    SolutionField u(noise.grid(), c, noise.kind(), Scheme::leapfrog);
    propagate(noise, c, u, u);
    return u;
}

SolutionField solve_picard(NoiseField const& noise, CoefficientSet const& c,
                           int n_iter, double tol)
{
    if (n_iter < 1)
        throw DomainError("solve_picard: n_iter must be >= 1");
    if (!(tol >= 0))
        throw DomainError("solve_picard: tol must be non-negative");
    check_noise(noise);
    GridSpec const& g = noise.grid();
    SolutionField prev(g, c, noise.kind(), Scheme::picard);
    for (long n = 0; n < prev.n_rows(); ++n)
        for (long j = prev.valid_lo(n); j <= prev.valid_hi(n); ++j)
            prev.at(n, j) = i_zero(static_cast<double>(n) * g.h, g.node_x(j), c.data);

    std::vector<double> hist;
    for (int k = 0; k < n_iter; ++k)
    {
        SolutionField next(g, c, noise.kind(), Scheme::picard);
        propagate(noise, c, prev, next);
        double const d = next.sup_distance(prev);
        hist.push_back(d);
        prev = std::move(next);
        if (d <= tol)
            break;
        std::size_t const m = hist.size();
        if (m >= 4 && hist[m - 1] > hist[m - 2] && hist[m - 2] > hist[m - 3]
            && hist[m - 3] > hist[m - 4])
            throw ConvergenceError("Picard iterates stopped contracting", hist);
    }
    prev.set_history(std::move(hist));
    return prev;
}

SolutionField const& CoupledSolution::at(double alpha) const
{
    for (auto const& [a, u] : colored)
        if (std::fabs(a - alpha) < 1e-12)
            return u;
    throw DomainError("no solution for alpha = " + format_real(alpha));
}

CoupledSolver::CoupledSolver(GridSpec grid, std::vector<double> alphas, CouplingSpec spec)
    : grid_(grid), alphas_(std::move(alphas)), spec_(spec)
{
    grid_.validate();
    std::vector<MollifierWeights> weights;
    for (double a : alphas_)
    {
        if (!(a >= 0.05 && a <= 0.99))
            throw DomainError("alpha = " + format_real(a) + " outside [0.05, 0.99]");
        weights.push_back(mollifier_weights(a, grid_, spec_));
    }
    layout_ = layout_for(weights, spec_);
    for (auto& w : weights)
        plans_.push_back(std::make_shared<ColoringPlan const>(std::move(w), grid_, layout_));
}

NoiseField CoupledSolver::white(std::uint64_t seed, std::uint64_t replicate) const
{
    return sample_white(grid_, seed, replicate, layout_);
}

NoiseField CoupledSolver::colored(std::size_t i, NoiseField const& white) const
{
    return plans_.at(i)->apply(white);
}

CoupledSolution CoupledSolver::solve(NoiseField const& white, CoefficientSet const& c) const
{
    CoupledSolution out{solve_leapfrog(white, c), {}};
    for (std::size_t i = 0; i < alphas_.size(); ++i)
        out.colored.emplace_back(alphas_[i], solve_leapfrog(plans_[i]->apply(white), c));
    return out;
}

CoupledSolution CoupledSolver::solve(std::uint64_t seed, std::uint64_t replicate,
                                     CoefficientSet const& c) const
{
    return solve(white(seed, replicate), c);
}

CoupledSolution solve_coupled(NoiseField const& white, std::vector<double> const& alphas,
                              CoefficientSet const& c, CouplingSpec const& spec)
{
    if (!white.kind().is_white())
        throw DomainError("solve_coupled: driving field must be white");
    CoupledSolver solver(white.grid(), alphas, spec);
    WhiteLayout const& need = solver.layout();
    WhiteLayout const& have = white.layout();
    if (!alphas.empty()
        && (have.margin != need.margin || have.n_octaves < need.n_octaves
            || have.blocks_per_octave != need.blocks_per_octave
            || have.subcell_margin < need.subcell_margin))
        throw DomainError("insufficient padding: white field support is smaller than "
                          "the mollifier reach");
    return solver.solve(white, c);
}

double lattice_additive_variance(ColoringPlan const* plan, GridSpec const& grid,
                                 long n, long j, double white_coef)
{
    double var = 0;
    double const h2 = grid.h * grid.h;
    for (long m = 0; m < n; ++m)
    {
        long const k = n - 1 - m;
        if (plan)
            var += plan->band_variance(j - k, j + k, white_coef);
        else
            var += (1 - white_coef) * (1 - white_coef) * h2 * static_cast<double>(2 * k + 1);
    }
    return var / 4;
}

void write_probe_header(std::ostream& os)
{
    os << "replicate_id,alpha_or_white,t,x,value\n";
}

void write_probes(std::ostream& os, std::uint64_t replicate_id, SolutionField const& u,
                  std::vector<std::pair<double, double>> const& probes)
{
    std::string const label = u.noise_kind().label();
    for (auto [t, x] : probes)
        os << replicate_id << ',' << label << ',' << format_real(t) << ','
           << format_real(x) << ',' << format_real(u.value(t, x)) << '\n';
}

}  // namespace rw
