// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rieszwave/spde_solver.hpp"

namespace rw {

struct MCEstimate
{
    double value = 0;
    double stderr_ = 0;
    long n_replicates = 0;
    int k = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    //! all samples equal: the bootstrap carries no information
    bool degenerate = false;
};

struct ProbeSet
{
    std::vector<std::pair<double, double>> points;  // (t, x)

    std::vector<std::string> diagnostics(GridSpec const& grid) const;
};

//! Runs fn(i) for i in [0, n) on up to `threads` workers. Work is split into
//! fixed contiguous chunks, so results indexed by i do not depend on timing.
void parallel_for(long n, int threads, std::function<void(long)> const& fn);
int default_threads();

//! (mean |x|^k)^{1/k} with a percentile bootstrap
MCEstimate moment_norm(std::span<double const> samples, int k, int n_boot = 500,
                       std::uint64_t seed = 0);

//! max over columns of the k-norm; samples[c] is column c over replicates.
//! Rows are resampled jointly in the bootstrap.
MCEstimate max_moment_norm(std::vector<std::vector<double>> const& samples, int k,
                           int n_boot = 500, std::uint64_t seed = 0);

//! Ordinary least squares slope of y on x
double fit_loglog_slope(std::vector<double> const& log_x, std::vector<double> const& log_y);

struct SweepOptions
{
    int k = 2;
    long n_rep = 1000;
    std::uint64_t seed = 1;
    //! false: u and u_alpha are driven by independent white fields
    bool coupled = true;
    int n_boot = 500;
    int threads = 1;
    CouplingSpec coupling;
};

struct SweepEntry
{
    double alpha = 0;
    MCEstimate sup;                   // D(alpha)
    std::vector<MCEstimate> probes;   // per probe
    //! power-mean sanity: the 2-norm never exceeds the 4-norm
    bool power_mean_ok = true;
};

std::vector<SweepEntry> sup_distance_sweep(std::vector<double> const& alphas,
                                           ProbeSet const& probes, GridSpec const& grid,
                                           CoefficientSet const& coeffs,
                                           SweepOptions const& opt);

struct EnergyTest
{
    double statistic = 0;
    double p_value = 1;
};

//! Two-sample energy distance (V-statistic) with a permutation p-value.
//! X and Y hold one vector per replicate.
EnergyTest fdd_energy_distance(std::vector<std::vector<double>> const& X,
                               std::vector<std::vector<double>> const& Y,
                               int n_perm = 200, std::uint64_t seed = 0,
                               int threads = 1);

//! Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
EnergyTest ks_two_sample(std::vector<double> x, std::vector<double> y);

struct HolderFit
{
    double slope = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    std::vector<MCEstimate> norms;  // per lag
};

//! Slope of log ||increment||_k against log lag. increments[i] holds the
//! replicates at lags[i].
HolderFit holder_exponent_fit(std::vector<std::vector<double>> const& increments,
                              std::vector<double> const& lags, int k, double min_lag,
                              int n_boot = 500, std::uint64_t seed = 0);

enum class Direction
{
    space,
    time
};

//! Increments u(t, x0 + lag) - u(t, x0) or u(t0 + lag, x) - u(t0, x) for
//! each lag in lattice steps
std::vector<double> increments(SolutionField const& u, Direction dir, double t0,
                               double x0, std::vector<long> const& lag_steps);

//! sum_i D_i(alpha)^2 / eps0^2 from k = 2 estimates at each probe
std::map<double, double> chebyshev_fdd_bound(
    std::map<double, std::vector<MCEstimate>> const& distances, double eps0);

struct TightnessScan
{
    std::vector<double> lags;
    std::vector<double> moments;  // E |increment|^p
    std::vector<double> ratios;   // moment / lag^{p(2-alpha)/2 - margin}
    double worst_ratio = 0;
    double spread = 0;            // max ratio / min ratio
    double fitted_exponent = 0;
};

//! Moment ratios from increment samples; increments[i] holds lag i
TightnessScan tightness_from_increments(std::vector<std::vector<double>> const& increments,
                                        std::vector<double> const& lags, double alpha,
                                        int p, double margin);

//! Monte Carlo scan of spatial increments of u_alpha at time t
TightnessScan tightness_moment_scan(double alpha, GridSpec const& grid,
                                    CoefficientSet const& coeffs, int p, long n_rep,
                                    std::vector<long> const& lag_steps, double t,
                                    double margin, std::uint64_t seed, int threads = 1,
                                    CouplingSpec const& coupling = {});

}  // namespace rw
