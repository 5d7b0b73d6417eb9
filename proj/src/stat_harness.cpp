// SPDX-License-Identifier: Apache-2.0
#include "rieszwave/stat_harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "rieszwave/errors.hpp"
#include "rieszwave/format.hpp"
#include "rieszwave/rng.hpp"

namespace rw {

std::vector<std::string> ProbeSet::diagnostics(GridSpec const& grid) const
{
    std::vector<std::string> d;
    if (points.empty())
        d.push_back("probes: list must not be empty");
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        auto [t, x] = points[i];
        try
        {
            grid.row_of(t);
            grid.node_of(x);
            if (x < grid.x_lo - 1e-12 || x > grid.x_hi + 1e-12)
                d.push_back("probes[" + std::to_string(i) + "]: x outside the probe window");
        }
        catch (Error const&)
        {
            d.push_back("probes[" + std::to_string(i) + "]: (" + format_real(t) + ", "
                        + format_real(x) + ") is not a lattice node");
        }
    }
    return d;
}

int default_threads()
{
    unsigned const n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

void parallel_for(long n, int threads, std::function<void(long)> const& fn)
{
    if (n <= 0)
        return;
    long const workers = std::clamp<long>(threads, 1, n);
    if (workers == 1)
    {
        for (long i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    for (long w = 0; w < workers; ++w)
    {
        pool.emplace_back([&, w] {
            long const lo = w * n / workers;
            long const hi = (w + 1) * n / workers;
            try
            {
                for (long i = lo; i < hi; ++i)
                    fn(i);
            }
            catch (...)
            {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

namespace {

std::size_t draw_index(KeyedNormal const& rng, std::int64_t i, std::size_t n)
{
    auto const k = static_cast<std::size_t>(rng.uniform(i, 0) * static_cast<double>(n));
    return std::min(k, n - 1);
}

//! type-7 quantile of sorted values
double quantile(std::vector<double> const& s, double q)
{
    double const pos = q * static_cast<double>(s.size() - 1);
    auto const i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= s.size())
        return s.back();
    double const f = pos - static_cast<double>(i);
    return s[i] * (1 - f) + s[i + 1] * f;
}

std::vector<double> abs_pow(std::span<double const> x, int k)
{
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = std::pow(std::fabs(x[i]), k);
    return out;
}

double mean(std::vector<double> const& v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void finish(MCEstimate& e, std::vector<double> boots)
{
    double const m = mean(boots);
    double ss = 0;
    for (double b : boots)
        ss += (b - m) * (b - m);
    e.stderr_ = boots.size() > 1 ? std::sqrt(ss / static_cast<double>(boots.size() - 1)) : 0;
    std::sort(boots.begin(), boots.end());
    e.ci_lo = std::min(e.value, quantile(boots, 0.025));
    e.ci_hi = std::max(e.value, quantile(boots, 0.975));
}

std::vector<double> bootstrap_norms(std::vector<double> const& powered, int k, int n_boot,
                                    std::uint64_t seed)
{
    std::size_t const n = powered.size();
    std::vector<double> out(static_cast<std::size_t>(n_boot));
    for (int b = 0; b < n_boot; ++b)
    {
        KeyedNormal const rng(seed, Stream::bootstrap, static_cast<std::uint64_t>(b));
        double s = 0;
        for (std::size_t i = 0; i < n; ++i)
            s += powered[draw_index(rng, static_cast<std::int64_t>(i), n)];
        out[static_cast<std::size_t>(b)] = std::pow(s / static_cast<double>(n), 1.0 / k);
    }
    return out;
}

void check_k(int k)
{
    if (k < 2)
        throw DomainError("moment order k must be >= 2");
}

}  // namespace

MCEstimate moment_norm(std::span<double const> samples, int k, int n_boot,
                       std::uint64_t seed)
{
    check_k(k);
    if (samples.size() < 100)
        throw DomainError("moment_norm: need at least 100 samples");
    if (n_boot < 2)
        throw DomainError("moment_norm: need at least 2 bootstrap resamples");
    MCEstimate e;
    e.k = k;
    e.n_replicates = static_cast<long>(samples.size());
    auto const p = abs_pow(samples, k);
    e.value = std::pow(mean(p), 1.0 / k);
    bool const all_equal = std::all_of(samples.begin(), samples.end(),
                                       [&](double v) { return v == samples.front(); });
    if (all_equal)
    {
        e.value = std::fabs(samples.front());
        e.ci_lo = e.ci_hi = e.value;
        e.degenerate = true;
        return e;
    }
    finish(e, bootstrap_norms(p, k, n_boot, seed));
    return e;
}

MCEstimate max_moment_norm(std::vector<std::vector<double>> const& samples, int k,
                           int n_boot, std::uint64_t seed)
{
    check_k(k);
    if (samples.empty())
        throw DomainError("max_moment_norm: no columns");
    std::size_t const n = samples.front().size();
    if (n < 100)
        throw DomainError("max_moment_norm: need at least 100 samples");
    std::vector<std::vector<double>> p;
    MCEstimate e;
    e.k = k;
    e.n_replicates = static_cast<long>(n);
    bool all_zero = true;
    for (auto const& col : samples)
    {
        if (col.size() != n)
            throw DomainError("max_moment_norm: columns differ in length");
        p.push_back(abs_pow(col, k));
        e.value = std::max(e.value, std::pow(mean(p.back()), 1.0 / k));
        all_zero = all_zero && std::all_of(col.begin(), col.end(), [](double v) { return v == 0; });
    }
    if (all_zero)
    {
        e.degenerate = true;
        return e;
    }
    std::vector<double> boots(static_cast<std::size_t>(n_boot));
    for (int b = 0; b < n_boot; ++b)
    {
        KeyedNormal const rng(seed, Stream::bootstrap, static_cast<std::uint64_t>(b));
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i)
            idx[i] = draw_index(rng, static_cast<std::int64_t>(i), n);
        double best = 0;
        for (auto const& col : p)
        {
            double s = 0;
            for (std::size_t i : idx)
                s += col[i];
            best = std::max(best, std::pow(s / static_cast<double>(n), 1.0 / k));
        }
        boots[static_cast<std::size_t>(b)] = best;
    }
    finish(e, std::move(boots));
    return e;
}

double fit_loglog_slope(std::vector<double> const& x, std::vector<double> const& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw DomainError("fit_loglog_slope: need two or more matching points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0)
        throw DomainError("fit_loglog_slope: abscissae are all equal");
    return sxy / sxx;
}

std::vector<SweepEntry> sup_distance_sweep(std::vector<double> const& alphas,
                                           ProbeSet const& probes, GridSpec const& grid,
                                           CoefficientSet const& coeffs,
                                           SweepOptions const& opt)
{
    auto diag = probes.diagnostics(grid);
    if (!diag.empty())
        throw DomainError(diag.front());
    if (opt.n_rep < 100)
        throw DomainError("sup_distance_sweep: n_rep must be >= 100");
    CoupledSolver const solver(grid, alphas, opt.coupling);
    std::size_t const na = alphas.size();
    std::size_t const np = probes.points.size();
    auto const nr = static_cast<std::size_t>(opt.n_rep);
    std::vector<std::vector<std::vector<double>>> diff(
        na, std::vector<std::vector<double>>(np, std::vector<double>(nr)));
    std::uint64_t const other_seed = splitmix64(opt.seed ^ 0xC0FFEE1234ULL);

    parallel_for(opt.n_rep, opt.threads, [&](long r) {
        auto const rep = static_cast<std::uint64_t>(r);
        NoiseField const w = solver.white(opt.seed, rep);
        SolutionField const u = solve_leapfrog(w, coeffs);
        NoiseField const w2 = opt.coupled ? NoiseField(w) : solver.white(other_seed, rep);
        for (std::size_t a = 0; a < na; ++a)
        {
            SolutionField const ua = solve_leapfrog(solver.colored(a, w2), coeffs);
            for (std::size_t p = 0; p < np; ++p)
            {
                auto [t, x] = probes.points[p];
                diff[a][p][static_cast<std::size_t>(r)] = ua.value(t, x) - u.value(t, x);
            }
        }
    });

    std::vector<SweepEntry> out;
    for (std::size_t a = 0; a < na; ++a)
    {
        SweepEntry e;
        e.alpha = alphas[a];
        std::uint64_t const s = splitmix64(opt.seed + 0x9E37ULL * (a + 1));
        for (std::size_t p = 0; p < np; ++p)
        {
            e.probes.push_back(moment_norm(diff[a][p], opt.k, opt.n_boot, s + p));
            auto const n2 = std::pow(mean(abs_pow(diff[a][p], 2)), 0.5);
            auto const n4 = std::pow(mean(abs_pow(diff[a][p], 4)), 0.25);
            e.power_mean_ok = e.power_mean_ok && n2 <= n4 * (1 + 1e-12);
        }
        e.sup = max_moment_norm(diff[a], opt.k, opt.n_boot, s);
        out.push_back(std::move(e));
    }
    return out;
}

EnergyTest fdd_energy_distance(std::vector<std::vector<double>> const& X,
                               std::vector<std::vector<double>> const& Y, int n_perm,
                               std::uint64_t seed, int threads)
{
    if (X.size() < 500 || Y.size() < 500)
        throw DomainError("fdd_energy_distance: need at least 500 replicates per sample");
    if (n_perm < 200)
        throw DomainError("fdd_energy_distance: need at least 200 permutations");
    std::size_t const dim = X.front().size();
    for (auto const* S : {&X, &Y})
        for (auto const& v : *S)
            if (v.size() != dim)
                throw DomainError("fdd_energy_distance: dimension mismatch");

    std::size_t const nx = X.size();
    std::size_t const n = nx + Y.size();
    auto point = [&](std::size_t i) -> std::vector<double> const& {
        return i < nx ? X[i] : Y[i - nx];
    };
    std::vector<double> D(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
        {
            double s = 0;
            auto const& a = point(i);
            auto const& b = point(j);
            for (std::size_t d = 0; d < dim; ++d)
                s += (a[d] - b[d]) * (a[d] - b[d]);
            D[i * n + j] = D[j * n + i] = std::sqrt(s);
        }
    double total = 0;
    for (double v : D)
        total += v;

    // labels[i] = true for the first sample
    auto statistic = [&](std::vector<char> const& in_x) {
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < n; ++i)
        {
            if (!in_x[i])
                continue;
            double const* row = D.data() + i * n;
            for (std::size_t j = 0; j < n; ++j)
            {
                if (in_x[j])
                    sxx += row[j];
                else
                    sxy += row[j];
            }
        }
        double const syy = total - 2 * sxy - sxx;
        double const ny = static_cast<double>(n - nx);
        double const mx = static_cast<double>(nx);
        return 2 * sxy / (mx * ny) - sxx / (mx * mx) - syy / (ny * ny);
    };

    std::vector<char> labels(n, 0);
    std::fill(labels.begin(), labels.begin() + static_cast<long>(nx), 1);
    EnergyTest out;
    out.statistic = statistic(labels);

    std::vector<char> exceed(static_cast<std::size_t>(n_perm), 0);
    parallel_for(n_perm, threads, [&](long p) {
        KeyedNormal const rng(seed, Stream::permutation, static_cast<std::uint64_t>(p));
        std::vector<char> lab = labels;
        for (std::size_t i = n - 1; i > 0; --i)
        {
            std::size_t const k = draw_index(rng, static_cast<std::int64_t>(i), i + 1);
            std::swap(lab[i], lab[k]);
        }
        exceed[static_cast<std::size_t>(p)] = statistic(lab) >= out.statistic - 1e-15 ? 1 : 0;
    });
    long const count = std::accumulate(exceed.begin(), exceed.end(), 0L);
    out.p_value = static_cast<double>(1 + count) / static_cast<double>(1 + n_perm);
    return out;
}

EnergyTest ks_two_sample(std::vector<double> x, std::vector<double> y)
{
    if (x.empty() || y.empty())
        throw DomainError("ks_two_sample: empty sample");
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    double const nx = static_cast<double>(x.size());
    double const ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < x.size() && j < y.size())
    {
        double const v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v)
            ++i;
        while (j < y.size() && y[j] == v)
            ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    double const ne = std::sqrt(nx * ny / (nx + ny));
    double const lam = (ne + 0.12 + 0.11 / ne) * d;
    // the alternating series converges slowly near 0, where Q = 1 to double precision
    if (lam < 0.2)
        return {d, 1.0};
    double q = 0;
    for (int k = 1; k <= 100; ++k)
    {
        double const term = 2 * ((k % 2) ? 1 : -1) * std::exp(-2.0 * k * k * lam * lam);
        q += term;
        if (std::fabs(term) < 1e-12)
            break;
    }
    return {d, std::clamp(q, 0.0, 1.0)};
}

HolderFit holder_exponent_fit(std::vector<std::vector<double>> const& increments,
                              std::vector<double> const& lags, int k, double min_lag,
                              int n_boot, std::uint64_t seed)
{
    check_k(k);
    if (lags.size() < 4 || increments.size() != lags.size())
        throw DomainError("holder_exponent_fit: need at least 4 lags with samples");
    auto const [lo, hi] = std::minmax_element(lags.begin(), lags.end());
    if (*hi < 10 * *lo * (1 - 1e-12))
        throw DomainError("holder_exponent_fit: lags must span at least one decade");
    if (*lo < min_lag * (1 - 1e-12))
        throw DomainError("holder_exponent_fit: lags below the minimum of 2h");

    HolderFit fit;
    std::vector<double> lx, ly;
    std::vector<std::vector<double>> boots;
    for (std::size_t i = 0; i < lags.size(); ++i)
    {
        MCEstimate e = moment_norm(increments[i], k, n_boot, seed + i);
        if (!(e.value > 0))
            throw DomainError("holder_exponent_fit: non-positive increment moment (degenerate field)");
        fit.norms.push_back(e);
        lx.push_back(std::log(lags[i]));
        ly.push_back(std::log(e.value));
        boots.push_back(bootstrap_norms(abs_pow(increments[i], k), k, n_boot,
                                        splitmix64(seed + 0x51ULL * (i + 1))));
    }
    fit.slope = fit_loglog_slope(lx, ly);
    std::vector<double> slopes(static_cast<std::size_t>(n_boot));
    for (int b = 0; b < n_boot; ++b)
    {
        std::vector<double> yb;
        for (auto const& bs : boots)
            yb.push_back(std::log(std::max(bs[static_cast<std::size_t>(b)], 1e-300)));
        slopes[static_cast<std::size_t>(b)] = fit_loglog_slope(lx, yb);
    }
    std::sort(slopes.begin(), slopes.end());
    fit.ci_lo = std::min(fit.slope, quantile(slopes, 0.025));
    fit.ci_hi = std::max(fit.slope, quantile(slopes, 0.975));
    return fit;
}

std::vector<double> increments(SolutionField const& u, Direction dir, double t0, double x0,
                               std::vector<long> const& lag_steps)
{
    GridSpec const& g = u.grid();
    long const n0 = g.row_of(t0);
    long const j0 = g.node_of(x0);
    double const base = u.at(n0, j0);
    std::vector<double> out;
    for (long L : lag_steps)
    {
        long const n = dir == Direction::time ? n0 + L : n0;
        long const j = dir == Direction::space ? j0 + L : j0;
        if (n < 0 || n >= u.n_rows() || j < u.valid_lo(n) || j > u.valid_hi(n))
            throw DomainError("increment reaches outside the computed lattice");
        out.push_back(u.at(n, j) - base);
    }
    return out;
}

std::map<double, double> chebyshev_fdd_bound(
    std::map<double, std::vector<MCEstimate>> const& distances, double eps0)
{
    if (!(eps0 > 0))
        throw DomainError("chebyshev_fdd_bound: eps0 must be positive");
    std::map<double, double> out;
    for (auto const& [a, probes] : distances)
    {
        double s = 0;
        for (auto const& e : probes)
        {
            if (e.k != 2)
                throw DomainError("chebyshev_fdd_bound: needs k = 2 estimates");
            s += e.value * e.value;
        }
        out[a] = s / (eps0 * eps0);
    }
    return out;
}

TightnessScan tightness_from_increments(std::vector<std::vector<double>> const& increments,
                                        std::vector<double> const& lags, double alpha,
                                        int p, double margin)
{
    if (increments.size() != lags.size() || lags.size() < 2)
        throw DomainError("tightness scan: need two or more lags with samples");
    TightnessScan s;
    s.lags = lags;
    double const expo = p * (2 - alpha) / 2 - margin;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < lags.size(); ++i)
    {
        double const m = mean(abs_pow(increments[i], p));
        s.moments.push_back(m);
        s.ratios.push_back(m / std::pow(lags[i], expo));
        if (m > 0)
        {
            lx.push_back(std::log(lags[i]));
            ly.push_back(std::log(m));
        }
    }
    auto const [lo, hi] = std::minmax_element(s.ratios.begin(), s.ratios.end());
    s.worst_ratio = *hi;
    s.spread = *lo > 0 ? *hi / *lo : HUGE_VAL;
    s.fitted_exponent = lx.size() >= 2 ? fit_loglog_slope(lx, ly) : 0;
    return s;
}

TightnessScan tightness_moment_scan(double alpha, GridSpec const& grid,
                                    CoefficientSet const& coeffs, int p, long n_rep,
                                    std::vector<long> const& lag_steps, double t,
                                    double margin, std::uint64_t seed, int threads,
                                    CouplingSpec const& coupling)
{
    if (!(p * (2 - alpha) / 2 > 2))
        throw DomainError("tightness_moment_scan: need p (2 - alpha) / 2 > 2");
    CoupledSolver const solver(grid, {alpha}, coupling);
    std::vector<std::vector<double>> inc(lag_steps.size(),
                                         std::vector<double>(static_cast<std::size_t>(n_rep)));
    parallel_for(n_rep, threads, [&](long r) {
        NoiseField const w = solver.white(seed, static_cast<std::uint64_t>(r));
        SolutionField const u = solve_leapfrog(solver.colored(0, w), coeffs);
        auto const d = increments(u, Direction::space, t, grid.x_lo, lag_steps);
        for (std::size_t i = 0; i < d.size(); ++i)
            inc[i][static_cast<std::size_t>(r)] = d[i];
    });
    std::vector<double> lags;
    for (long L : lag_steps)
        lags.push_back(static_cast<double>(L) * grid.h);
    return tightness_from_increments(inc, lags, alpha, p, margin);
}

}  // namespace rw
