// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numbers>

#include "rieszwave/errors.hpp"
#include "rieszwave/format.hpp"
#include "rieszwave/kernel_oracles.hpp"
#include "rieszwave/lab.hpp"
#include "rieszwave/rng.hpp"
#include "rieszwave/stat_harness.hpp"

namespace rw::lab {

namespace {

std::string fr(double v)
{
    return format_real(v);
}

Check check(std::string id, double margin, std::string detail = {})
{
    return {std::move(id), margin >= 0, margin, std::move(detail)};
}

//! orderings must hold strictly
Check strict(std::string id, double margin, std::string detail = {})
{
    return {std::move(id), margin > 0, margin, std::move(detail)};
}

std::vector<double> reals(Json const& j)
{
    std::vector<double> v;
    for (auto const& x : j)
        v.push_back(x.get<double>());
    return v;
}

std::vector<long> integers(Json const& j)
{
    std::vector<long> v;
    for (auto const& x : j)
        v.push_back(static_cast<long>(x.get<double>()));
    return v;
}

bool is_additive(CoefficientSet const& c)
{
    return c.b.is_zero() && c.sigma.kind() == PresetKind::constant && c.sigma.params().at(0) == 1
           && c.data.u0.is_zero() && c.data.v0.is_zero();
}

std::string kind_label(double alpha)
{
    return alpha >= 1 ? "white" : fr(alpha);
}

std::string probe_label(std::pair<double, double> p)
{
    return "t=" + fr(p.first) + " x=" + fr(p.second);
}

std::vector<std::string> need_alphas(ExperimentConfig const& c, std::size_t n)
{
    if (c.alphas.size() < n)
        return {"alphas: this experiment needs at least " + std::to_string(n) + " exponents"};
    return {};
}

std::vector<std::string> need_additive(ExperimentConfig const& c)
{
    if (!is_additive(c.coeffs))
        return {"coeffs: this experiment needs the additive case (b = zero(), sigma = constant(1), zero data)"};
    return {};
}

std::vector<std::string> need_probes(ExperimentConfig const& c)
{
    if (c.probes.empty())
        return {"probes: list must not be empty"};
    return {};
}

void append(std::vector<std::string>& a, std::vector<std::string> const& b)
{
    a.insert(a.end(), b.begin(), b.end());
}

std::vector<std::string> alpha_range(double a, std::string const& path)
{
    if (!(a >= 0.05 && a <= 0.99))
        return {path + ": " + fr(a) + " is outside [0.05, 0.99]; the Riesz exponent must lie in the open interval (0, 1)"};
    return {};
}

// ------------------------------------------------------------------ kernel-verify

Json kernel_defaults()
{
    return {
        {"experiment", "kernel-verify"},
        {"params",
         {{"suites", {"weighted_energy", "appendix", "convolution"}},
          {"t_values", {0.5, 1, 2}},
          {"a_values", {-0.9, -0.5, 0, 0.5, 0.9}},
          {"appendix_alphas", {0.3, 0.5, 0.7, 0.9}},
          {"appendix_t", {0.25, 0.5, 1}},
          {"appendix_increments", {0.01, 0.03, 0.1, 0.3, 1}},
          {"conv_alphas", {0.3, 0.5, 0.7, 0.9}},
          {"conv_x", {0.1, 1, 10}},
          {"quad_tol", 1e-10}}},
        {"tolerances",
         {{"weighted_energy_rel", 1e-6},
          {"big_a_zero_abs", 1e-12},
          {"appendix_rel", 1e-4},
          {"appendix_bound_spread", 2},
          {"convolution_rel", 1e-4}}},
    };
}

std::vector<std::string> kernel_check(ExperimentConfig const& c)
{
    std::vector<std::string> d;
    for (auto const& s : c.params["suites"])
    {
        auto const name = s.get<std::string>();
        if (name != "weighted_energy" && name != "appendix" && name != "convolution")
            d.push_back("params.suites: unknown suite '" + name + "'");
    }
    for (double a : reals(c.params["a_values"]))
        if (!(a > -1 && a < 1))
            d.push_back("params.a_values: " + fr(a) + " is outside (-1, 1)");
    for (double t : reals(c.params["t_values"]))
        if (!(t > 0))
            d.push_back("params.t_values: times must be positive");
    for (double a : reals(c.params["appendix_alphas"]))
        append(d, alpha_range(a, "params.appendix_alphas"));
    for (double a : reals(c.params["conv_alphas"]))
        append(d, alpha_range(a, "params.conv_alphas"));
    for (double x : reals(c.params["conv_x"]))
        if (!(x > 0))
            d.push_back("params.conv_x: points must be positive");
    for (double v : reals(c.params["appendix_increments"]))
        if (!(v > 0))
            d.push_back("params.appendix_increments: increments must be positive");
    return d;
}

Report kernel_run(ExperimentConfig const& c)
{
    Report r;
    double const qtol = c.params["quad_tol"].get<double>();
    auto has = [&](char const* s) {
        for (auto const& x : c.params["suites"])
            if (x == s)
                return true;
        return false;
    };

    if (has("weighted_energy"))
    {
        Table t{"weighted_energy", {"t", "a", "closed_form", "quadrature", "rel_error"}, {}};
        double worst = 0;
        for (double tv : reals(c.params["t_values"]))
            for (double a : reals(c.params["a_values"]))
            {
                double const cf = weighted_energy(tv, a);
                double const q = weighted_energy_quadrature(tv, a, qtol).value;
                double const e = std::fabs(cf - q) / std::fabs(q);
                worst = std::max(worst, e);
                t.rows.push_back({fr(tv), fr(a), fr(cf), fr(q), fr(e)});
            }
        r.checks.push_back(check("wave_kernel.weighted_energy_closed_form",
                                 c.tol("weighted_energy_rel") - worst,
                                 "max rel error " + fr(worst)));
        double const a0 = std::fabs(big_a_alpha(0) - std::numbers::pi / 2);
        r.checks.push_back(check("riesz_core.big_a_alpha_at_zero", c.tol("big_a_zero_abs") - a0,
                                 "|A_0 - pi/2| = " + fr(a0)));
        r.tables.push_back(std::move(t));
    }

    if (has("appendix"))
    {
        Table t{"appendix",
                {"alpha", "t", "increment", "integral", "closed_form", "oracle", "rel_error", "bound_ratio"},
                {}};
        double worst_a = 0, worst_b = 0, spread_a = 0, spread_b = 0;
        for (double a : reals(c.params["appendix_alphas"]))
        {
            AlphaParams const p(a);
            std::vector<double> ca, cb;
            for (double d : reals(c.params["appendix_increments"]))
            {
                double fa = 0, fb = 0;
                double const scale = std::pow(std::min(d, 1.0), 2 - a);
                for (double tv : reals(c.params["appendix_t"]))
                {
                    double const A = script_A(tv, 0, d, p);
                    double const B = script_B(tv, d, p);
                    double const oa = oracle::script_A(tv, d, a);
                    double const ob = oracle::script_B(tv, d, a);
                    double const ea = std::fabs(A - oa) / std::fabs(oa);
                    double const eb = std::fabs(B - ob) / std::fabs(ob);
                    worst_a = std::max(worst_a, ea);
                    worst_b = std::max(worst_b, eb);
                    fa = std::max(fa, A / scale);
                    fb = std::max(fb, B / scale);
                    t.rows.push_back({fr(a), fr(tv), fr(d), "A", fr(A), fr(oa), fr(ea), fr(A / scale)});
                    t.rows.push_back({fr(a), fr(tv), fr(d), "B", fr(B), fr(ob), fr(eb), fr(B / scale)});
                }
                ca.push_back(fa);
                cb.push_back(fb);
            }
            auto spread = [](std::vector<double> const& v) {
                auto [lo, hi] = std::minmax_element(v.begin(), v.end());
                return *hi / *lo;
            };
            spread_a = std::max(spread_a, spread(ca));
            spread_b = std::max(spread_b, spread(cb));
        }
        double const rel = c.tol("appendix_rel");
        double const sp = c.tol("appendix_bound_spread");
        r.checks.push_back(check("wave_kernel.script_A_oracle", rel - worst_a, "max rel error " + fr(worst_a)));
        r.checks.push_back(check("wave_kernel.script_B_oracle", rel - worst_b, "max rel error " + fr(worst_b)));
        r.checks.push_back(check("wave_kernel.script_A_bound_conformance", sp - spread_a,
                                 "fitted C spread " + fr(spread_a)));
        r.checks.push_back(check("wave_kernel.script_B_bound_conformance", sp - spread_b,
                                 "fitted C spread " + fr(spread_b)));
        r.summary.push_back("appendix lattice: " + std::to_string(t.rows.size() / 2) + " points per integral");
        r.tables.push_back(std::move(t));
    }

    if (has("convolution"))
    {
        Table t{"convolution", {"alpha", "x", "rel_deviation", "error_bound"}, {}};
        double worst = 0;
        for (double a : reals(c.params["conv_alphas"]))
            for (double x : reals(c.params["conv_x"]))
            {
                KernelEval const e = verify_convolution_identity(AlphaParams(a), x, qtol);
                worst = std::max(worst, std::fabs(e.value));
                t.rows.push_back({fr(a), fr(x), fr(e.value), fr(e.abs_error_bound)});
            }
        r.checks.push_back(check("riesz_core.convolution_identity", c.tol("convolution_rel") - worst,
                                 "max rel deviation " + fr(worst)));
        r.tables.push_back(std::move(t));
    }
    return r;
}

// ------------------------------------------------------------------ noise-covariance

Json cov_defaults()
{
    return {
        {"experiment", "noise-covariance"},
        {"grid", {{"h", 0.05}, {"T", 0.05}, {"x_lo", 0.0}, {"x_hi", 3.05}}},
        {"alphas", {0.3, 0.5, 0.7, 0.9}},
        {"n_rep", 20000},
        {"params", {{"max_lag", 20}, {"base_cell", 21}, {"include_white", true}}},
        {"tolerances", {{"cov_sigmas", 4}}},
    };
}

std::vector<std::string> cov_check(ExperimentConfig const& c)
{
    std::vector<std::string> d;
    long const lag = c.params["max_lag"].get<long>();
    long const j0 = c.params["base_cell"].get<long>();
    if (lag < 0)
        d.push_back("params.max_lag: must be >= 0");
    if (j0 < 0 || j0 + lag >= c.grid.n_nodes())
        d.push_back("params.base_cell: cells base_cell..base_cell+max_lag must lie in the slab of "
                    + std::to_string(c.grid.n_nodes()) + " cells");
    if (c.grid.n_steps() < 1)
        d.push_back("grid.T: need at least one time slab");
    if (c.n_rep < 2)
        d.push_back("n_rep: need at least 2 replicates");
    return d;
}

Report cov_run(ExperimentConfig const& c)
{
    Report r;
    long const max_lag = c.params["max_lag"].get<long>();
    long const j0 = c.params["base_cell"].get<long>();
    bool const white = c.params["include_white"].get<bool>();
    CoupledSolver const solver(c.grid, c.alphas, c.coupling);
    std::size_t const nk = c.alphas.size() + (white ? 1 : 0);
    auto const L = static_cast<std::size_t>(max_lag + 1);
    // products[kind][lag][rep]
    std::vector<std::vector<std::vector<double>>> prod(
        nk, std::vector<std::vector<double>>(L, std::vector<double>(static_cast<std::size_t>(c.n_rep))));
    parallel_for(c.n_rep, c.threads, [&](long rep) {
        NoiseField const w = solver.white(c.seed, static_cast<std::uint64_t>(rep));
        auto record = [&](std::size_t k, NoiseField const& f) {
            for (long l = 0; l <= max_lag; ++l)
                prod[k][static_cast<std::size_t>(l)][static_cast<std::size_t>(rep)] =
                    f.cell(0, j0) * f.cell(0, j0 + l);
        };
        for (std::size_t i = 0; i < c.alphas.size(); ++i)
            record(i, solver.colored(i, w));
        if (white)
            record(nk - 1, w);
    });

    Table t{"covariance", {"alpha", "lag", "empirical", "stderr", "target", "tolerance", "deviation"}, {}};
    double const R = static_cast<double>(c.n_rep);
    for (std::size_t k = 0; k < nk; ++k)
    {
        bool const is_white = white && k == nk - 1;
        NoiseKind const kind = is_white ? NoiseKind::white() : NoiseKind::colored(c.alphas[k]);
        double worst = HUGE_VAL;
        for (std::size_t l = 0; l < L; ++l)
        {
            auto const& v = prod[k][l];
            double s = 0, s2 = 0;
            for (double x : v)
            {
                s += x;
                s2 += x * x;
            }
            double const m = s / R;
            double const se = std::sqrt(std::max(0.0, s2 / R - m * m) / (R - 1));
            double const target = cell_cov_target(static_cast<long>(l), kind, c.grid);
            double const tol = c.tol("cov_sigmas") * se + (is_white ? 0 : c.coupling.eps_tail * std::fabs(target));
            double const dev = std::fabs(m - target);
            worst = std::min(worst, tol - dev);
            t.rows.push_back({is_white ? "white" : fr(c.alphas[k]), std::to_string(l), fr(m), fr(se),
                              fr(target), fr(tol), fr(dev)});
        }
        r.checks.push_back(check("noise_field.cell_covariance.alpha=" + (is_white ? std::string("white") : fr(c.alphas[k])),
                                 worst, "lags 0.." + std::to_string(max_lag)));
    }
    r.tables.push_back(std::move(t));
    return r;
}

// ------------------------------------------------------------------ deterministic-regression

Json det_defaults()
{
    return {
        {"experiment", "deterministic-regression"},
        {"grid", {{"h", 0.01}, {"T", 1.0}, {"x_lo", -1.0}, {"x_hi", 1.0}}},
        {"coeffs", {{"b", "zero()"}, {"sigma", "zero()"}, {"u0", "sin(1,1,0)"}, {"v0", "zero()"}}},
        {"n_rep", 1},
        {"params",
         {{"extra_data", Json::array({Json::array({"bump(1,0.7)", "sin(0.5,3,0.2)"}),
                                     Json::array({"tanh(2,4,0)", "constant(1)"})})}}},
        {"tolerances", {{"regression_abs", 1e-12}}},
    };
}

std::vector<std::string> det_check(ExperimentConfig const& c)
{
    std::vector<std::string> d;
    if (!c.coeffs.sigma.is_zero())
        d.push_back("coeffs.sigma: deterministic-regression needs sigma = zero()");
    if (!c.coeffs.b.is_zero())
        d.push_back("coeffs.b: deterministic-regression needs b = zero()");
    auto const& extra = c.params["extra_data"];
    for (std::size_t i = 0; i < extra.size(); ++i)
    {
        std::string const path = "params.extra_data[" + std::to_string(i) + "]";
        if (!extra[i].is_array() || extra[i].size() != 2 || !extra[i][0].is_string() || !extra[i][1].is_string())
        {
            d.push_back(path + ": expected [u0, v0] preset strings");
            continue;
        }
        for (int k = 0; k < 2; ++k)
        {
            try
            {
                Preset::parse(extra[i][static_cast<std::size_t>(k)].get<std::string>());
            }
            catch (Error const& e)
            {
                d.push_back(path + "[" + std::to_string(k) + "]: " + e.what());
            }
        }
    }
    return d;
}

Report det_run(ExperimentConfig const& c)
{
    Report r;
    std::vector<InitialData> sets = {c.coeffs.data};
    for (auto const& e : c.params["extra_data"])
        sets.push_back({Preset::parse(e[0].get<std::string>()), Preset::parse(e[1].get<std::string>())});
    NoiseField const w = sample_white(c.grid, c.seed, 0);
    Table t{"regression", {"data_index", "u0", "v0", "max_abs_error", "n_rows", "n_cols"}, {}};
    for (std::size_t i = 0; i < sets.size(); ++i)
    {
        CoefficientSet cs{c.coeffs.b, c.coeffs.sigma, sets[i]};
        SolutionField const u = solve_leapfrog(w, cs);
        double err = 0;
        for (long n = 0; n < u.n_rows(); ++n)
            for (long j = u.valid_lo(n); j <= u.valid_hi(n); ++j)
                err = std::max(err, std::fabs(u.at(n, j) - i_zero(static_cast<double>(n) * c.grid.h,
                                                                 c.grid.node_x(j), sets[i])));
        t.rows.push_back({std::to_string(i), sets[i].u0.to_string(), sets[i].v0.to_string(), fr(err),
                          std::to_string(u.n_rows()), std::to_string(u.n_cols())});
        r.checks.push_back(check("spde_solver.exact_dalembert.data=" + std::to_string(i),
                                 c.tol("regression_abs") - err, "sup error " + fr(err)));
    }
    r.tables.push_back(std::move(t));
    return r;
}

// ------------------------------------------------------------------ additive-variance

Json var_defaults()
{
    return {
        {"experiment", "additive-variance"},
        {"grid", {{"h", 0.02}, {"T", 1.0}, {"x_lo", 0.0}, {"x_hi", 0.0}}},
        {"alphas", {0.5, 0.99}},
        {"probes", Json::array({Json::array({1.0, 0.0})})},
        {"n_rep", 10000},
        {"params", {{"include_white", true}, {"continuity_alpha", 0.99}}},
        {"tolerances", {{"variance_sigmas", 3}, {"continuity_rel", 0.05}}},
    };
}

//! the same grid at step 2h, if it exists
std::vector<std::string> coarse_check(ExperimentConfig const& c)
{
    GridSpec g2 = c.grid;
    g2.h *= 2;
    std::vector<std::string> d;
    if (!g2.diagnostics().empty())
        d.push_back("grid.h: the grid must also be valid at step 2h for the refinement bias");
    else
    {
        ProbeSet ps{c.probes};
        if (!ps.diagnostics(g2).empty())
            d.push_back("probes: every probe must also be a node of the 2h grid");
    }
    return d;
}

std::vector<std::string> var_check(ExperimentConfig const& c)
{
    auto d = need_additive(c);
    append(d, need_probes(c));
    if (c.n_rep < 100)
        d.push_back("n_rep: need at least 100 replicates");
    if (d.empty())
        append(d, coarse_check(c));
    for (auto p : c.probes)
        if (p.first <= 0)
            d.push_back("probes: the variance check needs t > 0");
    return d;
}

//! exact lattice variance of u(t, x) or u_alpha(t, x) - white_coef u(t, x)
double lattice_variance(GridSpec const& g, double alpha, std::pair<double, double> probe,
                        CouplingSpec const& spec, double white_coef = 0)
{
    long const n = g.row_of(probe.first);
    long const j = g.node_of(probe.second);
    if (alpha >= 1)
        return lattice_additive_variance(nullptr, g, n, j, white_coef);
    CoupledSolver const s(g, {alpha}, spec);
    return lattice_additive_variance(&s.plan(0), g, n, j, white_coef);
}

Report var_run(ExperimentConfig const& c)
{
    Report r;
    bool const white = c.params["include_white"].get<bool>();
    double const cont = c.params["continuity_alpha"].get<double>();
    std::vector<double> kinds = c.alphas;
    if (white)
        kinds.push_back(1.0);
    CoupledSolver const solver(c.grid, c.alphas, c.coupling);
    std::size_t const np = c.probes.size();
    auto const nr = static_cast<std::size_t>(c.n_rep);
    std::vector<std::vector<std::vector<double>>> sq(
        kinds.size(), std::vector<std::vector<double>>(np, std::vector<double>(nr)));
    parallel_for(c.n_rep, c.threads, [&](long rep) {
        auto const sol = solver.solve(c.seed, static_cast<std::uint64_t>(rep), c.coeffs);
        for (std::size_t k = 0; k < kinds.size(); ++k)
        {
            SolutionField const& u = kinds[k] >= 1 ? sol.white : sol.colored[k].second;
            for (std::size_t p = 0; p < np; ++p)
            {
                double const v = u.value(c.probes[p].first, c.probes[p].second);
                sq[k][p][static_cast<std::size_t>(rep)] = v * v;
            }
        }
    });

    GridSpec g2 = c.grid;
    g2.h *= 2;
    Table t{"variance",
            {"alpha", "t", "x", "mc_variance", "stderr", "target", "lattice_h", "lattice_2h", "bias",
             "n_rep", "seed"},
            {}};
    double const R = static_cast<double>(c.n_rep);
    for (std::size_t k = 0; k < kinds.size(); ++k)
    {
        NoiseKind const kind = kinds[k] >= 1 ? NoiseKind::white() : NoiseKind::colored(kinds[k]);
        for (std::size_t p = 0; p < np; ++p)
        {
            double s = 0, s2 = 0;
            for (double v : sq[k][p])
            {
                s += v;
                s2 += v * v;
            }
            double const m = s / R;
            double const se = std::sqrt(std::max(0.0, s2 / R - m * m) / (R - 1));
            double const target = additive_variance(c.probes[p].first, kind);
            double const lh = lattice_variance(c.grid, kinds[k], c.probes[p], c.coupling);
            double const l2 = lattice_variance(g2, kinds[k], c.probes[p], c.coupling);
            double const bias = std::fabs(lh - l2);
            double const dev = std::fabs(m - target);
            t.rows.push_back({kind_label(kinds[k]), fr(c.probes[p].first), fr(c.probes[p].second), fr(m), fr(se),
                              fr(target), fr(lh), fr(l2), fr(bias), std::to_string(c.n_rep),
                              std::to_string(c.seed)});
            r.checks.push_back(check("spde_solver.additive_variance.alpha=" + kind_label(kinds[k]) + "." +
                                         probe_label(c.probes[p]),
                                     c.tol("variance_sigmas") * se + bias - dev,
                                     "mc " + fr(m) + " target " + fr(target)));
            if (kinds[k] == cont)
            {
                double const w = additive_variance(c.probes[p].first, NoiseKind::white());
                double const rel = std::fabs(m / w - 1);
                r.checks.push_back(check("riesz_core.continuity_at_one.alpha=" + fr(cont) + "." +
                                             probe_label(c.probes[p]),
                                         c.tol("continuity_rel") - rel,
                                         "mc " + fr(m) + " vs white " + fr(w)));
            }
        }
    }
    r.tables.push_back(std::move(t));
    return r;
}

// ------------------------------------------------------------------ holder-scan

Json holder_defaults()
{
    return {
        {"experiment", "holder-scan"},
        {"grid", {{"h", 0.01}, {"T", 1.64}, {"x_lo", 0.0}, {"x_hi", 0.64}}},
        {"alphas", {0.5, 0.9}},
        {"n_rep", 1000},
        {"params",
         {{"t0", 1.0},
          {"x0", 0.0},
          {"lag_steps", {4, 8, 16, 32, 64}},
          {"k", 2},
          {"n_boot", 500},
          {"directions", {"space", "time"}}}},
        {"tolerances", {{"slope_band", 0.1}}},
    };
}

std::vector<std::string> holder_check(ExperimentConfig const& c)
{
    auto d = need_alphas(c, 1);
    double const t0 = c.params["t0"].get<double>();
    double const x0 = c.params["x0"].get<double>();
    auto lags = integers(c.params["lag_steps"]);
    if (lags.size() < 4)
        d.push_back("params.lag_steps: need at least 4 lags");
    else
    {
        auto [lo, hi] = std::minmax_element(lags.begin(), lags.end());
        if (*lo < 2)
            d.push_back("params.lag_steps: lags below 2h are biased by the lattice");
        if (*hi < 10 * *lo)
            d.push_back("params.lag_steps: lags must span at least one decade");
        long const maxlag = *hi;
        try
        {
            long const n0 = c.grid.row_of(t0);
            long const j0 = c.grid.node_of(x0);
            if (n0 < 1)
                d.push_back("params.t0: must be positive");
            for (auto const& dir : c.params["directions"])
            {
                if (dir == "space")
                {
                    if (x0 + static_cast<double>(maxlag) * c.grid.h > c.grid.x_hi + 1e-9 || x0 < c.grid.x_lo - 1e-9)
                        d.push_back("params.lag_steps: spatial lags leave the probe window [x_lo, x_hi]");
                }
                else if (dir == "time")
                {
                    if (n0 + maxlag > c.grid.n_steps())
                        d.push_back("params.lag_steps: temporal lags pass the horizon T");
                }
                else
                    d.push_back("params.directions: unknown direction " + dir.dump());
            }
            (void)j0;
        }
        catch (Error const&)
        {
            d.push_back("params.t0: (t0, x0) must be a lattice node");
        }
    }
    int const k = c.params["k"].get<int>();
    if (k < 2)
        d.push_back("params.k: moment order must be >= 2");
    if (c.n_rep < 100)
        d.push_back("n_rep: need at least 100 replicates");
    return d;
}

Report holder_run(ExperimentConfig const& c)
{
    Report r;
    double const t0 = c.params["t0"].get<double>();
    double const x0 = c.params["x0"].get<double>();
    auto const lag_steps = integers(c.params["lag_steps"]);
    int const k = c.params["k"].get<int>();
    int const n_boot = c.params["n_boot"].get<int>();
    std::vector<Direction> dirs;
    for (auto const& d : c.params["directions"])
        dirs.push_back(d == "space" ? Direction::space : Direction::time);
    bool const additive = is_additive(c.coeffs);

    CoupledSolver const solver(c.grid, c.alphas, c.coupling);
    std::size_t const na = c.alphas.size(), nd = dirs.size(), nl = lag_steps.size();
    auto const nr = static_cast<std::size_t>(c.n_rep);
    // inc[a][d][lag][rep]
    std::vector<std::vector<std::vector<std::vector<double>>>> inc(
        na, std::vector<std::vector<std::vector<double>>>(
                nd, std::vector<std::vector<double>>(nl, std::vector<double>(nr))));
    parallel_for(c.n_rep, c.threads, [&](long rep) {
        NoiseField const w = solver.white(c.seed, static_cast<std::uint64_t>(rep));
        for (std::size_t a = 0; a < na; ++a)
        {
            SolutionField const u = solve_leapfrog(solver.colored(a, w), c.coeffs);
            for (std::size_t d = 0; d < nd; ++d)
            {
                auto const v = increments(u, dirs[d], t0, x0, lag_steps);
                for (std::size_t l = 0; l < nl; ++l)
                    inc[a][d][l][static_cast<std::size_t>(rep)] = v[l];
            }
        }
    });

    std::vector<double> lags, loglags;
    for (long L : lag_steps)
    {
        lags.push_back(static_cast<double>(L) * c.grid.h);
        loglags.push_back(std::log(lags.back()));
    }
    Table tn{"holder_norms", {"alpha", "direction", "lag", "norm", "stderr", "ci_lo", "ci_hi", "oracle_norm"}, {}};
    Table ts{"holder_slopes", {"alpha", "direction", "slope", "ci_lo", "ci_hi", "oracle_slope", "expected"}, {}};
    double const band = c.tol("slope_band");
    for (std::size_t d = 0; d < nd; ++d)
    {
        std::string const dname = dirs[d] == Direction::space ? "space" : "time";
        std::vector<HolderFit> fits;
        for (std::size_t a = 0; a < na; ++a)
        {
            double const alpha = c.alphas[a];
            NoiseKind const kind = NoiseKind::colored(alpha);
            HolderFit fit = holder_exponent_fit(inc[a][d], lags, k, 2 * c.grid.h, n_boot,
                                                splitmix64(c.seed + 31 * a + d));
            std::vector<double> oracle_log;
            for (std::size_t l = 0; l < nl; ++l)
            {
                double on = 0;
                if (additive)
                {
                    double const v = dirs[d] == Direction::space
                                         ? gaussian_increment_variance(t0, lags[l], kind, 1e-10).value
                                         : gaussian_time_increment_variance(t0, lags[l], kind, 1e-10).value;
                    on = std::sqrt(v);
                    oracle_log.push_back(std::log(on));
                }
                auto const& e = fit.norms[l];
                tn.rows.push_back({fr(alpha), dname, fr(lags[l]), fr(e.value), fr(e.stderr_), fr(e.ci_lo),
                                   fr(e.ci_hi), additive ? fr(on) : ""});
            }
            double const expected = (2 - alpha) / 2;
            double oracle_slope = 0;
            if (additive && k == 2)
            {
                oracle_slope = fit_loglog_slope(loglags, oracle_log);
                r.checks.push_back(check("stat_harness.holder_oracle_pin." + dname + ".alpha=" + fr(alpha),
                                         band - std::fabs(oracle_slope - expected),
                                         "oracle slope " + fr(oracle_slope)));
            }
            r.checks.push_back(check("stat_harness.holder_slope." + dname + ".alpha=" + fr(alpha),
                                     band - std::fabs(fit.slope - expected),
                                     "slope " + fr(fit.slope) + " expected " + fr(expected)));
            ts.rows.push_back({fr(alpha), dname, fr(fit.slope), fr(fit.ci_lo), fr(fit.ci_hi),
                               additive && k == 2 ? fr(oracle_slope) : "", fr(expected)});
            fits.push_back(std::move(fit));
        }
        if (na >= 2)
        {
            // exponents sorted ascending in alpha should give descending slopes
            std::vector<std::size_t> idx(na);
            for (std::size_t i = 0; i < na; ++i)
                idx[i] = i;
            std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return c.alphas[x] < c.alphas[y]; });
            double m = HUGE_VAL;
            for (std::size_t i = 0; i + 1 < na; ++i)
                m = std::min(m, fits[idx[i]].ci_lo - fits[idx[i + 1]].ci_hi);
            r.checks.push_back(check("stat_harness.holder_ordering." + dname, m,
                                     "slopes decrease in alpha with disjoint 95% intervals"));
        }
    }
    r.tables.push_back(std::move(tn));
    r.tables.push_back(std::move(ts));
    return r;
}

// ------------------------------------------------------------------ convergence-sweep

Json sweep_defaults()
{
    return {
        {"experiment", "convergence-sweep"},
        {"grid", {{"h", 0.02}, {"T", 1.0}, {"x_lo", 0.0}, {"x_hi", 0.2}}},
        {"alphas", {0.5, 0.7, 0.9, 0.95}},
        {"probes", Json::array({Json::array({1.0, 0.0}), Json::array({1.0, 0.2}), Json::array({0.6, 0.0})})},
        {"n_rep", 4000},
        {"coupling", {{"eps_tail", 1e-5}}},
        {"params", {{"k", 2}, {"n_boot", 500}, {"compare_uncoupled", false}, {"eps0", 0.1}}},
        {"tolerances", {{"oracle_sigmas", 3}}},
    };
}

std::vector<std::string> sweep_check(ExperimentConfig const& c)
{
    auto d = need_alphas(c, 1);
    append(d, need_probes(c));
    if (c.n_rep < 100)
        d.push_back("n_rep: need at least 100 replicates");
    if (c.params["k"].get<int>() < 2)
        d.push_back("params.k: moment order must be >= 2");
    if (!(c.params["eps0"].get<double>() > 0))
        d.push_back("params.eps0: must be positive");
    if (is_additive(c.coeffs) && d.empty())
        append(d, coarse_check(c));
    return d;
}

Report sweep_run(ExperimentConfig const& c)
{
    Report r;
    SweepOptions opt;
    opt.k = c.params["k"].get<int>();
    opt.n_rep = c.n_rep;
    opt.seed = c.seed;
    opt.n_boot = c.params["n_boot"].get<int>();
    opt.threads = c.threads;
    opt.coupling = c.coupling;
    ProbeSet const probes{c.probes};
    auto const sweep = sup_distance_sweep(c.alphas, probes, c.grid, c.coeffs, opt);

    Table t{"sweep", {"alpha", "probe", "k", "estimate", "stderr", "ci_lo", "ci_hi", "n_rep", "seed"}, {}};
    auto row = [&](double a, std::string const& p, MCEstimate const& e) {
        t.rows.push_back({fr(a), p, std::to_string(e.k), fr(e.value), fr(e.stderr_), fr(e.ci_lo), fr(e.ci_hi),
                          std::to_string(e.n_replicates), std::to_string(c.seed)});
    };
    bool power_ok = true;
    for (auto const& e : sweep)
    {
        row(e.alpha, "sup", e.sup);
        for (std::size_t p = 0; p < probes.points.size(); ++p)
            row(e.alpha, probe_label(probes.points[p]), e.probes[p]);
        power_ok = power_ok && e.power_mean_ok;
    }
    r.checks.push_back(check("stat_harness.power_mean_inequality", power_ok ? 0 : -1));

    std::vector<std::size_t> idx(sweep.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return sweep[x].alpha < sweep[y].alpha; });

    if (c.coeffs.sigma.is_zero())
    {
        double worst = 0;
        for (auto const& e : sweep)
            worst = std::max(worst, e.sup.value);
        r.checks.push_back(check("stat_harness.sup_distance_zero_without_noise", -worst,
                                 "max D " + fr(worst)));
    }
    else if (sweep.size() >= 2)
    {
        double m = HUGE_VAL;
        for (std::size_t i = 0; i + 1 < idx.size(); ++i)
            m = std::min(m, sweep[idx[i]].sup.value - sweep[idx[i + 1]].sup.value);
        r.checks.push_back(strict("stat_harness.sup_distance_monotone", m,
                                 "D strictly decreasing in alpha"));
        auto const& lo = sweep[idx.front()].sup;
        auto const& hi = sweep[idx.back()].sup;
        double const gap = lo.ci_lo - hi.ci_hi;
        r.checks.push_back(strict("stat_harness.sup_distance_endpoint_ci", gap,
                                 "95% intervals at alpha=" + fr(sweep[idx.front()].alpha) + " and " +
                                     fr(sweep[idx.back()].alpha)));
    }

    if (opt.k == 2)
    {
        std::map<double, std::vector<MCEstimate>> dist;
        for (auto const& e : sweep)
            dist[e.alpha] = e.probes;
        double const eps0 = c.params["eps0"].get<double>();
        auto const bound = chebyshev_fdd_bound(dist, eps0);
        Table tb{"chebyshev", {"alpha", "eps0", "bound"}, {}};
        for (auto const& [a, b] : bound)
            tb.rows.push_back({fr(a), fr(eps0), fr(b)});
        if (!c.coeffs.sigma.is_zero() && bound.size() >= 2)
        {
            double m = HUGE_VAL;
            for (auto it = bound.begin(); std::next(it) != bound.end(); ++it)
                m = std::min(m, it->second - std::next(it)->second);
            r.checks.push_back(strict("stat_harness.chebyshev_bound_monotone", m));
        }
        r.tables.push_back(std::move(tb));
    }

    if (is_additive(c.coeffs) && opt.k == 2)
    {
        GridSpec g2 = c.grid;
        g2.h *= 2;
        Table to{"oracle", {"alpha", "probe", "d_squared", "stderr", "oracle", "lattice_h", "lattice_2h", "bias"}, {}};
        for (auto const& e : sweep)
        {
            double worst = HUGE_VAL;
            for (std::size_t p = 0; p < probes.points.size(); ++p)
            {
                auto const pt = probes.points[p];
                if (pt.first <= 0)
                    continue;
                double const d2 = e.probes[p].value * e.probes[p].value;
                double const se = 2 * e.probes[p].value * e.probes[p].stderr_;
                double const oracle = coupled_difference_variance(pt.first, AlphaParams(e.alpha), 1e-9).value;
                double const lh = lattice_variance(c.grid, e.alpha, pt, c.coupling, 1);
                double const l2 = lattice_variance(g2, e.alpha, pt, c.coupling, 1);
                double const bias = std::fabs(lh - l2);
                worst = std::min(worst, c.tol("oracle_sigmas") * se + bias - std::fabs(d2 - oracle));
                to.rows.push_back({fr(e.alpha), probe_label(pt), fr(d2), fr(se), fr(oracle), fr(lh), fr(l2), fr(bias)});
            }
            r.checks.push_back(check("spde_solver.coupled_difference_oracle.alpha=" + fr(e.alpha), worst));
        }
        r.tables.push_back(std::move(to));
    }

    if (c.params["compare_uncoupled"].get<bool>())
    {
        SweepOptions o2 = opt;
        o2.coupled = false;
        auto const indep = sup_distance_sweep(c.alphas, probes, c.grid, c.coeffs, o2);
        double m = HUGE_VAL;
        for (std::size_t i = 0; i < sweep.size(); ++i)
        {
            m = std::min(m, indep[i].sup.value - sweep[i].sup.value);
            row(indep[i].alpha, "sup_uncoupled", indep[i].sup);
        }
        r.checks.push_back(strict("stat_harness.coupling_reduces_distance", m));
    }
    r.tables.insert(r.tables.begin(), std::move(t));
    for (std::size_t i : idx)
        r.summary.push_back("D(" + fr(sweep[i].alpha) + ") = " + fr(sweep[i].sup.value) + " [" +
                            fr(sweep[i].sup.ci_lo) + ", " + fr(sweep[i].sup.ci_hi) + "]");
    return r;
}

// ------------------------------------------------------------------ fdd-test

Json fdd_defaults()
{
    return {
        {"experiment", "fdd-test"},
        {"grid", {{"h", 0.05}, {"T", 1.0}, {"x_lo", 0.0}, {"x_hi", 0.2}}},
        {"probes", Json::array({Json::array({1.0, 0.0}), Json::array({1.0, 0.2}), Json::array({0.5, 0.0})})},
        {"n_rep", 1000},
        {"params",
         {{"alpha_near", 0.95},
          {"alpha_far", 0.5},
          {"alpha_star", 0.5},
          {"alpha_n", {0.45, 0.48, 0.49}},
          {"repetitions", 10},
          {"n_rep_star", 2500},
          {"n_perm", 200},
          {"min_wins", 8}}},
    };
}

std::vector<std::string> fdd_check(ExperimentConfig const& c)
{
    auto d = need_probes(c);
    append(d, alpha_range(c.params["alpha_near"].get<double>(), "params.alpha_near"));
    append(d, alpha_range(c.params["alpha_far"].get<double>(), "params.alpha_far"));
    append(d, alpha_range(c.params["alpha_star"].get<double>(), "params.alpha_star"));
    auto const an = reals(c.params["alpha_n"]);
    for (std::size_t i = 0; i < an.size(); ++i)
        append(d, alpha_range(an[i], "params.alpha_n[" + std::to_string(i) + "]"));
    if (an.size() == 1)
        d.push_back("params.alpha_n: need zero or at least two exponents");
    if (c.n_rep < 500)
        d.push_back("n_rep: the energy test needs at least 500 replicates per sample");
    if (c.params["n_rep_star"].get<int>() < 500)
        d.push_back("params.n_rep_star: the energy test needs at least 500 replicates per sample");
    if (c.params["n_perm"].get<int>() < 200)
        d.push_back("params.n_perm: need at least 200 permutations");
    int const reps = c.params["repetitions"].get<int>();
    if (reps < 1)
        d.push_back("params.repetitions: must be >= 1");
    if (c.params["min_wins"].get<int>() > reps)
        d.push_back("params.min_wins: cannot exceed repetitions");
    return d;
}

Report fdd_run(ExperimentConfig const& c)
{
    Report r;
    double const near = c.params["alpha_near"].get<double>();
    double const far = c.params["alpha_far"].get<double>();
    double const star = c.params["alpha_star"].get<double>();
    auto const an = reals(c.params["alpha_n"]);
    int const reps = c.params["repetitions"].get<int>();
    int const n_perm = c.params["n_perm"].get<int>();
    int const min_wins = c.params["min_wins"].get<int>();
    int const n_star = c.params["n_rep_star"].get<int>();

    // kind 0 is white; the rest index the solver's exponents
    std::vector<double> alphas = {near, far, star};
    alphas.insert(alphas.end(), an.begin(), an.end());
    CoupledSolver const solver(c.grid, alphas, c.coupling);
    ProbeSet const probes{c.probes};

    auto sample = [&](int kind, int rep, int n) {
        std::uint64_t const s = splitmix64(c.seed ^ splitmix64(static_cast<std::uint64_t>(rep) * 64 + kind));
        std::vector<std::vector<double>> out(static_cast<std::size_t>(n));
        parallel_for(n, c.threads, [&](long i) {
            NoiseField const w = solver.white(s, static_cast<std::uint64_t>(i));
            SolutionField const u = kind == 0 ? solve_leapfrog(w, c.coeffs)
                                              : solve_leapfrog(solver.colored(static_cast<std::size_t>(kind - 1), w), c.coeffs);
            auto& v = out[static_cast<std::size_t>(i)];
            for (auto [t, x] : probes.points)
                v.push_back(u.value(t, x));
        });
        return out;
    };
    auto first = [](std::vector<std::vector<double>> const& s) {
        std::vector<double> v;
        for (auto const& x : s)
            v.push_back(x[0]);
        return v;
    };

    Table t{"fdd", {"repetition", "sample", "reference", "statistic", "p_value", "ks_statistic", "ks_p_value"}, {}};
    int wins = 0, wins_star = 0;
    for (int rep = 0; rep < reps; ++rep)
    {
        auto test = [&](std::vector<std::vector<double>> const& X, std::vector<std::vector<double>> const& Y,
                        std::string const& xl, std::string const& yl, int id) {
            EnergyTest const e = fdd_energy_distance(X, Y, n_perm, splitmix64(c.seed + 1000003ULL * rep + id), c.threads);
            EnergyTest const k = ks_two_sample(first(X), first(Y));
            t.rows.push_back({std::to_string(rep), xl, yl, fr(e.statistic), fr(e.p_value), fr(k.statistic), fr(k.p_value)});
            return e.p_value;
        };
        auto const u = sample(0, rep, c.n_rep);
        double const p_near = test(sample(1, rep, c.n_rep), u, fr(near), "white", 0);
        double const p_far = test(sample(2, rep, c.n_rep), u, fr(far), "white", 1);
        if (p_near > p_far)
            ++wins;
        if (an.size() >= 2)
        {
            auto const ref = sample(3, rep, n_star);
            std::vector<double> ps;
            for (std::size_t i = 0; i < an.size(); ++i)
                ps.push_back(test(sample(4 + static_cast<int>(i), rep, n_star), ref, fr(an[i]), fr(star), 2 + static_cast<int>(i)));
            // the exponent closest to alpha_star against the farthest one
            std::size_t inear = 0, ifar = 0;
            for (std::size_t i = 0; i < an.size(); ++i)
            {
                if (std::fabs(an[i] - star) < std::fabs(an[inear] - star))
                    inear = i;
                if (std::fabs(an[i] - star) > std::fabs(an[ifar] - star))
                    ifar = i;
            }
            if (ps[inear] > ps[ifar])
                ++wins_star;
        }
    }
    r.checks.push_back(check("stat_harness.fdd_trend", wins - min_wins,
                             std::to_string(wins) + " of " + std::to_string(reps) + " repetitions with p(" + fr(near) +
                                 ") > p(" + fr(far) + ")"));
    r.summary.push_back("p(u_" + fr(near) + " vs u) > p(u_" + fr(far) + " vs u) in " + std::to_string(wins) + " of " +
                        std::to_string(reps) + " repetitions");
    if (an.size() >= 2)
    {
        r.checks.push_back(check("stat_harness.fdd_trend_alpha_star", wins_star - min_wins,
                                 std::to_string(wins_star) + " of " + std::to_string(reps) + " repetitions"));
        r.summary.push_back("alpha_n -> " + fr(star) + ": closest exponent has the larger p-value in " +
                            std::to_string(wins_star) + " of " + std::to_string(reps) + " repetitions");
    }
    r.tables.push_back(std::move(t));
    return r;
}

// ------------------------------------------------------------------ picard-study

Json picard_defaults()
{
    return {
        {"experiment", "picard-study"},
        {"alphas", {0.5}},
        {"grid", {{"h", 0.05}, {"T", 1.0}, {"x_lo", -0.5}, {"x_hi", 0.5}}},
        {"coeffs", {{"b", "tanh(1,2,0)"}, {"sigma", "sin(1,1,0.3)"}, {"u0", "sin(0.5,1,0)"}, {"v0", "zero()"}}},
        {"n_rep", 1},
        {"params", {{"h_levels", {0.05, 0.025, 0.0125}}, {"n_iter", 500}, {"tol", 0.0}}},
        {"tolerances", {{"max_ratio", 1}, {"agreement_h_factor", 1}}},
    };
}

std::vector<std::string> picard_check(ExperimentConfig const& c)
{
    std::vector<std::string> d;
    auto const hs = reals(c.params["h_levels"]);
    if (hs.empty())
        d.push_back("params.h_levels: must not be empty");
    for (std::size_t i = 0; i < hs.size(); ++i)
    {
        GridSpec g = c.grid;
        g.h = hs[i];
        for (auto const& s : g.diagnostics())
            d.push_back("params.h_levels[" + std::to_string(i) + "]: " + s);
    }
    if (c.params["n_iter"].get<int>() < 1)
        d.push_back("params.n_iter: must be >= 1");
    if (c.grid.T > 1)
        d.push_back("grid.T: the Picard study is defined for T <= 1");
    return d;
}

Report picard_run(ExperimentConfig const& c)
{
    Report r;
    auto const hs = reals(c.params["h_levels"]);
    int const n_iter = c.params["n_iter"].get<int>();
    double const tol = c.params["tol"].get<double>();
    std::vector<double> kinds = c.alphas;
    kinds.push_back(1.0);
    Table th{"picard_history", {"h", "alpha", "iteration", "sup_increment"}, {}};
    Table ts{"picard_summary", {"h", "alpha", "iterations", "max_ratio", "sup_distance_to_leapfrog"}, {}};
    for (double h : hs)
    {
        GridSpec g = c.grid;
        g.h = h;
        std::vector<double> colored;
        for (double a : kinds)
            if (a < 1)
                colored.push_back(a);
        CoupledSolver const solver(g, colored, c.coupling);
        NoiseField const w = solver.white(c.seed, 0);
        std::size_t ci = 0;
        for (double a : kinds)
        {
            NoiseField const f = a >= 1 ? w : solver.colored(ci++, w);
            SolutionField const p = solve_picard(f, c.coeffs, n_iter, tol);
            SolutionField const lf = solve_leapfrog(f, c.coeffs);
            auto const& hist = p.history();
            double q = 0;
            for (std::size_t k = 0; k < hist.size(); ++k)
            {
                th.rows.push_back({fr(h), kind_label(a), std::to_string(k + 1), fr(hist[k])});
                // ratios below the rounding floor carry no information
                if (k > 0 && hist[k - 1] > 1e-12)
                    q = std::max(q, hist[k] / hist[k - 1]);
            }
            double const dist = p.sup_distance(lf);
            ts.rows.push_back({fr(h), kind_label(a), std::to_string(p.iterations()), fr(q), fr(dist)});
            std::string const tag = ".h=" + fr(h) + ".alpha=" + kind_label(a);
            double const qm = c.tol("max_ratio") - q;
            r.checks.push_back(strict("spde_solver.picard_geometric_decay" + tag, std::min(qm, 1 - q),
                                     "largest successive ratio " + fr(q)));
            r.checks.push_back(check("spde_solver.picard_matches_leapfrog" + tag,
                                     c.tol("agreement_h_factor") * h - dist, "sup distance " + fr(dist)));
        }
    }
    r.tables.push_back(std::move(th));
    r.tables.push_back(std::move(ts));
    return r;
}

}  // namespace

std::vector<ExperimentInfo> const& registry()
{
    static std::vector<ExperimentInfo> const r = {
        {"kernel-verify", "closed-form kernel identities against quadrature oracles", kernel_defaults, kernel_check,
         kernel_run},
        {"noise-covariance", "empirical cell covariance of white and colored noise against the exact target",
         cov_defaults, cov_check, cov_run},
        {"deterministic-regression", "noise-free lattice solution against the d'Alembert formula", det_defaults,
         det_check, det_run},
        {"additive-variance", "Monte Carlo variance of the additive solution against the closed form", var_defaults,
         var_check, var_run},
        {"holder-scan", "Holder exponents of additive-case increments in space and time", holder_defaults,
         holder_check, holder_run},
        {"convergence-sweep", "coupled sup distance D(alpha) between u_alpha and u", sweep_defaults, sweep_check,
         sweep_run},
        {"fdd-test", "energy-distance tests of finite-dimensional laws", fdd_defaults, fdd_check, fdd_run},
        {"picard-study", "Picard iteration on fixed noise against the leapfrog solution", picard_defaults,
         picard_check, picard_run},
    };
    return r;
}

}  // namespace rw::lab
