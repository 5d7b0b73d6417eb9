// SPDX-License-Identifier: Apache-2.0
// Acceptance run: one PASS/FAIL line per criterion, each bounded by its runtime budget.
// Usage: acceptance [criterion numbers...]   (no arguments runs all ten)
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "rieszwave/format.hpp"
#include "rieszwave/lab.hpp"

using namespace rw;
using lab::Json;

namespace {

struct Criterion
{
    int id;
    std::string title;
    double budget_seconds;
    std::vector<Json> runs;
};

Json kernel(char const* suite)
{
    return {{"experiment", "kernel-verify"}, {"params", {{"suites", Json::array({suite})}}}};
}

std::vector<Criterion> criteria()
{
    return {
        {1, "weighted energy closed form and A_0 = pi/2", 10, {kernel("weighted_energy")}},
        {2, "script A / script B closed forms and bound conformance", 120, {kernel("appendix")}},
        {3, "coupling identity h * h = f", 30, {kernel("convolution")}},
        {4, "colored noise cell covariance", 120, {{{"experiment", "noise-covariance"}}}},
        {5, "deterministic lattice equals d'Alembert", 5, {{{"experiment", "deterministic-regression"}}}},
        {6, "additive-case variance and continuity at alpha = 1", 300, {{{"experiment", "additive-variance"}}}},
        {7, "Hoelder exponents (2 - alpha)/2", 300, {{{"experiment", "holder-scan"}}}},
        {8, "coupled convergence D(alpha) decreasing, additive and nonlinear", 600,
         {{{"experiment", "convergence-sweep"}},
          {{"experiment", "convergence-sweep"},
           {"coeffs", {{"b", "tanh(1,1,0)"}, {"sigma", "sin(0.5,1,1)"}}}}}},
        {9, "FDD law convergence by energy distance", 600, {{{"experiment", "fdd-test"}}}},
        {10, "Picard iterates decay and match leapfrog", 300, {{{"experiment", "picard-study"}}}},
    };
}

struct Outcome
{
    bool pass = true;
    int n_checks = 0;
    int n_failed = 0;
    std::string worst;
    double worst_margin = 0;
    std::vector<std::string> failures;
};

void run_one(Json const& doc, Outcome& o)
{
    auto const diag = lab::validate(doc);
    if (!diag.empty())
    {
        o.pass = false;
        for (auto const& d : diag)
            o.failures.push_back("config: " + d);
        return;
    }
    lab::ExperimentConfig const cfg = lab::to_config(doc);
    lab::Report const rep = lab::find_experiment(cfg.experiment)->run(cfg);
    for (auto const& c : rep.checks)
    {
        ++o.n_checks;
        if (o.worst.empty() || c.margin < o.worst_margin)
        {
            o.worst = c.id;
            o.worst_margin = c.margin;
        }
        if (!c.pass)
        {
            ++o.n_failed;
            o.pass = false;
            o.failures.push_back(c.id + " margin=" + format_real(c.margin) +
                                 (c.detail.empty() ? "" : " (" + c.detail + ")"));
        }
    }
    for (auto const& s : rep.summary)
        std::cout << "    " << s << '\n';
}

}  // namespace

int main(int argc, char** argv)
{
    std::set<int> only;
    for (int i = 1; i < argc; ++i)
        only.insert(std::atoi(argv[i]));

    int failed = 0;
    for (auto const& c : criteria())
    {
        if (!only.empty() && !only.count(c.id))
            continue;
        Outcome o;
        auto const start = std::chrono::steady_clock::now();
        try
        {
            for (auto const& doc : c.runs)
                run_one(doc, o);
        }
        catch (std::exception const& e)
        {
            o.pass = false;
            o.failures.push_back(std::string("error: ") + e.what());
        }
        double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool const in_time = secs < c.budget_seconds;
        bool const pass = o.pass && in_time;
        if (!pass)
            ++failed;
        char elapsed[32];
        std::snprintf(elapsed, sizeof elapsed, "%.1f", secs);
        std::cout << "criterion " << c.id << (pass ? " PASS" : " FAIL") << "  " << c.title << "  checks "
                  << (o.n_checks - o.n_failed) << "/" << o.n_checks << "  min margin "
                  << (o.worst.empty() ? "n/a" : format_real(o.worst_margin) + " (" + o.worst + ")") << "  runtime "
                  << elapsed << " s (budget " << c.budget_seconds << " s)" << std::endl;
        for (auto const& f : o.failures)
            std::cout << "    failed: " << f << '\n';
        if (!in_time)
            std::cout << "    failed: runtime budget exceeded\n";
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
