// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "rieszwave/errors.hpp"
#include "rieszwave/lab.hpp"

using namespace rw;
using namespace rw::lab;

namespace fs = std::filesystem;

namespace {

bool any_contains(std::vector<std::string> const& d, std::string const& a, std::string const& b = "")
{
    for (auto const& s : d)
        if (s.find(a) != std::string::npos && s.find(b) != std::string::npos)
            return true;
    return false;
}

std::string slurp(fs::path const& p)
{
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path scratch(std::string const& name)
{
    fs::path const p = fs::temp_directory_path() / ("rwlab_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("every registered experiment validates with its defaults")
{
    REQUIRE(registry().size() == 8);
    for (auto const& e : registry())
    {
        Json const doc = {{"experiment", e.name}};
        auto const d = validate(doc);
        INFO(e.name);
        CHECK(d.empty());
        CHECK(find_experiment(e.name) == &e);
    }
    CHECK(find_experiment("nope") == nullptr);
}

TEST_CASE("shipped config files validate")
{
    int n = 0;
    for (auto const& f : fs::directory_iterator(RW_CONFIG_DIR))
    {
        if (f.path().extension() != ".json")
            continue;
        ++n;
        INFO(f.path().string());
        CHECK(validate(load_config(f.path().string())).empty());
    }
    CHECK(n == 8);
}

TEST_CASE("validation reports every problem with a field path")
{
    Json doc = {{"experiment", "additive-variance"}, {"alphas", {1.0, 0.5, 0.0}}};
    auto d = validate(doc);
    CHECK(any_contains(d, "alphas[0]", "open interval (0, 1)"));
    CHECK(any_contains(d, "alphas[2]", "open interval (0, 1)"));
    CHECK_FALSE(any_contains(d, "alphas[1]"));

    d = validate({{"experiment", "holder-scan"}, {"grid", {{"h", 0.03}}}});
    CHECK(any_contains(d, "grid."));

    d = validate({{"experiment", "holder-scan"}, {"grdi", {{"h", 0.03}}}});
    CHECK(any_contains(d, "grdi", "unknown key"));

    d = validate({{"experiment", "holder-scan"}, {"n_rep", "many"}});
    CHECK(any_contains(d, "n_rep", "expected"));

    d = validate({{"experiment", "holder-scan"}, {"n_rep", 2.5}});
    CHECK(any_contains(d, "n_rep", "integer"));

    d = validate({{"experiment", "convergence-sweep"}, {"coeffs", {{"sigma", "cosh(1)"}}}});
    CHECK(any_contains(d, "coeffs.sigma"));

    d = validate({{"experiment", "convergence-sweep"}, {"probes", Json::array({Json::array({1.0, 0.013})})}});
    CHECK(any_contains(d, "probes[0]"));

    d = validate({{"experiment", "holder-scan"}, {"threads", -1}, {"seed", -3}});
    CHECK(any_contains(d, "threads"));
    CHECK(any_contains(d, "seed"));

    CHECK(any_contains(validate({{"experiment", "bogus"}}), "experiment", "unknown"));
    CHECK(any_contains(validate(Json::array()), "JSON object"));
}

TEST_CASE("config text accepts comments and overrides")
{
    Json doc = parse_config(R"({
        // line comment
        "experiment": "picard-study", /* block */
        "seed": 7
    })");
    CHECK(doc["seed"] == 7);
    CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/file.json"), ConfigError);

    apply_override(doc, "grid.h=0.025");
    apply_override(doc, "coeffs.b=tanh(1,1,0)");
    apply_override(doc, "alphas=[0.5,0.7]");
    apply_override(doc, "params.include_white=false");
    CHECK(doc["grid"]["h"].get<double>() == doctest::Approx(0.025));
    CHECK(doc["coeffs"]["b"] == "tanh(1,1,0)");
    CHECK(doc["alphas"].size() == 2);
    CHECK(doc["params"]["include_white"] == false);
    CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "a..b=1"), ConfigError);
}

TEST_CASE("config hash ignores output location and thread count")
{
    Json a = {{"experiment", "picard-study"}};
    Json b = a;
    b["output_dir"] = "/tmp/else";
    b["threads"] = 3;
    std::string const h = config_hash(a);
    CHECK(h.size() == 16);
    CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);
    CHECK(config_hash(b) == h);
    b["seed"] = 99;
    CHECK(config_hash(b) != h);
    // defaults spelled out give the same hash
    CHECK(config_hash(with_defaults(a)) == h);
}

TEST_CASE("csv quoting and verdict lines")
{
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"x\"") == "\"say \"\"x\"\"\"");
    CHECK(csv_field("two\nlines") == "\"two\nlines\"");

    Table t{"t", {"k", "v"}, {{"1", "x,y"}}};
    std::ostringstream os;
    write_csv(os, t, "abc");
    CHECK(os.str() == "config_hash,k,v\r\nabc,1,\"x,y\"\r\n");

    Report r;
    r.checks.push_back({"mod.inv.q", true, 0.5, ""});
    r.checks.push_back({"mod.other", false, -0.25, ""});
    CHECK_FALSE(r.passed());
    std::ostringstream v;
    write_verdict(v, r);
    CHECK(v.str() == "CHECK mod.inv.q PASS margin=0.5\nCHECK mod.other FAIL margin=-0.25\n");
}

TEST_CASE("runs are reproducible byte for byte")
{
    auto run = [](std::string const& name, int threads) {
        fs::path const dir = scratch(name);
        Json doc = {{"experiment", "noise-covariance"}, {"n_rep", 2000}, {"alphas", {0.5}},
                    {"threads", threads}, {"output_dir", dir.string()}};
        std::ostringstream log;
        int const rc = run_to_directory(doc, log);
        CHECK(rc == exit_ok);
        CHECK(log.str().find("CHECK ") != std::string::npos);
        return dir;
    };
    fs::path const a = run("repro_a", 1);
    fs::path const b = run("repro_b", 2);
    for (auto const* f : {"verdict.txt", "summary.txt"})
        CHECK(slurp(a / f) == slurp(b / f));
    int n_csv = 0;
    for (auto const& f : fs::directory_iterator(a))
        if (f.path().extension() == ".csv")
        {
            ++n_csv;
            CHECK(slurp(f.path()) == slurp(b / f.path().filename()));
        }
    CHECK(n_csv >= 1);
    Json const meta = Json::parse(slurp(a / "meta.json"));
    CHECK(meta["experiment"] == "noise-covariance");
    CHECK(meta["config_hash"].get<std::string>().size() == 16);
    CHECK(meta.contains("elapsed_seconds"));
}

TEST_CASE("exit codes distinguish config and numerical failures")
{
    std::ostringstream log;
    CHECK(run_to_directory({{"experiment", "picard-study"}, {"alphas", {1.5}}}, log) == exit_config);
    CHECK(log.str().find("alphas[0]") != std::string::npos);

    CHECK(run_to_directory({{"experiment", "deterministic-regression"}, {"output_dir", "/dev/null/sub"}}, log) ==
          exit_config);

    fs::path const dir = scratch("numerical");
    Json doc = {{"experiment", "convergence-sweep"},
                {"coeffs", {{"b", "affine(0,1e308)"}, {"u0", "constant(1)"}}},
                {"n_rep", 200},
                {"alphas", {0.5, 0.9}},
                {"output_dir", dir.string()}};
    CHECK(run_to_directory(doc, log) == exit_numerical);
    Json const err = Json::parse(slurp(dir / "error.json"));
    CHECK(err["error"] == "numerical");
    CHECK(err.contains("row"));
    CHECK(err["config_hash"] == config_hash(doc));
}

TEST_CASE("deterministic regression end to end")
{
    fs::path const dir = scratch("regression");
    std::ostringstream log;
    CHECK(run_to_directory({{"experiment", "deterministic-regression"}, {"output_dir", dir.string()}}, log) == exit_ok);
    std::string const v = slurp(dir / "verdict.txt");
    CHECK(v.rfind("CHECK spde_solver.exact_dalembert", 0) == 0);
    CHECK(v.find("FAIL") == std::string::npos);
}
