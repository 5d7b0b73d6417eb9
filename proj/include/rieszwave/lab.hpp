// SPDX-License-Identifier: Apache-2.0
// Experiment configuration, registry and report emission.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rieszwave/spde_solver.hpp"

namespace rw::lab {

using Json = nlohmann::json;

//! Typed view of a validated configuration document
struct ExperimentConfig
{
    std::string experiment;
    GridSpec grid;
    std::vector<double> alphas;
    CoefficientSet coeffs;
    long n_rep = 1;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string output_dir;
    CouplingSpec coupling;
    std::vector<std::pair<double, double>> probes;
    std::map<std::string, double> tolerances;
    Json params;
    //! the full document after defaults and overrides
    Json doc;

    double tol(std::string const& key) const;
};

struct Check
{
    //! <module>.<invariant>[.<qualifier>]
    std::string id;
    bool pass = false;
    //! slack of the check, negative on failure
    double margin = 0;
    std::string detail;
};

struct Table
{
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Report
{
    std::vector<Table> tables;
    std::vector<Check> checks;
    std::vector<std::string> summary;

    bool passed() const;
};

struct ExperimentInfo
{
    std::string name;
    std::string description;
    //! full default document for this experiment
    std::function<Json()> defaults;
    //! experiment-specific diagnostics on a config that passed the common checks
    std::function<std::vector<std::string>(ExperimentConfig const&)> check;
    std::function<Report(ExperimentConfig const&)> run;
};

std::vector<ExperimentInfo> const& registry();
ExperimentInfo const* find_experiment(std::string const& name);

//! Parses a JSON config file; // and /* */ comments are allowed
Json load_config(std::string const& path);
Json parse_config(std::string const& text);
//! Applies "a.b.c=value"; value is read as JSON, else taken as a string
void apply_override(Json& doc, std::string const& assignment);
//! Experiment defaults merged under the document
Json with_defaults(Json const& doc);
//! Every violated invariant as "<field path>: <message>"; empty iff run would start
std::vector<std::string> validate(Json const& doc);
//! Requires validate(doc) to be empty
ExperimentConfig to_config(Json const& doc);

//! SHA-256 (hex, first 16 characters) of the canonical document without
//! output_dir and threads, which do not affect results
std::string config_hash(Json const& doc);

//! CSV field with RFC-4180 quoting
std::string csv_field(std::string const& s);
void write_csv(std::ostream& os, Table const& t, std::string const& hash);
//! Lines "CHECK <id> PASS|FAIL margin=<float>"
void write_verdict(std::ostream& os, Report const& r);

enum ExitCode : int
{
    exit_ok = 0,
    exit_failed_checks = 1,
    exit_config = 2,
    exit_numerical = 3
};

//! Runs the experiment and writes <out>/<table>.csv, verdict.txt,
//! summary.txt and meta.json. Errors are reported on `log`.
int run_to_directory(Json const& doc, std::ostream& log);

}  // namespace rw::lab
