// SPDX-License-Identifier: Apache-2.0
// rwlab: command-line front end of the experiment runner.
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rieszwave/errors.hpp"
#include "rieszwave/lab.hpp"

using namespace rw;

namespace {

lab::Json load(std::string const& path, std::vector<std::string> const& sets)
{
    lab::Json doc = lab::load_config(path);
    for (auto const& s : sets)
        lab::apply_override(doc, s);
    return doc;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"rwlab: Monte Carlo laboratory for wave equations driven by Riesz-colored noise"};
    app.require_subcommand(1);

    std::string path;
    std::vector<std::string> sets;
    std::string out;
    std::uint64_t seed = 0;
    int threads = -1;

    auto* run = app.add_subcommand("run", "run the experiment named in a config file");
    run->add_option("config", path, "config file (JSON)")->required();
    run->add_option("--set", sets, "override a config value, key.path=value")->take_all();
    auto* out_opt = run->add_option("--out", out, "output directory");
    auto* seed_opt = run->add_option("--seed", seed, "master seed");
    run->add_option("--threads", threads, "worker threads, 0 for all cores");

    auto* val = app.add_subcommand("validate", "check a config file and print every problem");
    val->add_option("config", path, "config file (JSON)")->required();
    val->add_option("--set", sets, "override a config value, key.path=value")->take_all();

    auto* list = app.add_subcommand("list-experiments", "print the experiment registry");

    std::string name;
    auto* defs = app.add_subcommand("defaults", "print the full default config of an experiment");
    defs->add_option("experiment", name, "experiment name")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        return app.exit(e) == 0 ? 0 : lab::exit_config;
    }

    try
    {
        if (list->parsed())
        {
            for (auto const& e : lab::registry())
                std::cout << e.name << "\t" << e.description << '\n';
            return 0;
        }
        if (defs->parsed())
        {
            if (!lab::find_experiment(name))
            {
                std::cerr << "unknown experiment '" << name << "'\n";
                return lab::exit_config;
            }
            std::cout << lab::with_defaults({{"experiment", name}}).dump(2) << '\n';
            return 0;
        }
        lab::Json doc = load(path, sets);
        if (val->parsed())
        {
            auto const d = lab::validate(doc);
            for (auto const& s : d)
                std::cout << s << '\n';
            if (d.empty())
                std::cout << "ok (config hash " << lab::config_hash(doc) << ")\n";
            return d.empty() ? 0 : lab::exit_config;
        }
        if (*out_opt)
            doc["output_dir"] = out;
        if (*seed_opt)
            doc["seed"] = seed;
        if (threads >= 0)
            doc["threads"] = threads;
        return lab::run_to_directory(doc, std::cout);
    }
    catch (ConfigError const& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return lab::exit_config;
    }
}
