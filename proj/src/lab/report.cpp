// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "rieszwave/errors.hpp"
#include "rieszwave/format.hpp"
#include "rieszwave/lab.hpp"

namespace rw::lab {

std::string csv_field(std::string const& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s)
    {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + "\"";
}

void write_csv(std::ostream& os, Table const& t, std::string const& hash)
{
    os << "config_hash";
    for (auto const& h : t.header)
        os << ',' << csv_field(h);
    os << "\r\n";
    for (auto const& row : t.rows)
    {
        os << hash;
        for (auto const& f : row)
            os << ',' << csv_field(f);
        os << "\r\n";
    }
}

void write_verdict(std::ostream& os, Report const& r)
{
    for (auto const& c : r.checks)
        os << "CHECK " << c.id << (c.pass ? " PASS" : " FAIL") << " margin=" << format_real(c.margin) << '\n';
}

namespace {

std::string utc_now()
{
    std::time_t const t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_bundle(std::filesystem::path const& dir, Json const& doc, std::string const& hash,
                  std::string const& type, std::string const& what, Json extra)
{
    Json b = {{"error", type}, {"message", what}, {"config_hash", hash}, {"config", doc},
              {"time_utc", utc_now()}};
    b.merge_patch(extra);
    std::ofstream(dir / "error.json") << b.dump(2) << '\n';
}

}  // namespace

int run_to_directory(Json const& raw, std::ostream& log)
{
    auto const diag = validate(raw);
    if (!diag.empty())
    {
        for (auto const& d : diag)
            log << "config error: " << d << '\n';
        return exit_config;
    }
    Json const doc = with_defaults(raw);
    ExperimentConfig const cfg = to_config(doc);
    std::string const hash = config_hash(doc);
    std::filesystem::path const dir(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    {
        std::ofstream probe(dir / "meta.json");
        if (ec || !probe)
        {
            log << "config error: output_dir: cannot write to '" << cfg.output_dir << "'\n";
            return exit_config;
        }
    }

    auto const* info = find_experiment(cfg.experiment);
    auto const start = std::chrono::steady_clock::now();
    Report rep;
    try
    {
        rep = info->run(cfg);
    }
    catch (NumericalError const& e)
    {
        write_bundle(dir, doc, hash, "numerical", e.what(), {{"row", e.row()}, {"col", e.col()}});
        log << "numerical error: " << e.what() << " (details in " << (dir / "error.json").string() << ")\n";
        return exit_numerical;
    }
    catch (ConvergenceError const& e)
    {
        write_bundle(dir, doc, hash, "convergence", e.what(), {{"history", e.history()}});
        log << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    }
    catch (QuadratureError const& e)
    {
        write_bundle(dir, doc, hash, "quadrature", e.what(), {{"achieved_bound", e.achieved_bound()}});
        log << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    }
    catch (TruncationError const& e)
    {
        write_bundle(dir, doc, hash, "truncation", e.what(), {{"achieved_fraction", e.achieved_fraction()}});
        log << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    }
    catch (ConfigError const& e)
    {
        log << "config error: " << e.what() << '\n';
        return exit_config;
    }
    catch (DomainError const& e)
    {
        log << "config error: " << e.what() << '\n';
        return exit_config;
    }
    double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    for (auto const& t : rep.tables)
    {
        std::ofstream os(dir / (t.name + ".csv"), std::ios::binary);
        write_csv(os, t, hash);
    }
    {
        std::ofstream os(dir / "verdict.txt");
        write_verdict(os, rep);
    }
    {
        std::ofstream os(dir / "summary.txt");
        os << "experiment " << cfg.experiment << "\nconfig hash " << hash << "\n\n";
        for (auto const& c : rep.checks)
            os << (c.pass ? "PASS  " : "FAIL  ") << c.id << "  margin " << format_real(c.margin)
               << (c.detail.empty() ? "" : "  (" + c.detail + ")") << '\n';
        if (!rep.summary.empty())
            os << '\n';
        for (auto const& s : rep.summary)
            os << s << '\n';
        os << '\n' << (rep.passed() ? "all checks passed" : "some checks failed") << '\n';
    }
    {
        Json meta = {{"experiment", cfg.experiment},
                     {"config_hash", hash},
                     {"config", doc},
                     {"threads", cfg.threads},
                     {"finished_utc", utc_now()},
                     {"elapsed_seconds", secs},
                     {"tables", Json::array()}};
        for (auto const& t : rep.tables)
            meta["tables"].push_back(t.name + ".csv");
        std::ofstream(dir / "meta.json") << meta.dump(2) << '\n';
    }
    for (auto const& c : rep.checks)
        log << "CHECK " << c.id << (c.pass ? " PASS" : " FAIL") << " margin=" << format_real(c.margin) << '\n';
    return rep.passed() ? exit_ok : exit_failed_checks;
}

}  // namespace rw::lab
