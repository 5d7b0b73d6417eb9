// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "rieszwave/errors.hpp"
#include "rieszwave/format.hpp"
#include "rieszwave/lab.hpp"
#include "rieszwave/stat_harness.hpp"

namespace rw::lab {

double ExperimentConfig::tol(std::string const& key) const
{
    auto it = tolerances.find(key);
    if (it == tolerances.end())
        throw ConfigError("tolerances." + key + ": not defined");
    return it->second;
}

bool Report::passed() const
{
    for (auto const& c : checks)
        if (!c.pass)
            return false;
    return true;
}

ExperimentInfo const* find_experiment(std::string const& name)
{
    for (auto const& e : registry())
        if (e.name == name)
            return &e;
    return nullptr;
}

Json parse_config(std::string const& text)
{
    try
    {
        return Json::parse(text, nullptr, true, true);
    }
    catch (Json::parse_error const& e)
    {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
}

Json load_config(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_override(Json& doc, std::string const& assignment)
{
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override '" + assignment + "' is not of the form key=value");
    std::string const key = assignment.substr(0, eq);
    std::string const text = assignment.substr(eq + 1);
    Json value;
    try
    {
        value = Json::parse(text);
    }
    catch (Json::parse_error const&)
    {
        value = text;
    }
    Json* node = &doc;
    std::size_t start = 0;
    while (true)
    {
        auto dot = key.find('.', start);
        std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty())
            throw ConfigError("override '" + assignment + "' has an empty key segment");
        if (!node->is_object())
            *node = Json::object();
        node = &(*node)[part];
        if (dot == std::string::npos)
            break;
        start = dot + 1;
    }
    *node = value;
}

namespace {

Json base_defaults()
{
    CouplingSpec const c;
    return {
        {"experiment", ""},
        {"grid", {{"h", 0.02}, {"T", 1.0}, {"x_lo", 0.0}, {"x_hi", 0.0}}},
        {"alphas", Json::array()},
        {"coeffs", {{"b", "zero()"}, {"sigma", "constant(1)"}, {"u0", "zero()"}, {"v0", "zero()"}}},
        {"n_rep", 1000},
        {"seed", 1},
        {"threads", 0},
        {"output_dir", "out"},
        {"coupling",
         {{"eps_tail", c.eps_tail},
          {"near_cells", c.near_cells},
          {"blocks_per_octave", c.blocks_per_octave},
          {"subcell_taps", c.subcell_taps},
          {"max_radius_cells", c.max_radius_cells}}},
        {"probes", Json::array()},
        {"tolerances", Json::object()},
        {"params", Json::object()},
    };
}

char const* type_name(Json const& v)
{
    if (v.is_number())
        return "number";
    return v.type_name();
}

bool same_kind(Json const& def, Json const& v)
{
    if (def.is_number())
        return v.is_number();
    return def.type() == v.type();
}

bool integral(Json const& v)
{
    if (v.is_number_integer())
        return true;
    if (!v.is_number_float())
        return false;
    double const d = v.get<double>();
    return std::isfinite(d) && std::floor(d) == d && std::fabs(d) < 9e15;
}

//! unknown keys and type mismatches against the default document
void check_shape(Json const& def, Json const& v, std::string const& path,
                 std::vector<std::string>& out)
{
    if (!same_kind(def, v))
    {
        out.push_back(path + ": expected " + type_name(def) + ", got " + type_name(v));
        return;
    }
    if (def.is_number_integer() && !integral(v))
    {
        out.push_back(path + ": expected an integer");
        return;
    }
    if (def.is_object())
    {
        for (auto const& [k, sub] : v.items())
        {
            std::string const p = path.empty() ? k : path + "." + k;
            if (!def.contains(k))
                out.push_back(p + ": unknown key");
            else
                check_shape(def[k], sub, p, out);
        }
    }
    else if (def.is_array() && !def.empty())
    {
        for (std::size_t i = 0; i < v.size(); ++i)
            check_shape(def[0], v[i], path + "[" + std::to_string(i) + "]", out);
    }
}

std::vector<std::string> prefixed(std::vector<std::string> d, std::string const& pre)
{
    for (auto& s : d)
        s = pre + s;
    return d;
}

//! document with the canonical experiment defaults applied, or the
//! document itself when the experiment is unknown
Json merged(Json const& doc)
{
    if (!doc.is_object() || !doc.contains("experiment") || !doc["experiment"].is_string())
        return doc;
    auto const* info = find_experiment(doc["experiment"].get<std::string>());
    if (!info)
        return doc;
    Json out = base_defaults();
    out.merge_patch(info->defaults());
    out.merge_patch(doc);
    return out;
}

}  // namespace

Json with_defaults(Json const& doc)
{
    return merged(doc);
}

std::vector<std::string> validate(Json const& raw)
{
    std::vector<std::string> d;
    if (!raw.is_object())
        return {"(root): config must be a JSON object"};
    if (!raw.contains("experiment") || !raw["experiment"].is_string())
        return {"experiment: missing or not a string"};
    std::string const name = raw["experiment"].get<std::string>();
    auto const* info = find_experiment(name);
    if (!info)
        return {"experiment: unknown experiment '" + name + "' (see list-experiments)"};

    Json const doc = merged(raw);
    Json def = base_defaults();
    def.merge_patch(info->defaults());
    check_shape(def, doc, "", d);
    if (!d.empty())
        return d;

    GridSpec g;
    g.h = doc["grid"]["h"].get<double>();
    g.T = doc["grid"]["T"].get<double>();
    g.x_lo = doc["grid"]["x_lo"].get<double>();
    g.x_hi = doc["grid"]["x_hi"].get<double>();
    auto gd = prefixed(g.diagnostics(), "grid.");
    d.insert(d.end(), gd.begin(), gd.end());

    auto const& al = doc["alphas"];
    for (std::size_t i = 0; i < al.size(); ++i)
    {
        double const a = al[i].get<double>();
        if (!(a >= 0.05 && a <= 0.99))
            d.push_back("alphas[" + std::to_string(i) + "]: " + format_real(a)
                        + " is outside [0.05, 0.99]; the Riesz exponent must lie in the open interval (0, 1)");
    }

    CoefficientSet c;
    bool presets_ok = true;
    for (auto [key, target] : {std::pair{"b", &c.b}, std::pair{"sigma", &c.sigma},
                               std::pair{"u0", &c.data.u0}, std::pair{"v0", &c.data.v0}})
    {
        try
        {
            *target = Preset::parse(doc["coeffs"][key].get<std::string>());
        }
        catch (Error const& e)
        {
            presets_ok = false;
            d.push_back(std::string("coeffs.") + key + ": " + e.what());
        }
    }
    if (presets_ok && gd.empty())
    {
        auto cd = c.diagnostics(g.x_lo - g.T, g.x_hi + g.T);
        d.insert(d.end(), cd.begin(), cd.end());
    }

    if (doc["n_rep"].get<double>() < 1)
        d.push_back("n_rep: must be >= 1");
    if (!doc["seed"].is_number_unsigned() && !(integral(doc["seed"]) && doc["seed"].get<double>() >= 0))
        d.push_back("seed: must be a non-negative 64-bit integer");
    if (doc["threads"].get<double>() < 0)
        d.push_back("threads: must be >= 0 (0 selects all cores)");
    if (doc["output_dir"].get<std::string>().empty())
        d.push_back("output_dir: must not be empty");

    CouplingSpec cs;
    cs.eps_tail = doc["coupling"]["eps_tail"].get<double>();
    cs.near_cells = doc["coupling"]["near_cells"].get<long>();
    cs.blocks_per_octave = doc["coupling"]["blocks_per_octave"].get<int>();
    cs.subcell_taps = doc["coupling"]["subcell_taps"].get<long>();
    cs.max_radius_cells = doc["coupling"]["max_radius_cells"].get<double>();
    auto ccd = cs.diagnostics();
    d.insert(d.end(), ccd.begin(), ccd.end());

    auto const& pr = doc["probes"];
    ProbeSet ps;
    for (std::size_t i = 0; i < pr.size(); ++i)
    {
        if (!pr[i].is_array() || pr[i].size() != 2 || !pr[i][0].is_number() || !pr[i][1].is_number())
        {
            d.push_back("probes[" + std::to_string(i) + "]: expected [t, x]");
            return d;
        }
        ps.points.emplace_back(pr[i][0].get<double>(), pr[i][1].get<double>());
    }
    if (gd.empty() && !ps.points.empty())
    {
        auto pd = ps.diagnostics(g);
        for (auto const& s : pd)
            if (s.rfind("probes[", 0) == 0)
                d.push_back(s);
        for (std::size_t i = 0; i < ps.points.size(); ++i)
            if (ps.points[i].first < 0 || ps.points[i].first > g.T + 1e-12)
                d.push_back("probes[" + std::to_string(i) + "]: t outside [0, T]");
    }
    for (auto const& [k, v] : doc["tolerances"].items())
        if (!(v.get<double>() >= 0))
            d.push_back("tolerances." + k + ": must be non-negative");

    if (d.empty() && info->check)
    {
        auto ed = info->check(to_config(doc));
        d.insert(d.end(), ed.begin(), ed.end());
    }
    return d;
}

ExperimentConfig to_config(Json const& raw)
{
    Json const doc = merged(raw);
    ExperimentConfig c;
    c.doc = doc;
    c.experiment = doc["experiment"].get<std::string>();
    c.grid.h = doc["grid"]["h"].get<double>();
    c.grid.T = doc["grid"]["T"].get<double>();
    c.grid.x_lo = doc["grid"]["x_lo"].get<double>();
    c.grid.x_hi = doc["grid"]["x_hi"].get<double>();
    for (auto const& a : doc["alphas"])
        c.alphas.push_back(a.get<double>());
    c.coeffs.b = Preset::parse(doc["coeffs"]["b"].get<std::string>());
    c.coeffs.sigma = Preset::parse(doc["coeffs"]["sigma"].get<std::string>());
    c.coeffs.data.u0 = Preset::parse(doc["coeffs"]["u0"].get<std::string>());
    c.coeffs.data.v0 = Preset::parse(doc["coeffs"]["v0"].get<std::string>());
    c.n_rep = static_cast<long>(doc["n_rep"].get<double>());
    c.seed = doc["seed"].is_number_unsigned() ? doc["seed"].get<std::uint64_t>()
                                              : static_cast<std::uint64_t>(doc["seed"].get<double>());
    int const t = static_cast<int>(doc["threads"].get<double>());
    c.threads = t == 0 ? default_threads() : t;
    c.output_dir = doc["output_dir"].get<std::string>();
    c.coupling.eps_tail = doc["coupling"]["eps_tail"].get<double>();
    c.coupling.near_cells = doc["coupling"]["near_cells"].get<long>();
    c.coupling.blocks_per_octave = doc["coupling"]["blocks_per_octave"].get<int>();
    c.coupling.subcell_taps = doc["coupling"]["subcell_taps"].get<long>();
    c.coupling.max_radius_cells = doc["coupling"]["max_radius_cells"].get<double>();
    for (auto const& p : doc["probes"])
        c.probes.emplace_back(p[0].get<double>(), p[1].get<double>());
    for (auto const& [k, v] : doc["tolerances"].items())
        c.tolerances[k] = v.get<double>();
    c.params = doc["params"];
    return c;
}

std::string config_hash(Json const& raw)
{
    Json doc = merged(raw);
    if (doc.is_object())
    {
        doc.erase("output_dir");
        doc.erase("threads");
    }
    std::string const canon = doc.dump();
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(canon.data(), canon.size(), md, &len, EVP_sha256(), nullptr);
    static char const hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < 8 && i < len; ++i)
    {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

}  // namespace rw::lab
