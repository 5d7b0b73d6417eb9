// SPDX-License-Identifier: Apache-2.0
#include "rieszwave/presets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "rieszwave/errors.hpp"
#include "rieszwave/format.hpp"

namespace rw {
namespace {

struct PresetInfo
{
    PresetKind kind;
    char const* name;
    std::size_t min_args;
    std::vector<double> defaults;
};

std::vector<PresetInfo> const& registry()
{
    static std::vector<PresetInfo> const r = {
        {PresetKind::zero, "zero", 0, {}},
        {PresetKind::constant, "constant", 1, {0}},
        {PresetKind::affine, "affine", 2, {0, 0}},
        {PresetKind::sine, "sin", 0, {1, 1, 0}},
        {PresetKind::tanh_scaled, "tanh", 0, {1, 1, 0}},
        {PresetKind::bump, "bump", 0, {1, 1}},
    };
    return r;
}

PresetInfo const& info(PresetKind k)
{
    for (auto const& i : registry())
        if (i.kind == k)
            return i;
    throw DomainError("unknown preset kind");
}

// log(cosh(z)) without overflow
double log_cosh(double z)
{
    double const a = std::fabs(z);
    return a + std::log1p(std::exp(-2 * a)) - std::log(2.0);
}

std::string trim(std::string s)
{
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

}  // namespace

Preset::Preset(PresetKind kind, std::vector<double> params) : kind_(kind)
{
    auto const& i = info(kind);
    if (params.size() < i.min_args || params.size() > i.defaults.size())
        throw DomainError(std::string("preset ") + i.name + ": expected "
                          + std::to_string(i.min_args) + ".."
                          + std::to_string(i.defaults.size()) + " parameters");
    p_ = i.defaults;
    std::copy(params.begin(), params.end(), p_.begin());
    for (double v : p_)
        if (!std::isfinite(v))
            throw DomainError(std::string("preset ") + i.name
                              + ": parameters must be finite");
    if (kind_ == PresetKind::bump && !(p_[1] > 0))
        throw DomainError("preset bump: width must be positive");
}

Preset Preset::parse(std::string const& text)
{
    std::string const s = trim(text);
    auto open = s.find('(');
    std::string name = trim(s.substr(0, open));
    std::vector<double> args;
    if (open != std::string::npos)
    {
        auto close = s.rfind(')');
        if (close == std::string::npos || close < open || trim(s.substr(close + 1)) != "")
            throw DomainError("malformed preset '" + text + "'");
        std::string inner = s.substr(open + 1, close - open - 1);
        std::stringstream ss(inner);
        std::string tok;
        while (std::getline(ss, tok, ','))
        {
            tok = trim(tok);
            if (tok.empty())
            {
                if (inner.find_first_not_of(" \t") == std::string::npos)
                    break;
                throw DomainError("empty argument in preset '" + text + "'");
            }
            std::size_t used = 0;
            double v = 0;
            try
            {
                v = std::stod(tok, &used);
            }
            catch (std::exception const&)
            {
                used = 0;
            }
            if (used != tok.size())
                throw DomainError("non-numeric argument '" + tok + "' in preset '"
                                  + text + "'");
            args.push_back(v);
        }
    }
    for (auto const& i : registry())
        if (name == i.name)
            return Preset(i.kind, args);
    throw DomainError("unknown preset id '" + name + "'");
}

bool Preset::is_zero() const noexcept
{
    switch (kind_)
    {
        case PresetKind::zero: return true;
        case PresetKind::constant: return p_[0] == 0;
        case PresetKind::affine: return p_[0] == 0 && p_[1] == 0;
        case PresetKind::sine:
        case PresetKind::tanh_scaled:
            return p_[2] == 0 && (p_[0] == 0 || p_[1] == 0);
        case PresetKind::bump: return p_[0] == 0;
    }
    return false;
}

double Preset::operator()(double x) const
{
    switch (kind_)
    {
        case PresetKind::zero: return 0;
        case PresetKind::constant: return p_[0];
        case PresetKind::affine: return p_[0] + p_[1] * x;
        case PresetKind::sine: return p_[0] * std::sin(p_[1] * x) + p_[2];
        case PresetKind::tanh_scaled: return p_[0] * std::tanh(p_[1] * x) + p_[2];
        case PresetKind::bump: {
            double const r = x / p_[1];
            if (std::fabs(r) >= 1)
                return 0;
            double const q = 1 - r * r;
            return p_[0] * q * q;
        }
    }
    return 0;
}

double Preset::antiderivative(double x) const
{
    switch (kind_)
    {
        case PresetKind::zero: return 0;
        case PresetKind::constant: return p_[0] * x;
        case PresetKind::affine: return p_[0] * x + 0.5 * p_[1] * x * x;
        case PresetKind::sine: {
            double const A = p_[0], k = p_[1];
            double osc = k == 0 ? 0 : A * (1 - std::cos(k * x)) / k;
            return osc + p_[2] * x;
        }
        case PresetKind::tanh_scaled: {
            double const A = p_[0], k = p_[1];
            double osc = k == 0 ? 0 : A * log_cosh(k * x) / k;
            return osc + p_[2] * x;
        }
        case PresetKind::bump: {
            double const A = p_[0], w = p_[1];
            double const r = std::clamp(x / w, -1.0, 1.0);
            // integral of (1 - r^2)^2 dr = r - 2r^3/3 + r^5/5
            return A * w * (r - 2 * r * r * r / 3 + r * r * r * r * r / 5);
        }
    }
    return 0;
}

double Preset::lipschitz() const
{
    switch (kind_)
    {
        case PresetKind::zero:
        case PresetKind::constant: return 0;
        case PresetKind::affine: return std::fabs(p_[1]);
        case PresetKind::sine:
        case PresetKind::tanh_scaled: return std::fabs(p_[0] * p_[1]);
        case PresetKind::bump:
            return 8 * std::fabs(p_[0]) / (3 * std::sqrt(3.0) * p_[1]);
    }
    return 0;
}

double Preset::sup_on(double lo, double hi) const
{
    switch (kind_)
    {
        case PresetKind::zero: return 0;
        case PresetKind::constant: return std::fabs(p_[0]);
        case PresetKind::affine:
            return std::max(std::fabs((*this)(lo)), std::fabs((*this)(hi)));
        case PresetKind::sine:
        case PresetKind::tanh_scaled: return std::fabs(p_[0]) + std::fabs(p_[2]);
        case PresetKind::bump: return std::fabs(p_[0]);
    }
    return 0;
}

std::string Preset::check_bounds(double lo, double hi, int n_points) const
{
    double const lip = lipschitz();
    double const sup = sup_on(lo, hi);
    double const dx = (hi - lo) / (n_points - 1);
    double prev = (*this)(lo);
    for (int i = 1; i < n_points; ++i)
    {
        double const x = lo + i * dx;
        double const v = (*this)(x);
        if (std::fabs(v) > sup * (1 + 1e-12) + 1e-300)
            return to_string() + ": sup bound violated at x=" + std::to_string(x);
        if (std::fabs(v - prev) > lip * dx * (1 + 1e-9) + 1e-14)
            return to_string() + ": Lipschitz bound violated near x="
                   + std::to_string(x);
        prev = v;
    }
    return {};
}

std::string Preset::to_string() const
{
    std::ostringstream os;
    os << info(kind_).name << '(';
    for (std::size_t i = 0; i < p_.size(); ++i)
        os << (i ? "," : "") << format_real(p_[i]);
    os << ')';
    return os.str();
}

}  // namespace rw
