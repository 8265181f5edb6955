// SPDX-License-Identifier: Apache-2.0
//
// starris - impedance-level modeling of simultaneously transmitting and
// reflecting surfaces, with uplink NOMA outage analysis and simulation
// Copyright (C) 2026 the starris contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "starris/run_config.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "starris/table_io.hpp"

namespace starris::cli
{

namespace
{

std::string trim(const std::string &s)
{
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// raw section -> key -> value store with consumption tracking, so anything
// left unread at the end can be reported as an unknown key
class KeyStore
{
  public:
    void insert(const std::string &section, const std::string &key, const std::string &value)
    {
        auto [it, fresh] = data_[section].try_emplace(key, value);
        (void)it;
        if (!fresh)
            throw std::invalid_argument("duplicate key [" + section + "] " + key);
    }

    bool has(const std::string &section, const std::string &key) const
    {
        auto s = data_.find(section);
        return s != data_.end() && s->second.count(key) > 0;
    }

    std::string take(const std::string &section, const std::string &key)
    {
        consumed_.insert(section + "." + key);
        auto s = data_.find(section);
        if (s == data_.end())
            throw std::invalid_argument("missing required section [" + section + "]");
        auto k = s->second.find(key);
        if (k == s->second.end())
            throw std::invalid_argument("missing required key [" + section + "] " + key);
        return k->second;
    }

    std::string take_or(const std::string &section, const std::string &key, const std::string &fallback)
    {
        consumed_.insert(section + "." + key);
        if (!has(section, key))
            return fallback;
        return data_.at(section).at(key);
    }

    void reject_unconsumed() const
    {
        for (const auto &[section, keys] : data_)
            for (const auto &[key, value] : keys)
                if (consumed_.count(section + "." + key) == 0)
                    throw std::invalid_argument("unknown key [" + section + "] " + key);
    }

  private:
    std::map<std::string, std::map<std::string, std::string>> data_;
    std::set<std::string> consumed_;
};

double to_double(const std::string &value, const std::string &what)
{
    char *end = nullptr;
    double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || !std::isfinite(v))
        throw std::invalid_argument("not a finite number for " + what + ": '" + value + "'");
    return v;
}

std::uint64_t to_u64(const std::string &value, const std::string &what)
{
    char *end = nullptr;
    unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0' || value.find('-') != std::string::npos)
        throw std::invalid_argument("not a non-negative integer for " + what + ": '" + value + "'");
    return v;
}

double dbm_to_watt(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

// "a,b,c" or "start:stop:step" (both ends included, within half a step)
std::vector<double> parse_grid(const std::string &value)
{
    std::vector<double> grid;
    if (value.find(':') != std::string::npos)
    {
        std::istringstream ss(value);
        std::string part;
        double v[3];
        int n = 0;
        while (std::getline(ss, part, ':'))
        {
            if (n >= 3)
                throw std::invalid_argument("grid range needs exactly start:stop:step");
            v[n++] = to_double(trim(part), "sweep grid");
        }
        if (n != 3 || !(v[2] > 0.0) || v[1] < v[0])
            throw std::invalid_argument("grid range needs start <= stop and a positive step");
        for (double x = v[0]; x <= v[1] + 0.5 * v[2]; x += v[2])
            grid.push_back(x);
    }
    else
    {
        std::istringstream ss(value);
        std::string part;
        while (std::getline(ss, part, ','))
            grid.push_back(to_double(trim(part), "sweep grid"));
    }
    if (grid.empty())
        throw std::invalid_argument("sweep grid is empty");
    return grid;
}

// one fading link from its section keys: exactly one K form, exactly one
// power form; distances need the shared path loss exponent
channels::RicianLink parse_link(KeyStore &ks, const std::string &prefix, bool has_exponent,
                                double exponent)
{
    const std::string sec = "links";
    bool k_db = ks.has(sec, prefix + ".k_db");
    bool k_lin = ks.has(sec, prefix + ".k_linear");
    if (k_db == k_lin)
        throw std::invalid_argument("link '" + prefix + "' needs exactly one of k_db / k_linear");
    bool omega = ks.has(sec, prefix + ".omega");
    bool dist = ks.has(sec, prefix + ".distance");
    if (omega == dist)
        throw std::invalid_argument("link '" + prefix + "' needs exactly one of omega / distance");

    channels::RicianLink link;
    if (k_db)
        link.k = channels::k_from_db(to_double(ks.take(sec, prefix + ".k_db"), prefix + ".k_db"));
    else
        link.k = to_double(ks.take(sec, prefix + ".k_linear"), prefix + ".k_linear");
    if (omega)
    {
        link.omega = to_double(ks.take(sec, prefix + ".omega"), prefix + ".omega");
    }
    else
    {
        if (!has_exponent)
            throw std::invalid_argument("link '" + prefix + "' uses a distance but [links] path_loss_exponent is missing");
        link.omega = channels::omega_from_distance(
            to_double(ks.take(sec, prefix + ".distance"), prefix + ".distance"), exponent);
    }
    channels::validate(link);
    return link;
}

std::string default_meta_path(const std::string &csv_path)
{
    std::size_t dot = csv_path.find_last_of('.');
    std::size_t slash = csv_path.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        return csv_path.substr(0, dot) + ".json";
    return csv_path + ".json";
}

std::string canonical_text(const RunConfig &cfg, double noise_dbm, bool has_p, double p_dbm)
{
    const auto &sc = cfg.spec.scenario;
    const auto &ln = cfg.spec.links;
    std::ostringstream out;
    auto g = [](double v) { return io::format_full(v); };

    out << "[surface]\n";
    out << "m = " << sc.m_elements << "\n";
    out << "beta_t = " << g(sc.beta_t) << "\n";
    out << "beta_r = " << g(sc.beta_r) << "\n";
    out << "mode = " << (sc.mode == access::AmplitudeMode::uniform ? "uniform" : "mode_switching") << "\n";
    if (sc.mode == access::AmplitudeMode::mode_switching)
        out << "transmit_fraction = " << g(sc.transmit_fraction) << "\n";
    out << "\n[links]\n";
    out << "h.k_linear = " << g(ln.bs.k) << "\n";
    out << "h.omega = " << g(ln.bs.omega) << "\n";
    out << "g_r.k_linear = " << g(ln.user_r.k) << "\n";
    out << "g_r.omega = " << g(ln.user_r.omega) << "\n";
    out << "g_t.k_linear = " << g(ln.user_t.k) << "\n";
    out << "g_t.omega = " << g(ln.user_t.omega) << "\n";
    out << "\n[access]\n";
    out << "scheme = " << (sc.scheme == access::Scheme::noma ? "noma" : "oma") << "\n";
    out << "alpha0 = " << g(sc.alpha0) << "\n";
    out << "rate_r = " << g(sc.rate_r) << "\n";
    out << "rate_t = " << g(sc.rate_t) << "\n";
    out << "noise_dbm = " << g(noise_dbm) << "\n";
    if (has_p)
        out << "p_dbm = " << g(p_dbm) << "\n";
    out << "sic_residual = "
        << (sc.sic_residual == access::SicResidual::own_gain ? "own_gain" : "cross_gain") << "\n";
    out << "\n[sweep]\n";
    const char *var = cfg.spec.variable == sim::SweepVariable::transmit_snr_db ? "transmit_snr_db"
                      : cfg.spec.variable == sim::SweepVariable::beta_t       ? "beta_t"
                                                                              : "m_elements";
    out << "variable = " << var << "\n";
    out << "grid = ";
    for (std::size_t i = 0; i < cfg.spec.grid.size(); ++i)
        out << (i ? "," : "") << g(cfg.spec.grid[i]);
    out << "\n";
    out << "trials = " << cfg.spec.trials << "\n";
    out << "seed = " << cfg.spec.seed << "\n";
    out << "workers = " << cfg.spec.workers << "\n";
    out << "\n[output]\n";
    out << "csv = " << cfg.csv_path << "\n";
    out << "metadata = " << cfg.meta_path << "\n";
    return out.str();
}

} // namespace

RunConfig parse_run_config(const std::string &text)
{
    KeyStore ks;
    {
        std::istringstream ss(text);
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(ss, line))
        {
            ++lineno;
            std::string t = trim(line);
            if (t.empty() || t[0] == '#' || t[0] == ';')
                continue;
            if (t.front() == '[')
            {
                if (t.back() != ']' || t.size() < 3)
                    throw std::invalid_argument("malformed section header at line " + std::to_string(lineno));
                section = trim(t.substr(1, t.size() - 2));
                static const std::set<std::string> known = {"surface", "links", "access", "sweep", "output"};
                if (known.count(section) == 0)
                    throw std::invalid_argument("unknown section [" + section + "]");
                continue;
            }
            std::size_t eq = t.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("expected 'key = value' at line " + std::to_string(lineno));
            if (section.empty())
                throw std::invalid_argument("key outside any section at line " + std::to_string(lineno));
            std::string key = trim(t.substr(0, eq));
            std::string value = trim(t.substr(eq + 1));
            if (key.empty() || value.empty())
                throw std::invalid_argument("empty key or value at line " + std::to_string(lineno));
            ks.insert(section, key, value);
        }
    }

    RunConfig cfg;
    auto &sc = cfg.spec.scenario;

    // sweep first: the swept variable decides which scenario keys are required
    std::string var = ks.take("sweep", "variable");
    if (var == "transmit_snr_db")
        cfg.spec.variable = sim::SweepVariable::transmit_snr_db;
    else if (var == "beta_t")
        cfg.spec.variable = sim::SweepVariable::beta_t;
    else if (var == "m_elements")
        cfg.spec.variable = sim::SweepVariable::m_elements;
    else
        throw std::invalid_argument("unknown sweep variable '" + var + "'");
    cfg.spec.grid = parse_grid(ks.take("sweep", "grid"));
    cfg.spec.trials = to_u64(ks.take("sweep", "trials"), "trials");
    if (cfg.spec.trials == 0)
        throw std::invalid_argument("trials must be positive");
    if (ks.has("sweep", "seed"))
    {
        cfg.spec.seed = to_u64(ks.take("sweep", "seed"), "seed");
    }
    else
    {
        ks.take_or("sweep", "seed", "");
        const char *env = std::getenv(seed_env_var);
        cfg.spec.seed = env ? to_u64(env, seed_env_var) : builtin_default_seed;
    }
    cfg.spec.workers = unsigned(to_u64(ks.take_or("sweep", "workers", "0"), "workers"));

    // surface
    bool beta_swept = (cfg.spec.variable == sim::SweepVariable::beta_t);
    bool m_swept = (cfg.spec.variable == sim::SweepVariable::m_elements);
    std::uint64_t m = m_swept ? to_u64(ks.take_or("surface", "m", "1"), "m")
                              : to_u64(ks.take("surface", "m"), "m");
    if (m == 0)
        throw std::invalid_argument("m must be positive");
    sc.m_elements = std::size_t(m);
    if (beta_swept)
        sc.beta_t = to_double(ks.take_or("surface", "beta_t", "0"), "beta_t");
    else
        sc.beta_t = to_double(ks.take("surface", "beta_t"), "beta_t");
    sc.beta_r = to_double(ks.take_or("surface", "beta_r", "0"), "beta_r");
    std::string mode = ks.take_or("surface", "mode", "uniform");
    if (mode == "uniform")
        sc.mode = access::AmplitudeMode::uniform;
    else if (mode == "mode_switching")
        sc.mode = access::AmplitudeMode::mode_switching;
    else
        throw std::invalid_argument("unknown surface mode '" + mode + "'");
    if (sc.mode == access::AmplitudeMode::mode_switching)
    {
        sc.transmit_fraction = to_double(ks.take("surface", "transmit_fraction"), "transmit_fraction");
        if (beta_swept)
            throw std::invalid_argument("a beta_t sweep cannot be combined with mode switching");
    }
    else
    {
        ks.take_or("surface", "transmit_fraction", "");
    }

    // links
    bool has_exponent = ks.has("links", "path_loss_exponent");
    double exponent = to_double(ks.take_or("links", "path_loss_exponent", "0"), "path_loss_exponent");
    cfg.spec.links.bs = parse_link(ks, "h", has_exponent, exponent);
    cfg.spec.links.user_r = parse_link(ks, "g_r", has_exponent, exponent);
    cfg.spec.links.user_t = parse_link(ks, "g_t", has_exponent, exponent);

    // access
    std::string scheme = ks.take("access", "scheme");
    if (scheme == "noma")
        sc.scheme = access::Scheme::noma;
    else if (scheme == "oma")
        sc.scheme = access::Scheme::oma;
    else
        throw std::invalid_argument("unknown scheme '" + scheme + "'");
    sc.alpha0 = to_double(ks.take_or("access", "alpha0", "0"), "alpha0");
    sc.rate_r = to_double(ks.take("access", "rate_r"), "rate_r");
    sc.rate_t = to_double(ks.take("access", "rate_t"), "rate_t");
    double noise_dbm = to_double(ks.take("access", "noise_dbm"), "noise_dbm");
    sc.noise = dbm_to_watt(noise_dbm);
    bool has_p = ks.has("access", "p_dbm");
    double p_dbm = to_double(ks.take_or("access", "p_dbm", "0"), "p_dbm");
    if (cfg.spec.variable != sim::SweepVariable::transmit_snr_db && !has_p)
        throw std::invalid_argument("[access] p_dbm is required unless the sweep varies transmit_snr_db");
    sc.p = has_p ? dbm_to_watt(p_dbm) : sc.noise; // placeholder; SNR sweeps override p per point
    std::string residual = ks.take_or("access", "sic_residual", "own_gain");
    if (residual == "own_gain")
        sc.sic_residual = access::SicResidual::own_gain;
    else if (residual == "cross_gain")
        sc.sic_residual = access::SicResidual::cross_gain;
    else
        throw std::invalid_argument("unknown sic_residual '" + residual + "'");

    // output
    cfg.csv_path = ks.take("output", "csv");
    cfg.meta_path = ks.take_or("output", "metadata", default_meta_path(cfg.csv_path));

    ks.reject_unconsumed();

    sc = access::with_derived_amplitudes(sc);
    access::validate(sc);

    cfg.canonical = canonical_text(cfg, noise_dbm, has_p, p_dbm);
    return cfg;
}

RunConfig load_run_config(const std::string &path)
{
    return parse_run_config(io::read_text_file(path));
}

} // namespace starris::cli
