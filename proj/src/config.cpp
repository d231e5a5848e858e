// SPDX-License-Identifier: Apache-2.0
//
// wpcn: optimal online transmission policies for energy-constrained
// wireless-powered communication networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "wpcn/config.hpp"

#include "wpcn/error.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace wpcn {

namespace {

struct RealKey {
    const char* name;
    double ExperimentConfig::*member;
};

struct CountKey {
    const char* name;
    std::size_t ExperimentConfig::*member;
};

const RealKey kRealKeys[] = {
    {"fD", &ExperimentConfig::fD},
    {"varrho2", &ExperimentConfig::varrho2},
    {"varsigma2", &ExperimentConfig::varsigma2},
    {"T", &ExperimentConfig::T},
    {"PmaxE", &ExperimentConfig::PmaxE},
    {"PcAP", &ExperimentConfig::PcAP},
    {"PcU", &ExperimentConfig::PcU},
    {"effAP", &ExperimentConfig::effAP},
    {"effU", &ExperimentConfig::effU},
    {"eta", &ExperimentConfig::eta},
    {"lambda", &ExperimentConfig::lambda},
    {"GA_dBi", &ExperimentConfig::GA_dBi},
    {"zeta", &ExperimentConfig::zeta},
    {"W", &ExperimentConfig::W},
    {"N0_dBm_Hz", &ExperimentConfig::N0_dBm_Hz},
    {"d", &ExperimentConfig::d},
    {"alpha", &ExperimentConfig::alpha},
    {"Bmax_ref", &ExperimentConfig::Bmax_ref},
    {"Q_ref", &ExperimentConfig::Q_ref},
    {"Eth_ref", &ExperimentConfig::Eth_ref},
    {"PI_min", &ExperimentConfig::PI_min},
    {"epsilon_beta", &ExperimentConfig::epsilon_beta},
    {"epsilon_via", &ExperimentConfig::epsilon_via},
};

const CountKey kCountKeys[] = {
    {"K", &ExperimentConfig::K},
    {"V_tauE", &ExperimentConfig::V_tauE},
    {"V_tauI", &ExperimentConfig::V_tauI},
    {"V_PE", &ExperimentConfig::V_PE},
    {"V_PI", &ExperimentConfig::V_PI},
    {"horizon", &ExperimentConfig::horizon},
    {"threads", &ExperimentConfig::threads},
};

// serialization order
const char* const kKeyOrder[] = {
    "K", "fD", "varrho2", "varsigma2", "T", "PmaxE", "PcAP", "PcU", "effAP", "effU",
    "eta", "lambda", "GA_dBi", "zeta", "W", "N0_dBm_Hz", "d", "alpha", "Bmax_ref", "Q_ref",
    "Eth_ref", "V_tauE", "V_tauI", "V_PE", "V_PI", "PI_min", "epsilon_beta", "epsilon_via",
    "seed", "horizon", "threads", "policy", "sweep_param", "sweep_values", "output",
};

const RealKey* find_real(const std::string& key)
{
    for (const RealKey& k : kRealKeys) {
        if (key == k.name)
            return &k;
    }
    return nullptr;
}

const CountKey* find_count(const std::string& key)
{
    for (const CountKey& k : kCountKeys) {
        if (key == k.name)
            return &k;
    }
    return nullptr;
}

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
        throw ConfigError("config key '" + key + "': not a finite number: '" + text + "'");
    return v;
}

std::size_t to_count(const std::string& key, double v)
{
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e15)
        throw ConfigError("config key '" + key + "': expected a nonnegative integer");
    return static_cast<std::size_t>(v);
}

std::uint64_t parse_seed(const std::string& text)
{
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (t.empty() || t[0] == '-' || end != t.c_str() + t.size() || errno == ERANGE)
        throw ConfigError("config key 'seed': expected an unsigned integer: '" + text + "'");
    return v;
}

std::string format_real(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void check(bool ok, const std::string& what)
{
    if (!ok)
        throw ConfigError("invalid configuration: " + what);
}

} // namespace

std::string to_string(PolicyKind kind)
{
    switch (kind) {
    case PolicyKind::optimal:
        return "optimal";
    case PolicyKind::myopic:
        return "myopic";
    case PolicyKind::both:
        return "both";
    }
    return "both";
}

PolicyKind parse_policy_kind(const std::string& text)
{
    const std::string t = trim(text);
    if (t == "optimal")
        return PolicyKind::optimal;
    if (t == "myopic")
        return PolicyKind::myopic;
    if (t == "both")
        return PolicyKind::both;
    throw ConfigError("config key 'policy': expected optimal, myopic or both, got '" + text + "'");
}

void ExperimentConfig::set(const std::string& raw_key, const std::string& value)
{
    const std::string key = trim(raw_key);
    if (const RealKey* k = find_real(key)) {
        this->*(k->member) = parse_real(key, value);
    } else if (const CountKey* k = find_count(key)) {
        this->*(k->member) = to_count(key, parse_real(key, value));
    } else if (key == "seed") {
        seed = parse_seed(value);
    } else if (key == "policy") {
        policy = parse_policy_kind(value);
    } else if (key == "sweep_param") {
        sweep_param = trim(value);
    } else if (key == "sweep_values") {
        sweep_values.clear();
        std::stringstream list(value);
        std::string item;
        while (std::getline(list, item, ',')) {
            if (!trim(item).empty())
                sweep_values.push_back(parse_real(key, item));
        }
    } else if (key == "output") {
        output = trim(value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void ExperimentConfig::set_assignment(const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("expected key=value, got '" + assignment + "'");
    set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::size_t ExperimentConfig::battery_levels() const
{
    check(Bmax_ref > 0.0 && Q_ref > 0.0, "Bmax_ref and Q_ref must be positive");
    const double ratio = Bmax_ref / Q_ref;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio) || rounded < 1.0) {
        std::ostringstream msg;
        msg << "Bmax_ref / Q_ref = " << ratio << " must be a positive integer";
        throw ConfigError("invalid configuration: " + msg.str());
    }
    return static_cast<std::size_t>(rounded);
}

void ExperimentConfig::validate() const
{
    check(K >= 1, "K must be at least 1");
    check(fD > 0.0 && varrho2 > 0.0 && varsigma2 >= 0.0, "fading parameters out of range");
    check(T > 0.0, "T must be positive");
    check(PmaxE >= 0.0 && PcAP >= 0.0 && PcU >= 0.0, "powers must be nonnegative");
    check(effAP > 0.0 && effAP <= 1.0 && effU > 0.0 && effU <= 1.0, "efficiencies in (0, 1]");
    check(eta > 0.0 && eta <= 1.0, "eta must lie in (0, 1]");
    check(lambda >= 0.0 && lambda < 1.0, "lambda must lie in [0, 1)");
    check(zeta >= 1.0, "zeta must be at least 1");
    check(W > 0.0 && d > 0.0 && alpha >= 0.0, "W, d must be positive and alpha nonnegative");
    check(Eth_ref >= 0.0, "Eth_ref must be nonnegative");
    battery_levels();
    check(V_tauE >= 1 && V_tauI >= 1 && V_PE >= 1 && V_PI >= 1, "grid levels must be >= 1");
    check(PI_min > 0.0, "PI_min must be positive");
    check(epsilon_beta > 0.0 && epsilon_via > 0.0, "solver tolerances must be positive");
    check(horizon >= 1, "horizon must be at least 1");
    if (!sweep_param.empty()) {
        const auto& keys = sweepable_keys();
        check(std::find(keys.begin(), keys.end(), sweep_param) != keys.end(),
              "sweep_param '" + sweep_param + "' is not a sweepable key");
        check(!sweep_values.empty(), "sweep_values must be nonempty");
    }
}

SystemParams ExperimentConfig::system_params() const
{
    SystemParams p;
    p.pmax_e = PmaxE;
    p.pc_ap = PcAP;
    p.pc_u = PcU;
    p.eff_ap = effAP;
    p.eff_u = effU;
    p.eta = eta;
    p.discount = lambda;
    p.antenna_gain = db_to_linear(GA_dBi);
    p.gap_factor = zeta;
    p.bandwidth_hz = W;
    p.noise_density_w_hz = dbm_per_hz_to_w_per_hz(N0_dBm_Hz);
    p.distance_m = d;
    p.pathloss_exponent = alpha;
    p.block_s = T;
    p.quantum_j = Q_ref * reference_energy_j();
    p.battery_levels = battery_levels();
    p.energy_budget_j = Eth_ref * reference_energy_j();
    return p;
}

RicianFading ExperimentConfig::fading() const
{
    return {varrho2, varsigma2, fD};
}

GridLevels ExperimentConfig::grid_levels() const
{
    return {V_tauE, V_tauI, V_PE, V_PI, PI_min};
}

cmdp::SolveOptions ExperimentConfig::solve_options() const
{
    cmdp::SolveOptions o;
    o.epsilon_beta = epsilon_beta;
    o.epsilon_via = epsilon_via;
    return o;
}

const std::vector<std::string>& sweepable_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const RealKey& r : kRealKeys)
            k.push_back(r.name);
        for (const CountKey& c : kCountKeys) {
            if (std::string(c.name) != "horizon" && std::string(c.name) != "threads")
                k.push_back(c.name);
        }
        return k;
    }();
    return keys;
}

bool affects_channel(const std::string& key)
{
    static const char* const keys[] = {"K", "fD", "varrho2", "varsigma2", "T", "d", "alpha"};
    return std::find(std::begin(keys), std::end(keys), key) != std::end(keys);
}

double get_numeric(const ExperimentConfig& config, const std::string& key)
{
    if (const RealKey* k = find_real(key))
        return config.*(k->member);
    if (const CountKey* k = find_count(key))
        return static_cast<double>(config.*(k->member));
    throw ConfigError("not a numeric config key: '" + key + "'");
}

void set_numeric(ExperimentConfig& config, const std::string& key, double value)
{
    if (const RealKey* k = find_real(key))
        config.*(k->member) = value;
    else if (const CountKey* k = find_count(key))
        config.*(k->member) = to_count(key, value);
    else
        throw ConfigError("not a numeric config key: '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text)
{
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        if (trim(line).empty())
            continue;
        try {
            config.set_assignment(line);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(number) + ": " + e.what());
        }
    }
    return config;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open config file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_config(text.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string serialize_config(const ExperimentConfig& config)
{
    std::ostringstream out;
    for (const char* key : kKeyOrder) {
        const std::string k = key;
        out << k << " = ";
        if (const RealKey* r = find_real(k)) {
            out << format_real(config.*(r->member));
        } else if (const CountKey* c = find_count(k)) {
            out << config.*(c->member);
        } else if (k == "seed") {
            out << config.seed;
        } else if (k == "policy") {
            out << to_string(config.policy);
        } else if (k == "sweep_param") {
            out << config.sweep_param;
        } else if (k == "sweep_values") {
            for (std::size_t i = 0; i < config.sweep_values.size(); ++i)
                out << (i ? ", " : "") << format_real(config.sweep_values[i]);
        } else if (k == "output") {
            out << config.output;
        }
        out << '\n';
    }
    return out.str();
}

} // namespace wpcn
