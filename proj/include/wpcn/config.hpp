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

#pragma once

#include "wpcn/channel.hpp"
#include "wpcn/cmdp.hpp"
#include "wpcn/system.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wpcn {

inline constexpr const char* kToolVersion = "1.0.0";

enum class PolicyKind { optimal, myopic, both };

std::string to_string(PolicyKind kind);
PolicyKind parse_policy_kind(const std::string& text);

/// Everything one run needs. Energies are in units of Bref = 1e-3 T.
/// Defaults are the reference scenario.
struct ExperimentConfig {
    // channel
    std::size_t K = 3;
    double fD = 1.34;
    double varrho2 = 0.125;
    double varsigma2 = 0.75;
    double T = 0.016;
    // system
    double PmaxE = 10.0;
    double PcAP = 0.5;
    double PcU = 0.005;
    double effAP = 0.9;
    double effU = 0.9;
    double eta = 0.95;
    double lambda = 0.9;
    double GA_dBi = 8.0;
    double zeta = 1.0;
    double W = 2000.0;
    double N0_dBm_Hz = -164.0;
    double d = 10.0;
    double alpha = 2.8;
    double Bmax_ref = 10.0;
    double Q_ref = 1.0;
    double Eth_ref = 500.0;
    // action grid
    std::size_t V_tauE = 9;
    std::size_t V_tauI = 9;
    std::size_t V_PE = 5;
    std::size_t V_PI = 9;
    double PI_min = 1e-5;
    // solver
    double epsilon_beta = 1e-4;
    double epsilon_via = 1e-9;
    // run
    std::uint64_t seed = 1;
    std::size_t horizon = 1'000'000;
    std::size_t threads = 0; ///< 0: hardware concurrency
    PolicyKind policy = PolicyKind::both;
    std::string sweep_param;
    std::vector<double> sweep_values;
    std::string output = "wpcn_out";

    bool operator==(const ExperimentConfig&) const = default;

    /// Applies one `key = value` setting. Throws ConfigError.
    void set(const std::string& key, const std::string& value);
    /// Applies `key=value`. Throws ConfigError.
    void set_assignment(const std::string& assignment);

    /// Throws ConfigError on inconsistent or out-of-range settings.
    void validate() const;

    std::size_t battery_levels() const;
    double reference_energy_j() const { return 1e-3 * T; }

    SystemParams system_params() const;
    RicianFading fading() const;
    GridLevels grid_levels() const;
    cmdp::SolveOptions solve_options() const;
};

/// Numeric keys that a sweep may vary.
const std::vector<std::string>& sweepable_keys();
/// True if changing `key` changes the channel model.
bool affects_channel(const std::string& key);
/// Value of a sweepable key. Throws ConfigError for an unknown key.
double get_numeric(const ExperimentConfig& config, const std::string& key);
void set_numeric(ExperimentConfig& config, const std::string& key, double value);

/// Flat `key = value` text, `#` comments. Throws ConfigError with the line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// All keys in a fixed order, numbers with 17 significant digits.
std::string serialize_config(const ExperimentConfig& config);

} // namespace wpcn
