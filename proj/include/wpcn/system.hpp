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

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace wpcn {

/// Physical and battery parameters of the single-user WPCN.
/// Defaults are the reference scenario (d = 10 m, Eth = 500 Bref).
struct SystemParams {
    double pmax_e = 10.0;          ///< H-AP maximum transmit power [W]
    double pc_ap = 0.5;            ///< H-AP circuit power [W]
    double pc_u = 0.005;           ///< UE circuit power [W]
    double eff_ap = 0.9;           ///< H-AP amplifier efficiency
    double eff_u = 0.9;            ///< UE amplifier efficiency
    double eta = 0.95;             ///< RF-to-DC conversion efficiency
    double discount = 0.9;         ///< survival / discount factor lambda
    double antenna_gain = 6.309573444801933; ///< 8 dBi, linear
    double gap_factor = 1.0;       ///< modulation and coding gap zeta
    double bandwidth_hz = 2000.0;
    double noise_density_w_hz = 3.981071705534973e-20; ///< -164 dBm/Hz
    double distance_m = 10.0;
    double pathloss_exponent = 2.8;
    double block_s = 0.016;        ///< T
    double quantum_j = 1.6e-5;     ///< Q
    std::size_t battery_levels = 10; ///< L, so Bmax = L Q
    double energy_budget_j = 8e-3; ///< Eth, per block

    double battery_capacity_j() const { return static_cast<double>(battery_levels) * quantum_j; }
    double noise_power_w() const { return noise_density_w_hz * bandwidth_hz; }
    /// Battery reference energy 1e-3 * T [J].
    double reference_energy_j() const { return 1e-3 * block_s; }

    /// Throws ModelError on out-of-range values.
    void validate() const;
};

/// dBi / dBm conversions used by the configuration layer.
double db_to_linear(double db);
double dbm_per_hz_to_w_per_hz(double dbm_per_hz);

struct SystemState {
    std::size_t h = 0; ///< channel state, 0-based
    std::size_t b = 0; ///< battery level in quanta, 0..L

    bool operator==(const SystemState&) const = default;
};

struct Action {
    double tau_e = 0.0; ///< WET duration [s]
    double tau_i = 0.0; ///< WIT duration [s]
    double p_e = 0.0;   ///< H-AP transmit power [W]
    double p_i = 0.0;   ///< UE transmit power [W]

    bool operator==(const Action&) const = default;
};

struct GridLevels {
    std::size_t tau_e = 9;
    std::size_t tau_i = 9;
    std::size_t p_e = 5;
    std::size_t p_i = 9;      ///< log-spaced nonzero UE power levels (0 is added)
    double p_i_min = 1e-5;    ///< lowest nonzero UE power [W]
};

/// Enumerated candidate actions. Index 0 is always the all-zero action;
/// order is tau_e, tau_i, p_e, p_i from outermost to innermost, each ascending.
class ActionGrid {
  public:
    /// Uniform time and H-AP power levels, log-spaced UE power up to the
    /// largest power a full battery can sustain over the shortest WIT slot.
    static ActionGrid uniform(const SystemParams& params, const GridLevels& levels = {});

    /// Explicit action list. The first entry must be the all-zero action.
    static ActionGrid from_actions(std::vector<Action> actions);

    std::size_t size() const { return actions_.size(); }
    const Action& operator[](std::size_t i) const { return actions_[i]; }
    std::span<const Action> actions() const { return actions_; }
    const GridLevels& levels() const { return levels_; }
    std::span<const double> ue_power_levels() const { return ue_powers_; }

  private:
    std::vector<Action> actions_;
    std::vector<double> ue_powers_;
    GridLevels levels_;
};

/// Energy stored by WET in the current block, capped by the free battery
/// space: min(B + eta G_A P_E tau_E H_h, Bmax) - B with B = b Q.
double energy_harvested(const SystemState& s, const Action& a, const SystemParams& params,
                        const ChannelModel& channel);

/// UE energy spent during WIT: P_I tau_I / eff_u + P_cU tau_I.
double energy_spent_it(const Action& a, const SystemParams& params);

/// System energy cost of one block; nonnegative for sane parameters.
double immediate_cost(const SystemState& s, const Action& a, const SystemParams& params,
                      const ChannelModel& channel);

/// Bin-averaged log2(1 + P_I theta d^-alpha / (zeta sigma^2)) for channel state h.
double mean_spectral_efficiency(std::size_t h, double p_i, const SystemParams& params,
                                const ChannelModel& channel);

/// Expected bits delivered in one block.
double immediate_reward(const SystemState& s, const Action& a, const SystemParams& params,
                        const ChannelModel& channel);

/// Timing, power and battery-energy constraints.
bool is_feasible(const SystemState& s, const Action& a, const SystemParams& params,
                 const ChannelModel& channel);

/// Grid indices of all feasible actions at s, ascending. Never empty.
std::vector<std::size_t> feasible_actions(const SystemState& s, const SystemParams& params,
                                          const ChannelModel& channel, const ActionGrid& grid);

/// Deterministic next battery level min(b + floor((e_AC - e_IT)/Q), L).
/// Throws LogicError if the action would drive the battery negative.
std::size_t battery_successor(const SystemState& s, const Action& a, const SystemParams& params,
                              const ChannelModel& channel);

/// Distribution of the next state: channel row times a battery point mass.
std::vector<std::pair<SystemState, double>> transition_kernel(const SystemState& s, const Action& a,
                                                              const SystemParams& params,
                                                              const ChannelModel& channel);

/// The WPCN as a finite CMDP with dense reward/cost tables over feasible
/// (state, action) pairs. Immutable after construction.
class WpcnModel {
  public:
    WpcnModel(SystemParams params, std::shared_ptr<const ChannelModel> channel, ActionGrid grid);

    const SystemParams& params() const { return params_; }
    const ChannelModel& channel() const { return *channel_; }
    std::shared_ptr<const ChannelModel> channel_ptr() const { return channel_; }
    const ActionGrid& grid() const { return grid_; }
    const cmdp::FiniteCmdp& cmdp() const { return cmdp_; }

    std::size_t num_states() const { return cmdp_.num_states(); }
    std::size_t state_index(const SystemState& s) const;
    SystemState state(std::size_t index) const;

    /// Grid action behind choice position `pos` of state `s`.
    const Action& action(std::size_t s, std::size_t pos) const;
    /// Next battery level of choice position `pos` at state `s`.
    std::size_t next_battery(std::size_t s, std::size_t pos) const;
    /// e_AC - e_IT of choice position `pos` at state `s` [J].
    double net_battery_energy(std::size_t s, std::size_t pos) const;

  private:
    SystemParams params_;
    std::shared_ptr<const ChannelModel> channel_;
    ActionGrid grid_;
    cmdp::FiniteCmdp cmdp_;
    std::vector<std::size_t> next_battery_;  // flat, aligned with cmdp choices
    std::vector<double> net_energy_;         // flat, aligned with cmdp choices
};

} // namespace wpcn
