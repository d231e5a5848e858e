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

#include "wpcn/system.hpp"

#include "wpcn/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace wpcn {

namespace {

// Relative slack for timing/power bounds and the battery-energy constraint.
constexpr double kBoundSlack = 1e-12;
// Net battery change within this many quanta of an integer is snapped to it.
constexpr double kQuantumSnap = 1e-9;

void require(bool ok, const char* what)
{
    if (!ok)
        throw ModelError(std::string("SystemParams: ") + what);
}

double stored_energy(const SystemState& s, const SystemParams& params)
{
    return static_cast<double>(s.b) * params.quantum_j;
}

void check_state(const SystemState& s, const SystemParams& params, const ChannelModel& channel)
{
    if (s.h >= channel.num_states() || s.b > params.battery_levels)
        throw DomainError("system state out of range");
}

} // namespace

void SystemParams::validate() const
{
    require(pmax_e >= 0.0, "pmax_e must be nonnegative");
    require(pc_ap >= 0.0 && pc_u >= 0.0, "circuit powers must be nonnegative");
    require(eff_ap > 0.0 && eff_ap <= 1.0, "eff_ap must lie in (0, 1]");
    require(eff_u > 0.0 && eff_u <= 1.0, "eff_u must lie in (0, 1]");
    require(eta > 0.0 && eta <= 1.0, "eta must lie in (0, 1]");
    require(discount >= 0.0 && discount < 1.0, "discount must lie in [0, 1)");
    require(antenna_gain > 0.0, "antenna gain must be positive");
    require(gap_factor >= 1.0, "gap factor must be at least 1");
    require(bandwidth_hz > 0.0, "bandwidth must be positive");
    require(noise_density_w_hz > 0.0, "noise density must be positive");
    require(distance_m > 0.0, "distance must be positive");
    require(pathloss_exponent >= 0.0, "path-loss exponent must be nonnegative");
    require(block_s > 0.0, "block duration must be positive");
    require(quantum_j > 0.0, "battery quantum must be positive");
    require(battery_levels >= 1, "battery needs at least one quantum");
    require(energy_budget_j >= 0.0, "energy budget must be nonnegative");
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double dbm_per_hz_to_w_per_hz(double dbm_per_hz)
{
    return std::pow(10.0, (dbm_per_hz - 30.0) / 10.0);
}

ActionGrid ActionGrid::uniform(const SystemParams& params, const GridLevels& levels)
{
    if (levels.tau_e < 1 || levels.tau_i < 1 || levels.p_e < 1 || levels.p_i < 1)
        throw ModelError("ActionGrid: every dimension needs at least one level");
    auto linear = [](std::size_t count, double top) {
        std::vector<double> v(count, 0.0);
        for (std::size_t i = 1; i < count; ++i)
            v[i] = top * static_cast<double>(i) / static_cast<double>(count - 1);
        return v;
    };
    const std::vector<double> tau_e = linear(levels.tau_e, params.block_s);
    const std::vector<double> tau_i = linear(levels.tau_i, params.block_s);
    const std::vector<double> p_e = linear(levels.p_e, params.pmax_e);

    // Shortest nonzero WIT slot draining a full battery.
    const double shortest = levels.tau_i > 1 ? tau_i[1] : params.block_s;
    const double p_i_max =
        params.eff_u * (params.battery_capacity_j() / shortest - params.pc_u);
    ActionGrid grid;
    grid.levels_ = levels;
    grid.ue_powers_.push_back(0.0);
    if (levels.p_i == 1) {
        grid.ue_powers_.push_back(levels.p_i_min);
    } else {
        if (!(p_i_max > levels.p_i_min)) {
            std::ostringstream msg;
            msg << "ActionGrid: UE power ceiling " << p_i_max << " W is below the floor "
                << levels.p_i_min << " W";
            throw ModelError(msg.str());
        }
        const double ratio = p_i_max / levels.p_i_min;
        for (std::size_t j = 0; j < levels.p_i; ++j) {
            const double frac = static_cast<double>(j) / static_cast<double>(levels.p_i - 1);
            grid.ue_powers_.push_back(j + 1 == levels.p_i ? p_i_max
                                                          : levels.p_i_min * std::pow(ratio, frac));
        }
    }

    for (double te : tau_e) {
        for (double ti : tau_i) {
            if (te + ti > params.block_s * (1.0 + kBoundSlack))
                continue;
            for (double pe : p_e) {
                for (double pi : grid.ue_powers_)
                    grid.actions_.push_back({te, ti, pe, pi});
            }
        }
    }
    return grid;
}

ActionGrid ActionGrid::from_actions(std::vector<Action> actions)
{
    if (actions.empty() || !(actions.front() == Action{}))
        throw ModelError("ActionGrid: the first action must be the all-zero action");
    for (const Action& a : actions) {
        if (!(a.tau_e >= 0.0 && a.tau_i >= 0.0 && a.p_e >= 0.0 && a.p_i >= 0.0))
            throw ModelError("ActionGrid: actions must be nonnegative");
    }
    ActionGrid grid;
    grid.actions_ = std::move(actions);
    grid.levels_ = {0, 0, 0, 0, 0.0};
    for (const Action& a : grid.actions_) {
        if (std::find(grid.ue_powers_.begin(), grid.ue_powers_.end(), a.p_i) == grid.ue_powers_.end())
            grid.ue_powers_.push_back(a.p_i);
    }
    return grid;
}

double energy_harvested(const SystemState& s, const Action& a, const SystemParams& params,
                        const ChannelModel& channel)
{
    check_state(s, params, channel);
    const double stored = stored_energy(s, params);
    const double harvested =
        params.eta * params.antenna_gain * a.p_e * a.tau_e * channel.gains()[s.h];
    return std::min(stored + harvested, params.battery_capacity_j()) - stored;
}

double energy_spent_it(const Action& a, const SystemParams& params)
{
    return a.p_i * a.tau_i / params.eff_u + params.pc_u * a.tau_i;
}

double immediate_cost(const SystemState& s, const Action& a, const SystemParams& params,
                      const ChannelModel& channel)
{
    const double hap = a.p_e * a.tau_e / params.eff_ap + params.pc_ap * a.tau_e;
    return hap + energy_spent_it(a, params) - energy_harvested(s, a, params, channel);
}

double mean_spectral_efficiency(std::size_t h, double p_i, const SystemParams& params,
                                const ChannelModel& channel)
{
    if (p_i == 0.0)
        return 0.0;
    const double snr_per_theta =
        p_i * channel.pathloss() / (params.gap_factor * params.noise_power_w());
    return channel.bin_average(h, [snr_per_theta](double theta) {
        return std::log1p(snr_per_theta * theta) / std::numbers::ln2;
    });
}

double immediate_reward(const SystemState& s, const Action& a, const SystemParams& params,
                        const ChannelModel& channel)
{
    check_state(s, params, channel);
    if (a.tau_i == 0.0 || a.p_i == 0.0)
        return 0.0;
    return a.tau_i * params.bandwidth_hz * mean_spectral_efficiency(s.h, a.p_i, params, channel);
}

bool is_feasible(const SystemState& s, const Action& a, const SystemParams& params,
                 const ChannelModel& channel)
{
    if (!(a.tau_e >= 0.0 && a.tau_i >= 0.0 && a.p_e >= 0.0 && a.p_i >= 0.0))
        return false;
    if (a.tau_e + a.tau_i > params.block_s * (1.0 + kBoundSlack))
        return false;
    if (a.p_e > params.pmax_e * (1.0 + kBoundSlack))
        return false;
    const double available = energy_harvested(s, a, params, channel) + stored_energy(s, params);
    return energy_spent_it(a, params) <= available + kBoundSlack * params.battery_capacity_j();
}

std::vector<std::size_t> feasible_actions(const SystemState& s, const SystemParams& params,
                                          const ChannelModel& channel, const ActionGrid& grid)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (is_feasible(s, grid[i], params, channel))
            out.push_back(i);
    }
    return out;
}

std::size_t battery_successor(const SystemState& s, const Action& a, const SystemParams& params,
                              const ChannelModel& channel)
{
    const double net =
        (energy_harvested(s, a, params, channel) - energy_spent_it(a, params)) / params.quantum_j;
    const double nearest = std::round(net);
    const double quanta = std::abs(net - nearest) <= kQuantumSnap ? nearest : std::floor(net);
    const double next = static_cast<double>(s.b) + quanta;
    if (next < 0.0) {
        std::ostringstream msg;
        msg << "battery_successor: action drains " << -quanta << " quanta from level " << s.b;
        throw LogicError(msg.str());
    }
    return std::min(static_cast<std::size_t>(next), params.battery_levels);
}

std::vector<std::pair<SystemState, double>> transition_kernel(const SystemState& s, const Action& a,
                                                              const SystemParams& params,
                                                              const ChannelModel& channel)
{
    const std::size_t b_next = battery_successor(s, a, params, channel);
    std::vector<std::pair<SystemState, double>> out;
    const auto row = channel.transition().row(s.h);
    for (std::size_t h = 0; h < row.size(); ++h) {
        if (row[h] > 0.0)
            out.push_back({SystemState{h, b_next}, row[h]});
    }
    return out;
}

WpcnModel::WpcnModel(SystemParams params, std::shared_ptr<const ChannelModel> channel,
                     ActionGrid grid)
    : params_(params), channel_(std::move(channel)), grid_(std::move(grid)),
      cmdp_(params.discount)
{
    params_.validate();
    if (!channel_)
        throw ModelError("WpcnModel: missing channel model");
    if (channel_->distance_m() != params_.distance_m ||
        channel_->pathloss_exponent() != params_.pathloss_exponent ||
        channel_->block_s() != params_.block_s)
        throw ModelError("WpcnModel: channel built for a different distance, exponent or block");

    const std::size_t channel_states = channel_->num_states();
    const std::size_t levels = params_.battery_levels + 1;

    // spectral efficiency per (channel state, UE power)
    std::vector<std::map<double, double>> efficiency(channel_states);
    auto spectral = [&](std::size_t h, double p_i) {
        auto it = efficiency[h].find(p_i);
        if (it == efficiency[h].end())
            it = efficiency[h].emplace(p_i, mean_spectral_efficiency(h, p_i, params_, *channel_)).first;
        return it->second;
    };

    std::vector<cmdp::ChoiceSpec> specs;
    for (std::size_t h = 0; h < channel_states; ++h) {
        for (std::size_t b = 0; b < levels; ++b) {
            const SystemState s{h, b};
            specs.clear();
            for (std::size_t id = 0; id < grid_.size(); ++id) {
                const Action& a = grid_[id];
                if (!is_feasible(s, a, params_, *channel_))
                    continue;
                cmdp::ChoiceSpec spec;
                spec.action_id = id;
                spec.cost = immediate_cost(s, a, params_, *channel_);
                if (spec.cost < 0.0) {
                    std::ostringstream msg;
                    msg << "WpcnModel: negative energy cost " << spec.cost << " J at state (h="
                        << h << ", b=" << b << ") for action (tauE=" << a.tau_e
                        << ", tauI=" << a.tau_i << ", PE=" << a.p_e << ", PI=" << a.p_i
                        << "); check eta, antenna gain, distance and eff_ap";
                    throw ModelError(msg.str());
                }
                spec.reward = (a.tau_i == 0.0 || a.p_i == 0.0)
                                  ? 0.0
                                  : a.tau_i * params_.bandwidth_hz * spectral(h, a.p_i);
                const std::size_t b_next = battery_successor(s, a, params_, *channel_);
                const auto row = channel_->transition().row(h);
                for (std::size_t hn = 0; hn < channel_states; ++hn) {
                    if (row[hn] > 0.0)
                        spec.successors.push_back({hn * levels + b_next, row[hn]});
                }
                next_battery_.push_back(b_next);
                net_energy_.push_back(energy_harvested(s, a, params_, *channel_) -
                                      energy_spent_it(a, params_));
                specs.push_back(std::move(spec));
            }
            if (specs.empty())
                throw ModelError("WpcnModel: state without feasible actions (grid lacks the zero action?)");
            cmdp_.add_state(specs);
        }
    }
    cmdp_.validate();
}

std::size_t WpcnModel::state_index(const SystemState& s) const
{
    if (s.h >= channel_->num_states() || s.b > params_.battery_levels)
        throw DomainError("WpcnModel: state out of range");
    return s.h * (params_.battery_levels + 1) + s.b;
}

SystemState WpcnModel::state(std::size_t index) const
{
    if (index >= num_states())
        throw DomainError("WpcnModel: state index out of range");
    const std::size_t levels = params_.battery_levels + 1;
    return {index / levels, index % levels};
}

const Action& WpcnModel::action(std::size_t s, std::size_t pos) const
{
    return grid_[cmdp_.choices(s)[pos].action_id];
}

std::size_t WpcnModel::next_battery(std::size_t s, std::size_t pos) const
{
    return next_battery_[cmdp_.choice_offset(s) + pos];
}

double WpcnModel::net_battery_energy(std::size_t s, std::size_t pos) const
{
    return net_energy_[cmdp_.choice_offset(s) + pos];
}

} // namespace wpcn
