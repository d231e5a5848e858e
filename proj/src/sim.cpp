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

#include "wpcn/sim.hpp"

#include "wpcn/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

namespace wpcn::sim {

namespace {

double uniform01(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void check_inputs(const WpcnModel& model, const RolloutPolicy& policy, const SystemState& s0,
                  std::size_t horizon)
{
    if (horizon == 0)
        throw DomainError("rollout: horizon must be at least 1");
    model.state_index(s0);
    if (!(policy.q >= 0.0 && policy.q <= 1.0))
        throw DomainError("rollout: mixing weight outside [0, 1]");
    const cmdp::FiniteCmdp& m = model.cmdp();
    auto check = [&](const cmdp::PurePolicy& p) {
        if (p.choice.size() != m.num_states())
            throw DomainError("rollout: policy size does not match the model");
        for (std::size_t s = 0; s < m.num_states(); ++s) {
            if (p.choice[s] >= m.choices(s).size())
                throw DomainError("rollout: policy picks an unavailable choice");
        }
    };
    check(policy.primary);
    if (policy.is_mixed())
        check(policy.secondary);
}

// Calls visit(t, state index, choice position) for t = 1..horizon.
template <class Visit>
void walk(const WpcnModel& model, const RolloutPolicy& policy, const SystemState& s0,
          std::size_t horizon, std::uint64_t seed, Visit&& visit)
{
    check_inputs(model, policy, s0, horizon);
    std::mt19937_64 rng(seed);
    const std::size_t levels = model.params().battery_levels + 1;
    const num::Matrix& kernel = model.channel().transition();
    const std::size_t channel_states = model.channel().num_states();
    std::size_t s = model.state_index(s0);
    for (std::size_t t = 1; t <= horizon; ++t) {
        const cmdp::PurePolicy* active = &policy.primary;
        if (policy.is_mixed() && !(uniform01(rng) < policy.q))
            active = &policy.secondary;
        const std::size_t pos = active->choice[s];
        visit(t, s, pos);

        const std::size_t h = s / levels;
        const double u = uniform01(rng);
        std::size_t h_next = channel_states;
        std::size_t last_positive = h;
        double cumulative = 0.0;
        for (std::size_t j = 0; j < channel_states; ++j) {
            const double p = kernel(h, j);
            if (p <= 0.0)
                continue;
            last_positive = j;
            cumulative += p;
            if (u < cumulative) {
                h_next = j;
                break;
            }
        }
        if (h_next == channel_states)
            h_next = last_positive;
        s = h_next * levels + model.next_battery(s, pos);
    }
}

} // namespace

RolloutPolicy RolloutPolicy::pure(cmdp::PurePolicy policy)
{
    RolloutPolicy out;
    out.primary = std::move(policy);
    return out;
}

RolloutPolicy RolloutPolicy::mixed(const cmdp::MixedPolicy& policy)
{
    RolloutPolicy out;
    out.primary = policy.mu_minus;
    out.secondary = policy.mu_plus;
    out.q = policy.q;
    return out;
}

Trajectory rollout(const WpcnModel& model, const RolloutPolicy& policy, const SystemState& s0,
                   std::size_t horizon, std::uint64_t seed)
{
    Trajectory out;
    out.seed = seed;
    out.horizon = horizon;
    out.records.reserve(horizon);
    const cmdp::FiniteCmdp& m = model.cmdp();
    walk(model, policy, s0, horizon, seed, [&](std::size_t t, std::size_t s, std::size_t pos) {
        const cmdp::Choice& c = m.choices(s)[pos];
        out.records.push_back({t, model.state(s), pos, c.action_id, c.reward, c.cost});
    });
    return out;
}

RolloutSummary summarize_rollout(const WpcnModel& model, const RolloutPolicy& policy,
                                 const SystemState& s0, std::size_t horizon, std::uint64_t seed,
                                 std::size_t batches)
{
    if (batches < 2)
        throw DomainError("summarize_rollout: need at least two batches");
    const cmdp::FiniteCmdp& m = model.cmdp();
    const std::size_t channel_states = model.channel().num_states();
    const std::size_t levels = model.params().battery_levels + 1;
    const std::size_t batch_size = std::max<std::size_t>(1, horizon / batches);
    const std::size_t used_batches = std::min(batches, horizon / batch_size);

    std::vector<double> batch_reward(used_batches, 0.0), batch_cost(used_batches, 0.0);
    std::vector<std::vector<double>> batch_occupancy(used_batches,
                                                     std::vector<double>(channel_states, 0.0));
    std::vector<double> visits(m.num_states(), 0.0);
    double total_reward = 0.0;
    double total_cost = 0.0;
    walk(model, policy, s0, horizon, seed, [&](std::size_t t, std::size_t s, std::size_t pos) {
        const cmdp::Choice& c = m.choices(s)[pos];
        total_reward += c.reward;
        total_cost += c.cost;
        visits[s] += 1.0;
        const std::size_t batch = (t - 1) / batch_size;
        if (batch < used_batches) {
            batch_reward[batch] += c.reward;
            batch_cost[batch] += c.cost;
            batch_occupancy[batch][s / levels] += 1.0;
        }
    });

    auto standard_error = [&](const std::vector<double>& sums) {
        double mean = 0.0;
        for (double v : sums)
            mean += v / static_cast<double>(batch_size);
        mean /= static_cast<double>(sums.size());
        double ss = 0.0;
        for (double v : sums) {
            const double d = v / static_cast<double>(batch_size) - mean;
            ss += d * d;
        }
        const double n = static_cast<double>(sums.size());
        return n > 1.0 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    };

    RolloutSummary out;
    out.horizon = horizon;
    out.batches = used_batches;
    const double n = static_cast<double>(horizon);
    out.mean_reward = total_reward / n;
    out.mean_cost = total_cost / n;
    out.se_reward = standard_error(batch_reward);
    out.se_cost = standard_error(batch_cost);
    out.channel_occupancy.assign(channel_states, 0.0);
    out.state_frequency.resize(m.num_states());
    for (std::size_t s = 0; s < m.num_states(); ++s) {
        out.state_frequency[s] = visits[s] / n;
        out.channel_occupancy[s / levels] += visits[s] / n;
    }
    for (std::size_t h = 0; h < channel_states; ++h) {
        std::vector<double> column(used_batches);
        for (std::size_t b = 0; b < used_batches; ++b)
            column[b] = batch_occupancy[b][h];
        out.occupancy_se.push_back(standard_error(column));
    }
    return out;
}

DiscountedEstimate discounted_estimate(const Trajectory& trajectory, double lambda)
{
    if (!(lambda >= 0.0 && lambda < 1.0))
        throw DomainError("discounted_estimate: lambda must lie in [0, 1)");
    DiscountedEstimate out;
    double weight = 1.0;
    double max_reward = 0.0;
    double max_cost = 0.0;
    for (const BlockRecord& r : trajectory.records) {
        weight *= lambda;
        out.reward += weight * r.reward;
        out.cost += weight * r.cost;
        max_reward = std::max(max_reward, std::abs(r.reward));
        max_cost = std::max(max_cost, std::abs(r.cost));
    }
    out.reward *= 1.0 - lambda;
    out.cost *= 1.0 - lambda;
    const double tail = weight * lambda;
    out.reward_truncation = tail * max_reward;
    out.cost_truncation = tail * max_cost;
    return out;
}

void write_trajectory_csv(const Trajectory& trajectory, const WpcnModel& model,
                          const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open trajectory file for writing: " + path);
    out << "t,h,b,tauE,tauI,PE,PI,reward_bits,cost_J\n";
    char line[512];
    for (const BlockRecord& r : trajectory.records) {
        const Action& a = model.grid()[r.action_id];
        std::snprintf(line, sizeof line, "%zu,%zu,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t,
                      r.state.h + 1, r.state.b, a.tau_e, a.tau_i, a.p_e, a.p_i, r.reward, r.cost);
        out << line;
    }
    out.flush();
    if (!out)
        throw IoError("failed writing trajectory file: " + path);
}

} // namespace wpcn::sim
