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

#include "wpcn/cmdp.hpp"
#include "wpcn/system.hpp"

#include <cstdint>
#include <string>
#include <vector>

/// Monte-Carlo rollouts of pure and mixed policies on the WPCN chain.
namespace wpcn::sim {

/// Generator used for every rollout; recorded in output metadata.
inline constexpr const char* kRngName = "mt19937_64";

/// A pure policy, or two pure policies drawn afresh every block
/// (`primary` with probability q).
struct RolloutPolicy {
    cmdp::PurePolicy primary;
    cmdp::PurePolicy secondary;
    double q = 1.0;

    static RolloutPolicy pure(cmdp::PurePolicy policy);
    static RolloutPolicy mixed(const cmdp::MixedPolicy& policy);
    bool is_mixed() const { return q < 1.0; }
};

struct BlockRecord {
    std::size_t t = 0;         ///< block number, from 1
    SystemState state;
    std::size_t choice = 0;    ///< position among the feasible choices of state
    std::size_t action_id = 0; ///< grid index
    double reward = 0.0;       ///< bits
    double cost = 0.0;         ///< J
};

struct Trajectory {
    std::uint64_t seed = 0;
    std::size_t horizon = 0;
    std::vector<BlockRecord> records;
};

/// Rolls out `horizon` blocks from s0. Throws DomainError for horizon 0,
/// a bad start state, a policy of the wrong size or q outside [0, 1].
Trajectory rollout(const WpcnModel& model, const RolloutPolicy& policy, const SystemState& s0,
                   std::size_t horizon, std::uint64_t seed);

/// Long-rollout averages with batch-means standard errors.
struct RolloutSummary {
    std::size_t horizon = 0;
    std::size_t batches = 0;
    double mean_reward = 0.0;
    double mean_cost = 0.0;
    double se_reward = 0.0;
    double se_cost = 0.0;
    std::vector<double> channel_occupancy; ///< per channel state
    std::vector<double> occupancy_se;
    std::vector<double> state_frequency;   ///< per model state index
};

/// Same sample path as `rollout` with the same arguments, without storing it.
RolloutSummary summarize_rollout(const WpcnModel& model, const RolloutPolicy& policy,
                                 const SystemState& s0, std::size_t horizon, std::uint64_t seed,
                                 std::size_t batches = 50);

struct DiscountedEstimate {
    double reward = 0.0;          ///< (1-lambda) sum_t lambda^t reward_t
    double cost = 0.0;
    double reward_truncation = 0.0; ///< lambda^(N+1) max|reward|
    double cost_truncation = 0.0;
};

DiscountedEstimate discounted_estimate(const Trajectory& trajectory, double lambda);

/// Columns t, h (1-based), b, tauE, tauI, PE, PI, reward_bits, cost_J.
/// Throws IoError with the path on failure.
void write_trajectory_csv(const Trajectory& trajectory, const WpcnModel& model,
                          const std::string& path);

} // namespace wpcn::sim
