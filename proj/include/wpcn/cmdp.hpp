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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

/// Finite constrained MDPs with a single average-cost constraint, solved by
/// the Lagrangian approach: discounted value iteration per multiplier,
/// bisection on the multiplier, and a two-policy randomized mixture.
namespace wpcn::cmdp {

struct Transition {
    std::size_t next = 0;
    double prob = 0.0;
};

struct ChoiceSpec {
    std::size_t action_id = 0; ///< caller's label, used for fingerprints
    double reward = 0.0;
    double cost = 0.0;
    std::vector<Transition> successors;
};

struct Choice {
    std::size_t action_id = 0;
    double reward = 0.0;
    double cost = 0.0;
    std::size_t first = 0; ///< offset into the transition table
    std::size_t count = 0;
};

/// States with their feasible choices, reward/cost tables and sparse kernel.
/// Choice order within a state is the tie-breaking order (lowest wins).
class FiniteCmdp {
  public:
    explicit FiniteCmdp(double discount = 0.9);

    /// Appends a state and returns its index. Throws DomainError on an empty
    /// choice list, a row not summing to one within 1e-9, or a bad target.
    std::size_t add_state(std::span<const ChoiceSpec> choices);

    std::size_t num_states() const { return offsets_.size() - 1; }
    double discount() const { return discount_; }

    std::span<const Choice> choices(std::size_t s) const
    {
        return {choices_.data() + offsets_[s], offsets_[s + 1] - offsets_[s]};
    }
    /// Flat index of the first choice of state s.
    std::size_t choice_offset(std::size_t s) const { return offsets_[s]; }
    std::size_t total_choices() const { return choices_.size(); }

    std::span<const Transition> successors(const Choice& c) const
    {
        return {transitions_.data() + c.first, c.count};
    }

    /// Throws DomainError unless every successor index is a known state.
    void validate() const;

  private:
    double discount_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Choice> choices_;
    std::vector<Transition> transitions_;
};

/// Stationary deterministic policy: chosen choice position per state.
struct PurePolicy {
    std::vector<std::size_t> choice;

    bool operator==(const PurePolicy&) const = default;
};

/// The action ids a policy picks, state by state.
std::vector<std::size_t> action_ids(const FiniteCmdp& m, const PurePolicy& policy);

/// r - beta * e.
inline double lagrangian_reward(double reward, double cost, double beta)
{
    return reward - beta * cost;
}
double lagrangian_reward(const FiniteCmdp& m, std::size_t s, std::size_t pos, double beta);

struct ValueIterationOptions {
    double epsilon = 1e-9;
    std::size_t max_sweeps = 1'000'000;
    /// Optional starting iterate; zeros when empty.
    std::vector<double> initial;
};

struct ValueIterationResult {
    std::vector<double> value;    ///< J_beta
    PurePolicy policy;            ///< greedy w.r.t. value, lowest position on ties
    std::size_t sweeps = 0;
    std::vector<double> residuals; ///< sup-norm change per sweep
};

/// Discounted value iteration for the Bellman operator
/// (1-lambda) r~(s,a) + lambda sum_s' P(s'|s,a) J(s'). Stops when successive
/// iterates differ by less than epsilon (1-lambda) / (2 lambda), which makes
/// the greedy policy epsilon-optimal.
ValueIterationResult value_iteration(const FiniteCmdp& m, double beta,
                                     const ValueIterationOptions& opts = {});

/// Policy greedy against `value`; ties go to the lowest choice position.
PurePolicy greedy_policy(const FiniteCmdp& m, double beta, std::span<const double> value);

struct StationaryOptions {
    double tolerance = 1e-12;
    std::size_t max_iterations = 5'000'000;
};

struct StationaryResult {
    std::vector<double> distribution;
    std::size_t iterations = 0;
    double residual = 0.0;              ///< ||Psi P - Psi||_inf
    std::size_t recurrent_classes = 0;
    bool multichain = false;            ///< more than one recurrent class
};

/// Stationary distribution of the chain induced by `policy`, by power
/// iteration of the lazy chain (I + P)/2 from the uniform distribution. For
/// multichain policies this is the Cesaro limit from the uniform start and
/// `multichain` is set. Throws NumericalError if the iteration cap is hit.
StationaryResult stationary_distribution(const FiniteCmdp& m, const PurePolicy& policy,
                                         const StationaryOptions& opts = {});

struct PolicyEvaluation {
    double reward = 0.0; ///< sum_s Psi(s) r(s, mu(s))
    double cost = 0.0;   ///< sum_s Psi(s) e(s, mu(s))
    StationaryResult stationary;
};

PolicyEvaluation evaluate_policy(const FiniteCmdp& m, const PurePolicy& policy,
                                 const StationaryOptions& opts = {});

struct SolveOptions {
    double epsilon_beta = 1e-4;
    double epsilon_via = 1e-9;
    std::size_t max_doublings = 60;
    StationaryOptions stationary;
};

/// Randomized mixture of two pure policies: mu_minus with probability q,
/// mu_plus otherwise.
struct MixedPolicy {
    PurePolicy mu_minus;        ///< cost-feasible end of the bracket
    PurePolicy mu_plus;         ///< cost-infeasible end of the bracket
    double q = 1.0;
    double beta_minus = 0.0;    ///< multiplier of mu_minus (upper bracket end)
    double beta_plus = 0.0;     ///< multiplier of mu_plus (lower bracket end), <= beta_minus
    double reward_minus = 0.0;
    double cost_minus = 0.0;
    double reward_plus = 0.0;
    double cost_plus = 0.0;
    double reward = 0.0;        ///< q R- + (1-q) R+
    double cost = 0.0;          ///< q E- + (1-q) E+
    bool constraint_active = false;
    std::size_t evaluations = 0; ///< value-iteration solves performed
    std::vector<std::string> diagnostics;
};

/// Lagrangian CMDP solution for the average-cost budget `budget`.
///
/// If the unconstrained (beta = 0) policy already meets the budget it is
/// returned with q = 1. Otherwise beta_hi is found by doubling from 1, the
/// bracket [beta_lo, beta_hi] with E(beta_lo) > budget >= E(beta_hi) is bisected
/// until narrower than epsilon_beta, and q solves budget = q E- + (1-q) E+.
MixedPolicy solve_cmdp(const FiniteCmdp& m, double budget, const SolveOptions& opts = {});

/// Long-run averages when the mixture is re-drawn independently every block,
/// i.e. the stationary distribution of q P_minus + (1-q) P_plus.
PolicyEvaluation evaluate_per_block_mixture(const FiniteCmdp& m, const MixedPolicy& mixed,
                                            const StationaryOptions& opts = {});

} // namespace wpcn::cmdp
