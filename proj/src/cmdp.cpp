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

#include "wpcn/cmdp.hpp"

#include "wpcn/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

namespace wpcn::cmdp {

namespace {

void check_policy(const FiniteCmdp& m, const PurePolicy& policy)
{
    if (policy.choice.size() != m.num_states())
        throw DomainError("policy size does not match the number of states");
    for (std::size_t s = 0; s < m.num_states(); ++s) {
        if (policy.choice[s] >= m.choices(s).size())
            throw DomainError("policy picks a choice that is not available at its state");
    }
}

// Number of closed strongly connected components of the directed graph.
// Iterative Tarjan.
std::size_t count_recurrent_classes(std::size_t n,
                                    const std::vector<std::vector<std::size_t>>& adj)
{
    constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> index(n, kUnvisited), low(n, 0), component(n, kUnvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t next_index = 0;
    std::size_t num_components = 0;

    struct Frame {
        std::size_t v;
        std::size_t edge;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != kUnvisited)
            continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.edge < adj[f.v].size()) {
                const std::size_t w = adj[f.v][f.edge++];
                if (index[w] == kUnvisited) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const std::size_t v = f.v;
            call.pop_back();
            if (!call.empty())
                low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    component[w] = num_components;
                } while (w != v);
                ++num_components;
            }
        }
    }

    std::vector<bool> closed(num_components, true);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t w : adj[v]) {
            if (component[w] != component[v])
                closed[component[v]] = false;
        }
    }
    return static_cast<std::size_t>(std::count(closed.begin(), closed.end(), true));
}

// `step` computes y = x P for the chain being evaluated.
StationaryResult power_iterate(std::size_t n,
                               const std::function<void(const std::vector<double>&,
                                                        std::vector<double>&)>& step,
                               const StationaryOptions& opts)
{
    StationaryResult out;
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    std::vector<double> y(n, 0.0);
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
        step(x, y);
        double residual = 0.0;
        for (std::size_t s = 0; s < n; ++s)
            residual = std::max(residual, std::abs(y[s] - x[s]));
        if (residual <= opts.tolerance) {
            out.distribution = std::move(x);
            out.iterations = it;
            out.residual = residual;
            return out;
        }
        // lazy chain (I + P)/2 shares the stationary set and is aperiodic
        double total = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            x[s] = 0.5 * (x[s] + y[s]);
            total += x[s];
        }
        if (it % 1024 == 0) {
            for (double& v : x)
                v /= total;
        }
    }
    std::ostringstream msg;
    msg << "stationary_distribution: no convergence to " << opts.tolerance << " within "
        << opts.max_iterations << " iterations";
    throw NumericalError(msg.str());
}

void accumulate_step(const FiniteCmdp& m, const PurePolicy& policy, double weight,
                     const std::vector<double>& x, std::vector<double>& y)
{
    for (std::size_t s = 0; s < m.num_states(); ++s) {
        const double mass = weight * x[s];
        if (mass == 0.0)
            continue;
        const Choice& c = m.choices(s)[policy.choice[s]];
        for (const Transition& t : m.successors(c))
            y[t.next] += mass * t.prob;
    }
}

void add_edges(const FiniteCmdp& m, const PurePolicy& policy,
               std::vector<std::vector<std::size_t>>& adj)
{
    for (std::size_t s = 0; s < m.num_states(); ++s) {
        const Choice& c = m.choices(s)[policy.choice[s]];
        for (const Transition& t : m.successors(c)) {
            if (t.prob > 0.0)
                adj[s].push_back(t.next);
        }
    }
}

struct BracketPoint {
    double beta = 0.0;
    PurePolicy policy;
    double reward = 0.0;
    double cost = 0.0;
    bool multichain = false;
};

} // namespace

FiniteCmdp::FiniteCmdp(double discount) : discount_(discount)
{
    if (!(discount >= 0.0 && discount < 1.0))
        throw DomainError("FiniteCmdp: discount must lie in [0, 1)");
}

std::size_t FiniteCmdp::add_state(std::span<const ChoiceSpec> choices)
{
    if (choices.empty())
        throw DomainError("FiniteCmdp: every state needs at least one choice");
    for (const ChoiceSpec& spec : choices) {
        double total = 0.0;
        for (const Transition& t : spec.successors) {
            if (!(t.prob >= 0.0 && t.prob <= 1.0))
                throw DomainError("FiniteCmdp: transition probability outside [0, 1]");
            total += t.prob;
        }
        if (std::abs(total - 1.0) > 1e-9) {
            std::ostringstream msg;
            msg << "FiniteCmdp: successor probabilities sum to " << total << " for action "
                << spec.action_id << " of state " << num_states();
            throw DomainError(msg.str());
        }
        Choice c;
        c.action_id = spec.action_id;
        c.reward = spec.reward;
        c.cost = spec.cost;
        c.first = transitions_.size();
        c.count = spec.successors.size();
        transitions_.insert(transitions_.end(), spec.successors.begin(), spec.successors.end());
        choices_.push_back(c);
    }
    offsets_.push_back(choices_.size());
    return num_states() - 1;
}

void FiniteCmdp::validate() const
{
    for (const Transition& t : transitions_) {
        if (t.next >= num_states())
            throw DomainError("FiniteCmdp: transition to an unknown state");
    }
}

std::vector<std::size_t> action_ids(const FiniteCmdp& m, const PurePolicy& policy)
{
    check_policy(m, policy);
    std::vector<std::size_t> ids(m.num_states());
    for (std::size_t s = 0; s < m.num_states(); ++s)
        ids[s] = m.choices(s)[policy.choice[s]].action_id;
    return ids;
}

double lagrangian_reward(const FiniteCmdp& m, std::size_t s, std::size_t pos, double beta)
{
    const Choice& c = m.choices(s)[pos];
    return lagrangian_reward(c.reward, c.cost, beta);
}

PurePolicy greedy_policy(const FiniteCmdp& m, double beta, std::span<const double> value)
{
    const double lambda = m.discount();
    PurePolicy policy;
    policy.choice.resize(m.num_states());
    for (std::size_t s = 0; s < m.num_states(); ++s) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        const auto choices = m.choices(s);
        for (std::size_t a = 0; a < choices.size(); ++a) {
            double future = 0.0;
            for (const Transition& t : m.successors(choices[a]))
                future += t.prob * value[t.next];
            const double q = (1.0 - lambda) * lagrangian_reward(choices[a].reward, choices[a].cost, beta) +
                             lambda * future;
            if (q > best) {
                best = q;
                arg = a;
            }
        }
        policy.choice[s] = arg;
    }
    return policy;
}

ValueIterationResult value_iteration(const FiniteCmdp& m, double beta,
                                     const ValueIterationOptions& opts)
{
    if (!(opts.epsilon > 0.0))
        throw DomainError("value_iteration: epsilon must be positive");
    const std::size_t n = m.num_states();
    const double lambda = m.discount();
    const double threshold = lambda > 0.0 ? opts.epsilon * (1.0 - lambda) / (2.0 * lambda)
                                          : std::numeric_limits<double>::infinity();

    ValueIterationResult out;
    std::vector<double> value = opts.initial.empty() ? std::vector<double>(n, 0.0) : opts.initial;
    if (value.size() != n)
        throw DomainError("value_iteration: initial iterate has the wrong size");
    std::vector<double> next(n, 0.0);

    for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        double change = 0.0;
        double scale = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (const Choice& c : m.choices(s)) {
                double future = 0.0;
                for (const Transition& t : m.successors(c))
                    future += t.prob * value[t.next];
                const double q = (1.0 - lambda) * lagrangian_reward(c.reward, c.cost, beta) +
                                 lambda * future;
                best = std::max(best, q);
            }
            next[s] = best;
            change = std::max(change, std::abs(best - value[s]));
            scale = std::max(scale, std::abs(best));
        }
        value.swap(next);
        out.residuals.push_back(change);
        out.sweeps = sweep + 1;
        // the second bound is the floating-point floor for very large beta
        if (change < threshold || change <= 64.0 * std::numeric_limits<double>::epsilon() * scale)
            break;
    }
    out.policy = greedy_policy(m, beta, value);
    out.value = std::move(value);
    return out;
}

StationaryResult stationary_distribution(const FiniteCmdp& m, const PurePolicy& policy,
                                         const StationaryOptions& opts)
{
    check_policy(m, policy);
    const std::size_t n = m.num_states();
    auto step = [&](const std::vector<double>& x, std::vector<double>& y) {
        std::fill(y.begin(), y.end(), 0.0);
        accumulate_step(m, policy, 1.0, x, y);
    };
    StationaryResult out = power_iterate(n, step, opts);
    std::vector<std::vector<std::size_t>> adj(n);
    add_edges(m, policy, adj);
    out.recurrent_classes = count_recurrent_classes(n, adj);
    out.multichain = out.recurrent_classes > 1;
    return out;
}

PolicyEvaluation evaluate_policy(const FiniteCmdp& m, const PurePolicy& policy,
                                 const StationaryOptions& opts)
{
    PolicyEvaluation out;
    out.stationary = stationary_distribution(m, policy, opts);
    for (std::size_t s = 0; s < m.num_states(); ++s) {
        const Choice& c = m.choices(s)[policy.choice[s]];
        out.reward += out.stationary.distribution[s] * c.reward;
        out.cost += out.stationary.distribution[s] * c.cost;
    }
    return out;
}

PolicyEvaluation evaluate_per_block_mixture(const FiniteCmdp& m, const MixedPolicy& mixed,
                                            const StationaryOptions& opts)
{
    check_policy(m, mixed.mu_minus);
    check_policy(m, mixed.mu_plus);
    const double q = mixed.q;
    if (!(q >= 0.0 && q <= 1.0))
        throw DomainError("evaluate_per_block_mixture: q outside [0, 1]");
    const std::size_t n = m.num_states();
    auto step = [&](const std::vector<double>& x, std::vector<double>& y) {
        std::fill(y.begin(), y.end(), 0.0);
        accumulate_step(m, mixed.mu_minus, q, x, y);
        accumulate_step(m, mixed.mu_plus, 1.0 - q, x, y);
    };
    PolicyEvaluation out;
    out.stationary = power_iterate(n, step, opts);
    std::vector<std::vector<std::size_t>> adj(n);
    if (q > 0.0)
        add_edges(m, mixed.mu_minus, adj);
    if (q < 1.0)
        add_edges(m, mixed.mu_plus, adj);
    out.stationary.recurrent_classes = count_recurrent_classes(n, adj);
    out.stationary.multichain = out.stationary.recurrent_classes > 1;
    for (std::size_t s = 0; s < n; ++s) {
        const Choice& lo = m.choices(s)[mixed.mu_minus.choice[s]];
        const Choice& hi = m.choices(s)[mixed.mu_plus.choice[s]];
        const double psi = out.stationary.distribution[s];
        out.reward += psi * (q * lo.reward + (1.0 - q) * hi.reward);
        out.cost += psi * (q * lo.cost + (1.0 - q) * hi.cost);
    }
    return out;
}

MixedPolicy solve_cmdp(const FiniteCmdp& m, double budget, const SolveOptions& opts)
{
    if (!(budget >= 0.0))
        throw DomainError("solve_cmdp: budget must be nonnegative");
    if (!(opts.epsilon_beta > 0.0))
        throw DomainError("solve_cmdp: epsilon_beta must be positive");

    MixedPolicy out;
    auto solve_at = [&](double beta) {
        ValueIterationOptions via;
        via.epsilon = opts.epsilon_via;
        BracketPoint p;
        p.beta = beta;
        p.policy = value_iteration(m, beta, via).policy;
        const PolicyEvaluation eval = evaluate_policy(m, p.policy, opts.stationary);
        p.reward = eval.reward;
        p.cost = eval.cost;
        p.multichain = eval.stationary.multichain;
        ++out.evaluations;
        return p;
    };
    auto note = [&](const std::string& s) {
        if (std::find(out.diagnostics.begin(), out.diagnostics.end(), s) == out.diagnostics.end())
            out.diagnostics.push_back(s);
    };

    BracketPoint lo = solve_at(0.0);
    if (lo.multichain)
        note("multichain policy encountered; averages are Cesaro limits from the uniform start");
    if (lo.cost <= budget) {
        out.mu_minus = lo.policy;
        out.mu_plus = lo.policy;
        out.q = 1.0;
        out.reward_minus = out.reward_plus = out.reward = lo.reward;
        out.cost_minus = out.cost_plus = out.cost = lo.cost;
        return out;
    }

    std::optional<BracketPoint> hi;
    double beta = 1.0;
    for (std::size_t i = 0; i <= opts.max_doublings; ++i, beta *= 2.0) {
        BracketPoint p = solve_at(beta);
        if (p.multichain)
            note("multichain policy encountered; averages are Cesaro limits from the uniform start");
        if (p.cost > lo.cost)
            note("average cost increased with beta during the bracket search");
        if (p.cost <= budget) {
            hi = std::move(p);
            break;
        }
        lo = std::move(p);
    }
    if (!hi) {
        std::ostringstream msg;
        msg << "solve_cmdp: no multiplier up to " << beta / 2.0 << " meets the budget " << budget;
        throw LogicError(msg.str());
    }

    while (hi->beta - lo.beta >= opts.epsilon_beta) {
        const double mid = 0.5 * (lo.beta + hi->beta);
        if (!(mid > lo.beta && mid < hi->beta))
            break;
        BracketPoint p = solve_at(mid);
        if (p.multichain)
            note("multichain policy encountered; averages are Cesaro limits from the uniform start");
        if (p.cost > lo.cost || p.cost < hi->cost)
            note("average cost not monotone in beta along the bisection");
        if (p.cost > budget)
            lo = std::move(p);
        else
            hi = std::move(p);
    }

    // Eth = q E- + (1-q) E+ with E- = E(beta_hi) <= Eth < E+ = E(beta_lo)
    const double q = (lo.cost - budget) / (lo.cost - hi->cost);
    if (!(q >= 0.0 && q <= 1.0)) {
        std::ostringstream msg;
        msg << "solve_cmdp: mixing weight " << q << " outside [0, 1] (E- = " << hi->cost
            << ", E+ = " << lo.cost << ", budget " << budget << ")";
        throw LogicError(msg.str());
    }
    out.constraint_active = true;
    out.q = q;
    out.mu_minus = hi->policy;
    out.mu_plus = lo.policy;
    out.beta_minus = hi->beta;
    out.beta_plus = lo.beta;
    out.reward_minus = hi->reward;
    out.cost_minus = hi->cost;
    out.reward_plus = lo.reward;
    out.cost_plus = lo.cost;
    out.reward = q * hi->reward + (1.0 - q) * lo.reward;
    out.cost = q * hi->cost + (1.0 - q) * lo.cost;
    return out;
}

} // namespace wpcn::cmdp
