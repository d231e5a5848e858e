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

#include "wpcn/myopic.hpp"

#include "wpcn/error.hpp"

#include <optional>

namespace wpcn {

cmdp::PurePolicy myopic_policy(const WpcnModel& model, double budget_j)
{
    if (!(budget_j >= 0.0))
        throw DomainError("myopic_policy: budget must be nonnegative");
    const cmdp::FiniteCmdp& m = model.cmdp();
    cmdp::PurePolicy policy;
    policy.choice.resize(m.num_states());
    for (std::size_t s = 0; s < m.num_states(); ++s) {
        const auto choices = m.choices(s);
        std::optional<std::size_t> best;
        for (std::size_t pos = 0; pos < choices.size(); ++pos) {
            const cmdp::Choice& c = choices[pos];
            if (c.cost > budget_j)
                continue;
            if (!best) {
                best = pos;
                continue;
            }
            const cmdp::Choice& b = choices[*best];
            if (c.reward > b.reward ||
                (c.reward == b.reward &&
                 model.net_battery_energy(s, pos) > model.net_battery_energy(s, *best)))
                best = pos;
        }
        if (!best)
            throw LogicError("myopic_policy: no action within the budget (missing zero action?)");
        policy.choice[s] = *best;
    }
    return policy;
}

} // namespace wpcn
