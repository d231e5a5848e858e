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

namespace wpcn {

/// Per-state argmax of the immediate reward among feasible actions whose
/// per-block cost does not exceed `budget_j`. Ties go to the larger net
/// battery gain, then to the lowest action index. The zero action keeps the
/// candidate set nonempty. Throws DomainError for a negative budget.
cmdp::PurePolicy myopic_policy(const WpcnModel& model, double budget_j);

} // namespace wpcn
