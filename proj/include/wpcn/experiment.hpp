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
#include "wpcn/config.hpp"
#include "wpcn/system.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wpcn {

std::shared_ptr<const ChannelModel> build_channel(const ExperimentConfig& config);

/// Builds the model; reuses `channel` when given. Throws ConfigError or ModelError.
WpcnModel build_model(const ExperimentConfig& config,
                      std::shared_ptr<const ChannelModel> channel = nullptr);

/// FNV-1a 64 over the action ids of both bracket policies, then llround(q 1e9).
std::uint64_t policy_fingerprint(const cmdp::FiniteCmdp& m, const cmdp::MixedPolicy& policy);
/// Same hash for a pure policy taken as a mixture with q = 1 of itself.
std::uint64_t policy_fingerprint(const cmdp::FiniteCmdp& m, const cmdp::PurePolicy& policy);
/// FNV-1a 64 over the action ids of both bracket policies only.
std::uint64_t bracket_fingerprint(const cmdp::FiniteCmdp& m, const cmdp::MixedPolicy& policy);

/// One CSV row. NaN marks a field that does not apply.
struct ResultRow {
    std::string param;           ///< swept key, or "point" for a single solve
    double value = 0.0;
    std::string policy;          ///< "optimal" or "myopic"
    double reward_bits = 0.0;    ///< long-run average per block
    double cost_j = 0.0;
    double q = 0.0;
    double beta_minus = 0.0;
    double beta_plus = 0.0;
    std::uint64_t fingerprint = 0;
    int invariance = -1;         ///< C indicator of gap-factor sweeps, -1 if absent
    std::string status = "ok";   ///< "ok" or "error: ..."
};

struct SolveResult {
    std::vector<ResultRow> rows;
    std::optional<cmdp::MixedPolicy> optimal;
    std::optional<cmdp::PurePolicy> myopic;
};

SolveResult run_solve(const ExperimentConfig& config);
SolveResult run_solve(const ExperimentConfig& config, const WpcnModel& model);

/// Solves every sweep point on a worker pool. Rows are ordered by sweep
/// index, then optimal before myopic. Failed points become error rows.
std::vector<ResultRow> run_sweep(const ExperimentConfig& config);

/// 10 log10(a / b).
double ratio_db(double a, double b);

inline constexpr const char* kCsvHeader =
    "param,value,policy,R_bits,E_J,q,beta_minus,beta_plus,fingerprint,C,status";

std::string format_csv(const std::vector<ResultRow>& rows);

struct PlotDataOptions {
    bool timestamp = true;
};

/// Writes `<stem>.csv` and `<stem>.json` (config echo, tool version, RNG,
/// column list, optional timestamp). Throws DomainError on an empty result
/// and IoError with the path on write failures.
void emit_plotdata(const std::vector<ResultRow>& rows, const ExperimentConfig& config,
                   const std::string& stem, const PlotDataOptions& options = {});

} // namespace wpcn
