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

#include "wpcn/config.hpp"
#include "wpcn/error.hpp"
#include "wpcn/experiment.hpp"
#include "wpcn/myopic.hpp"
#include "wpcn/sim.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kModel = 3, kNumerical = 4, kIo = 5 };

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output;
    bool no_timestamp = false;
};

wpcn::ExperimentConfig load(const Common& c)
{
    wpcn::ExperimentConfig config =
        c.config_path.empty() ? wpcn::ExperimentConfig{} : wpcn::load_config(c.config_path);
    for (const std::string& kv : c.overrides)
        config.set_assignment(kv);
    if (!c.output.empty())
        config.output = c.output;
    config.validate();
    return config;
}

void print_rows(const std::vector<wpcn::ResultRow>& rows)
{
    std::printf("%-10s %-12s %-8s %14s %14s %10s %12s %12s  %s\n", "param", "value", "policy",
                "R [bits]", "E [J]", "q", "beta-", "beta+", "status");
    for (const wpcn::ResultRow& r : rows) {
        std::printf("%-10s %-12.6g %-8s %14.6f %14.6e %10.6f %12.6g %12.6g  %s\n", r.param.c_str(),
                    r.value, r.policy.c_str(), r.reward_bits, r.cost_j, r.q, r.beta_minus,
                    r.beta_plus, r.status.c_str());
    }
}

void add_common(CLI::App* app, Common& c)
{
    app->add_option("-c,--config", c.config_path, "key = value configuration file");
    app->add_option("-s,--set", c.overrides, "override a config key (key=value), repeatable");
    app->add_option("-o,--output", c.output, "output path stem");
    app->add_flag("--no-timestamp", c.no_timestamp, "omit the timestamp from the JSON sidecar");
}

int run_solve(const Common& c, wpcn::PolicyKind kind)
{
    wpcn::ExperimentConfig config = load(c);
    if (kind != wpcn::PolicyKind::both)
        config.policy = kind;
    const wpcn::SolveResult result = wpcn::run_solve(config);
    print_rows(result.rows);
    if (result.optimal) {
        for (const std::string& d : result.optimal->diagnostics)
            std::fprintf(stderr, "note: %s\n", d.c_str());
    }
    wpcn::emit_plotdata(result.rows, config, config.output, {!c.no_timestamp});
    std::printf("wrote %s.csv and %s.json\n", config.output.c_str(), config.output.c_str());
    return kOk;
}

int run_sweep(const Common& c)
{
    const wpcn::ExperimentConfig config = load(c);
    if (config.sweep_param.empty())
        throw wpcn::ConfigError("sweep needs sweep_param and sweep_values");
    const std::vector<wpcn::ResultRow> rows = wpcn::run_sweep(config);
    print_rows(rows);
    wpcn::emit_plotdata(rows, config, config.output, {!c.no_timestamp});
    std::printf("wrote %s.csv and %s.json\n", config.output.c_str(), config.output.c_str());
    for (const wpcn::ResultRow& r : rows) {
        if (r.status != "ok")
            return kNumerical;
    }
    return kOk;
}

int run_simulate(const Common& c, std::size_t h0, std::size_t b0, const std::string& trajectory)
{
    const wpcn::ExperimentConfig config = load(c);
    const wpcn::WpcnModel model = wpcn::build_model(config);
    wpcn::sim::RolloutPolicy policy;
    double analytic_reward = 0.0;
    double analytic_cost = 0.0;
    if (config.policy == wpcn::PolicyKind::myopic) {
        policy = wpcn::sim::RolloutPolicy::pure(
            wpcn::myopic_policy(model, model.params().energy_budget_j));
        const auto eval = wpcn::cmdp::evaluate_policy(model.cmdp(), policy.primary);
        analytic_reward = eval.reward;
        analytic_cost = eval.cost;
    } else {
        const auto mixed = wpcn::cmdp::solve_cmdp(model.cmdp(), model.params().energy_budget_j,
                                                  config.solve_options());
        policy = wpcn::sim::RolloutPolicy::mixed(mixed);
        const auto eval = wpcn::cmdp::evaluate_per_block_mixture(model.cmdp(), mixed);
        analytic_reward = eval.reward;
        analytic_cost = eval.cost;
    }
    if (h0 < 1)
        throw wpcn::ConfigError("--h0 is 1-based");
    const wpcn::SystemState s0{h0 - 1, b0};
    const auto summary =
        wpcn::sim::summarize_rollout(model, policy, s0, config.horizon, config.seed);
    std::printf("policy      %s\n", config.policy == wpcn::PolicyKind::myopic ? "myopic" : "optimal");
    std::printf("rng         %s seed %llu, %zu blocks\n", wpcn::sim::kRngName,
                static_cast<unsigned long long>(config.seed), summary.horizon);
    std::printf("reward      %.6f +- %.6f bits/block (analytic %.6f)\n", summary.mean_reward,
                summary.se_reward, analytic_reward);
    std::printf("cost        %.6e +- %.2e J/block (analytic %.6e)\n", summary.mean_cost,
                summary.se_cost, analytic_cost);
    for (std::size_t h = 0; h < summary.channel_occupancy.size(); ++h)
        std::printf("channel %zu   %.5f +- %.5f\n", h + 1, summary.channel_occupancy[h],
                    summary.occupancy_se[h]);
    if (!trajectory.empty()) {
        const auto traj = wpcn::sim::rollout(model, policy, s0, config.horizon, config.seed);
        wpcn::sim::write_trajectory_csv(traj, model, trajectory);
        std::printf("wrote %s\n", trajectory.c_str());
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"wpcn: online transmission policies for wireless-powered communication networks"};
    app.set_version_flag("--version", wpcn::kToolVersion);
    app.require_subcommand(1);

    Common common;
    CLI::App* solve = app.add_subcommand("solve", "solve one operating point");
    add_common(solve, common);
    CLI::App* sweep = app.add_subcommand("sweep", "solve every point of a parameter sweep");
    add_common(sweep, common);
    CLI::App* myopic = app.add_subcommand("myopic", "evaluate the myopic baseline only");
    add_common(myopic, common);
    CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo rollout of the solved policy");
    add_common(simulate, common);
    std::size_t h0 = 1;
    std::size_t b0 = 0;
    std::string trajectory;
    simulate->add_option("--h0", h0, "initial channel state (1-based)");
    simulate->add_option("--b0", b0, "initial battery level");
    simulate->add_option("--trajectory", trajectory, "write the per-block trajectory CSV here");
    CLI::App* show = app.add_subcommand("config", "print the effective configuration");
    add_common(show, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (solve->parsed())
            return run_solve(common, wpcn::PolicyKind::both);
        if (myopic->parsed())
            return run_solve(common, wpcn::PolicyKind::myopic);
        if (sweep->parsed())
            return run_sweep(common);
        if (simulate->parsed())
            return run_simulate(common, h0, b0, trajectory);
        if (show->parsed()) {
            std::cout << wpcn::serialize_config(load(common));
            return kOk;
        }
    } catch (const wpcn::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    } catch (const wpcn::ModelError& e) {
        std::fprintf(stderr, "model error: %s\n", e.what());
        return kModel;
    } catch (const wpcn::DomainError& e) {
        std::fprintf(stderr, "model error: %s\n", e.what());
        return kModel;
    } catch (const wpcn::NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return kNumerical;
    } catch (const wpcn::IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kOther;
    }
    return kOther;
}
