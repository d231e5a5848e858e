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

#include "wpcn/experiment.hpp"

#include "wpcn/error.hpp"
#include "wpcn/myopic.hpp"
#include "wpcn/sim.hpp"

#include "json.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace wpcn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t& hash, std::uint64_t word)
{
    for (int i = 0; i < 8; ++i) {
        hash ^= (word >> (8 * i)) & 0xFFu;
        hash *= kFnvPrime;
    }
}

void fnv_policy(std::uint64_t& hash, const cmdp::FiniteCmdp& m, const cmdp::PurePolicy& p)
{
    for (std::size_t id : cmdp::action_ids(m, p))
        fnv_mix(hash, static_cast<std::uint64_t>(id));
}

std::uint64_t hash_mixture(const cmdp::FiniteCmdp& m, const cmdp::PurePolicy& minus,
                           const cmdp::PurePolicy& plus, double q)
{
    std::uint64_t hash = kFnvOffset;
    fnv_policy(hash, m, minus);
    fnv_policy(hash, m, plus);
    fnv_mix(hash, static_cast<std::uint64_t>(std::llround(q * 1e9)));
    return hash;
}

std::string format_number(double v)
{
    if (std::isnan(v))
        return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_safe(std::string s)
{
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r' || c == '"')
            c = ';';
    }
    return s;
}

ResultRow error_row(const std::string& param, double value, const std::string& policy,
                    const std::string& message)
{
    ResultRow r;
    r.param = param;
    r.value = value;
    r.policy = policy;
    r.reward_bits = r.cost_j = r.q = r.beta_minus = r.beta_plus = kNaN;
    r.status = "error: " + message;
    return r;
}

struct PointOutcome {
    std::vector<ResultRow> rows;
    std::optional<std::uint64_t> bracket;
};

PointOutcome solve_point(const ExperimentConfig& config, const std::string& param, double value,
                         std::shared_ptr<const ChannelModel> channel)
{
    PointOutcome out;
    try {
        const WpcnModel model = build_model(config, std::move(channel));
        SolveResult solved = run_solve(config, model);
        for (ResultRow& r : solved.rows) {
            r.param = param;
            r.value = value;
        }
        if (solved.optimal)
            out.bracket = bracket_fingerprint(model.cmdp(), *solved.optimal);
        out.rows = std::move(solved.rows);
    } catch (const std::exception& e) {
        if (config.policy != PolicyKind::myopic)
            out.rows.push_back(error_row(param, value, "optimal", e.what()));
        if (config.policy != PolicyKind::optimal)
            out.rows.push_back(error_row(param, value, "myopic", e.what()));
    }
    return out;
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out)
        throw IoError("failed writing: " + path);
}

} // namespace

std::shared_ptr<const ChannelModel> build_channel(const ExperimentConfig& config)
{
    config.validate();
    try {
        return std::make_shared<const ChannelModel>(
            ChannelModel::build(config.K, config.fading(), config.T, config.d, config.alpha));
    } catch (const DomainError& e) {
        throw ModelError(std::string("channel construction: ") + e.what());
    }
}

WpcnModel build_model(const ExperimentConfig& config, std::shared_ptr<const ChannelModel> channel)
{
    config.validate();
    if (!channel)
        channel = build_channel(config);
    const SystemParams params = config.system_params();
    return WpcnModel(params, std::move(channel), ActionGrid::uniform(params, config.grid_levels()));
}

std::uint64_t policy_fingerprint(const cmdp::FiniteCmdp& m, const cmdp::MixedPolicy& policy)
{
    return hash_mixture(m, policy.mu_minus, policy.mu_plus, policy.q);
}

std::uint64_t policy_fingerprint(const cmdp::FiniteCmdp& m, const cmdp::PurePolicy& policy)
{
    return hash_mixture(m, policy, policy, 1.0);
}

std::uint64_t bracket_fingerprint(const cmdp::FiniteCmdp& m, const cmdp::MixedPolicy& policy)
{
    std::uint64_t hash = kFnvOffset;
    fnv_policy(hash, m, policy.mu_minus);
    fnv_policy(hash, m, policy.mu_plus);
    return hash;
}

SolveResult run_solve(const ExperimentConfig& config)
{
    const WpcnModel model = build_model(config);
    return run_solve(config, model);
}

SolveResult run_solve(const ExperimentConfig& config, const WpcnModel& model)
{
    SolveResult out;
    const double budget = model.params().energy_budget_j;
    const cmdp::FiniteCmdp& m = model.cmdp();
    if (config.policy != PolicyKind::myopic) {
        cmdp::MixedPolicy mixed = cmdp::solve_cmdp(m, budget, config.solve_options());
        ResultRow r;
        r.param = "point";
        r.value = config.Eth_ref;
        r.policy = "optimal";
        r.reward_bits = mixed.reward;
        r.cost_j = mixed.cost;
        r.q = mixed.q;
        r.beta_minus = mixed.beta_minus;
        r.beta_plus = mixed.beta_plus;
        r.fingerprint = policy_fingerprint(m, mixed);
        out.rows.push_back(r);
        out.optimal = std::move(mixed);
    }
    if (config.policy != PolicyKind::optimal) {
        cmdp::PurePolicy policy = myopic_policy(model, budget);
        const cmdp::PolicyEvaluation eval = cmdp::evaluate_policy(m, policy);
        ResultRow r;
        r.param = "point";
        r.value = config.Eth_ref;
        r.policy = "myopic";
        r.reward_bits = eval.reward;
        r.cost_j = eval.cost;
        r.q = 1.0;
        r.beta_minus = r.beta_plus = kNaN;
        r.fingerprint = policy_fingerprint(m, policy);
        out.rows.push_back(r);
        out.myopic = std::move(policy);
    }
    return out;
}

std::vector<ResultRow> run_sweep(const ExperimentConfig& config)
{
    config.validate();
    if (config.sweep_param.empty())
        throw ConfigError("sweep: no sweep_param declared");
    const std::string& key = config.sweep_param;
    const bool zeta_sweep = key == "zeta";

    std::vector<double> values = config.sweep_values;
    std::size_t reference = values.size();
    if (zeta_sweep) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i] == 1.0) {
                reference = i;
                break;
            }
        }
        if (reference == values.size())
            values.push_back(1.0); // extra reference point, not reported
    }

    std::shared_ptr<const ChannelModel> shared_channel;
    if (!affects_channel(key)) {
        try {
            shared_channel = build_channel(config);
        } catch (const ModelError&) {
            // every point fails the same way and records it
        }
    }

    std::vector<PointOutcome> outcomes(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            ExperimentConfig point = config;
            try {
                set_numeric(point, key, values[i]);
            } catch (const std::exception& e) {
                outcomes[i].rows.push_back(error_row(key, values[i], "optimal", e.what()));
                continue;
            }
            outcomes[i] = solve_point(point, key, values[i],
                                      affects_channel(key) ? nullptr : shared_channel);
        }
    };
    std::size_t threads = config.threads ? config.threads : std::thread::hardware_concurrency();
    threads = std::max<std::size_t>(1, std::min(threads, values.size()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool)
        t.join();

    std::vector<ResultRow> rows;
    const std::size_t reported = config.sweep_values.size();
    std::optional<std::uint64_t> ref;
    if (zeta_sweep)
        ref = outcomes[reference == reported ? values.size() - 1 : reference].bracket;
    const bool has_ref = ref.has_value();
    const std::uint64_t ref_value = ref.value_or(0);
    for (std::size_t i = 0; i < reported; ++i) {
        for (ResultRow& r : outcomes[i].rows) {
            if (has_ref && r.policy == "optimal" && r.status == "ok" && outcomes[i].bracket)
                r.invariance = outcomes[i].bracket.value_or(0) == ref_value ? 1 : 0;
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

double ratio_db(double a, double b)
{
    return 10.0 * std::log10(a / b);
}

std::string format_csv(const std::vector<ResultRow>& rows)
{
    std::ostringstream out;
    out << kCsvHeader << '\n';
    char hex[32];
    for (const ResultRow& r : rows) {
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(r.fingerprint));
        out << csv_safe(r.param) << ',' << format_number(r.value) << ',' << csv_safe(r.policy)
            << ',' << format_number(r.reward_bits) << ',' << format_number(r.cost_j) << ','
            << format_number(r.q) << ',' << format_number(r.beta_minus) << ','
            << format_number(r.beta_plus) << ',' << (r.status == "ok" ? hex : "") << ','
            << (r.invariance >= 0 ? std::to_string(r.invariance) : "") << ','
            << csv_safe(r.status) << '\n';
    }
    return out.str();
}

void emit_plotdata(const std::vector<ResultRow>& rows, const ExperimentConfig& config,
                   const std::string& stem, const PlotDataOptions& options)
{
    if (rows.empty())
        throw DomainError("emit_plotdata: refusing to write an empty result");
    write_file(stem + ".csv", format_csv(rows));

    nlohmann::ordered_json meta;
    meta["tool"] = "wpcn";
    meta["version"] = kToolVersion;
    meta["rng"] = sim::kRngName;
    meta["rows"] = rows.size();
    nlohmann::ordered_json columns = nlohmann::ordered_json::array();
    std::stringstream header(kCsvHeader);
    for (std::string col; std::getline(header, col, ',');)
        columns.push_back(col);
    meta["columns"] = columns;
    nlohmann::ordered_json echo;
    std::istringstream text(serialize_config(config));
    for (std::string line; std::getline(text, line);) {
        const auto eq = line.find(" = ");
        if (eq != std::string::npos)
            echo[line.substr(0, eq)] = line.substr(eq + 3);
    }
    meta["config"] = echo;
    if (options.timestamp)
        meta["generated_utc"] = utc_timestamp();
    write_file(stem + ".json", meta.dump(2) + "\n");
}

} // namespace wpcn
