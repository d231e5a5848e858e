#include "doctest.h"
#include "oracles.hpp"

#include "wpcn/error.hpp"
#include "wpcn/myopic.hpp"
#include "wpcn/sim.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace wpcn;

namespace {

WpcnModel single_state_model()
{
    SystemParams p;
    auto channel = std::make_shared<const ChannelModel>(
        ChannelModel::build(1, RicianFading{}, p.block_s, p.distance_m, p.pathloss_exponent));
    const double pi = 0.9 * (p.quantum_j - p.pc_u * 0.002) / 0.002;
    // below full: harvest one quantum and spend it, battery stays put
    auto grid = ActionGrid::from_actions({{}, {0.002, 0.002, 10.0, pi}});
    return WpcnModel(p, channel, grid);
}

} // namespace

TEST_SUITE("sim")
{
    TEST_CASE("single channel state and single action is deterministic")
    {
        const WpcnModel model = single_state_model();
        cmdp::PurePolicy p{std::vector<std::size_t>(model.num_states(), 0)};
        const std::size_t nine = model.state_index({0, 9});
        p.choice[nine] = 1;
        const auto traj = sim::rollout(model, sim::RolloutPolicy::pure(p), {0, 9}, 50, 9);
        REQUIRE(traj.records.size() == 50);
        for (const auto& r : traj.records) {
            CHECK(r.state == SystemState{0, 9});
            CHECK(r.reward == traj.records[0].reward);
            CHECK(r.reward > 0.0);
        }
    }

    TEST_CASE("horizon 1 returns the immediate reward")
    {
        const WpcnModel model = testing::tiny_wpcn();
        const auto p = myopic_policy(model, 1.0);
        const SystemState s0{1, 2};
        const auto traj = sim::rollout(model, sim::RolloutPolicy::pure(p), s0, 1, 5);
        REQUIRE(traj.records.size() == 1);
        const std::size_t s = model.state_index(s0);
        CHECK(traj.records[0].reward == model.cmdp().choices(s)[p.choice[s]].reward);
        CHECK(traj.records[0].t == 1);
        CHECK_THROWS_AS(sim::rollout(model, sim::RolloutPolicy::pure(p), s0, 0, 5), DomainError);
        CHECK_THROWS_AS(sim::rollout(model, sim::RolloutPolicy::pure(p), {2, 0}, 1, 5), DomainError);
    }

    TEST_CASE("identical seeds give identical trajectories")
    {
        const WpcnModel model = testing::tiny_wpcn();
        const auto sol = cmdp::solve_cmdp(model.cmdp(), model.params().energy_budget_j);
        const auto policy = sim::RolloutPolicy::mixed(sol);
        const auto a = sim::rollout(model, policy, {0, 0}, 5000, 123);
        const auto b = sim::rollout(model, policy, {0, 0}, 5000, 123);
        const auto c = sim::rollout(model, policy, {0, 0}, 5000, 124);
        bool same = true, differs = false;
        for (std::size_t i = 0; i < 5000; ++i) {
            same = same && a.records[i].state == b.records[i].state &&
                   a.records[i].action_id == b.records[i].action_id;
            differs = differs || !(a.records[i].state == c.records[i].state);
        }
        CHECK(same);
        CHECK(differs);
        const auto summary = sim::summarize_rollout(model, policy, {0, 0}, 5000, 123);
        double mean = 0.0;
        for (const auto& r : a.records)
            mean += r.reward;
        CHECK(summary.mean_reward == doctest::Approx(mean / 5000.0).epsilon(1e-12));
    }

    TEST_CASE("trajectories follow the kernel support")
    {
        const WpcnModel model = testing::tiny_wpcn();
        const auto p = myopic_policy(model, 1e6 * model.params().reference_energy_j());
        const auto traj = sim::rollout(model, sim::RolloutPolicy::pure(p), {0, 0}, 2000, 1);
        for (std::size_t i = 0; i + 1 < traj.records.size(); ++i) {
            const std::size_t s = model.state_index(traj.records[i].state);
            const auto& c = model.cmdp().choices(s)[traj.records[i].choice];
            CHECK(traj.records[i].cost == c.cost);
            bool found = false;
            for (const auto& t : model.cmdp().successors(c))
                found = found || (t.next == model.state_index(traj.records[i + 1].state) && t.prob > 0.0);
            CHECK(found);
        }
    }

    TEST_CASE("long rollout agrees with analytic evaluation")
    {
        const WpcnModel model = testing::tiny_wpcn();
        const auto sol = cmdp::solve_cmdp(model.cmdp(), model.params().energy_budget_j);
        const auto ev = cmdp::evaluate_policy(model.cmdp(), sol.mu_plus);
        const auto sum = sim::summarize_rollout(model, sim::RolloutPolicy::pure(sol.mu_plus), {0, 0},
                                                400000, 77);
        CHECK(std::abs(sum.mean_reward - ev.reward) <= 3.0 * sum.se_reward + 1e-12);
        CHECK(std::abs(sum.mean_cost - ev.cost) <= 3.0 * sum.se_cost + 1e-15);
        double tv = 0.0;
        for (std::size_t s = 0; s < model.num_states(); ++s)
            tv += 0.5 * std::abs(sum.state_frequency[s] - ev.stationary.distribution[s]);
        CHECK(tv <= 0.01);
        for (std::size_t h = 0; h < 2; ++h)
            CHECK(std::abs(sum.channel_occupancy[h] - 0.5) <= 3.0 * sum.occupancy_se[h]);
    }

    TEST_CASE("discounted estimate: geometric sums")
    {
        sim::Trajectory t;
        for (std::size_t i = 1; i <= 2000; ++i)
            t.records.push_back({i, {}, 0, 0, 3.0, 0.5});
        const auto e = sim::discounted_estimate(t, 0.9);
        CHECK(e.reward == doctest::Approx(0.9 * 3.0).epsilon(1e-12));
        CHECK(e.cost == doctest::Approx(0.9 * 0.5).epsilon(1e-12));
        sim::Trajectory one;
        one.records.push_back({1, {}, 0, 0, 2.0, 1.0});
        const auto e1 = sim::discounted_estimate(one, 0.9);
        CHECK(e1.reward == doctest::Approx(0.1 * 0.9 * 2.0).epsilon(1e-14));
        CHECK(e1.reward_truncation == doctest::Approx(0.81 * 2.0).epsilon(1e-14));
        CHECK_THROWS_AS(sim::discounted_estimate(one, 1.0), DomainError);
    }

    TEST_CASE("discounted estimate: deterministic two-state cycle")
    {
        // rewards alternate r1, r2, r1, ... starting at t = 1
        const double r1 = 5.0, r2 = 1.0, lambda = 0.9;
        sim::Trajectory t;
        for (std::size_t i = 1; i <= 500; ++i)
            t.records.push_back({i, {}, 0, 0, i % 2 ? r1 : r2, 0.0});
        // (1-l) sum_{t>=1} l^t r_t = (1-l) (l r1 + l^2 r2) / (1 - l^2)
        const double exact = (1.0 - lambda) * (lambda * r1 + lambda * lambda * r2) / (1.0 - lambda * lambda);
        const auto e = sim::discounted_estimate(t, lambda);
        CHECK(std::abs(e.reward - exact) <= e.reward_truncation + 1e-12);
    }

    TEST_CASE("trajectory CSV")
    {
        const WpcnModel model = testing::tiny_wpcn();
        const auto p = myopic_policy(model, 1e6 * model.params().reference_energy_j());
        const auto traj = sim::rollout(model, sim::RolloutPolicy::pure(p), {1, 0}, 3, 1);
        const std::string path = "wpcn_test_traj.csv";
        sim::write_trajectory_csv(traj, model, path);
        std::ifstream in(path);
        std::string header, row;
        std::getline(in, header);
        std::getline(in, row);
        CHECK(header == "t,h,b,tauE,tauI,PE,PI,reward_bits,cost_J");
        CHECK(row.rfind("1,2,0,", 0) == 0);
        std::remove(path.c_str());
        CHECK_THROWS_AS(sim::write_trajectory_csv(traj, model, "/nonexistent/dir/x.csv"), IoError);
    }
}
