#include "doctest.h"
#include "oracles.hpp"

#include "wpcn/cmdp.hpp"
#include "wpcn/error.hpp"

#include <cmath>
#include <random>

using namespace wpcn::cmdp;
using testing::enumerated_optimum;
using testing::exact_stationary;
using testing::exact_value;

namespace {

FiniteCmdp two_state_chain(double a, double b, double discount = 0.9)
{
    FiniteCmdp m(discount);
    m.add_state(std::vector<ChoiceSpec>{{0, 1.0, 0.5, {{0, 1.0 - a}, {1, a}}}});
    m.add_state(std::vector<ChoiceSpec>{{0, 3.0, 2.0, {{0, b}, {1, 1.0 - b}}}});
    return m;
}

FiniteCmdp identity_chain(std::size_t n)
{
    FiniteCmdp m;
    for (std::size_t s = 0; s < n; ++s)
        m.add_state(std::vector<ChoiceSpec>{{0, double(s), 0.0, {{s, 1.0}}}});
    return m;
}

PurePolicy zeros(const FiniteCmdp& m)
{
    return PurePolicy{std::vector<std::size_t>(m.num_states(), 0)};
}

} // namespace

TEST_SUITE("cmdp")
{
    TEST_CASE("model construction checks rows")
    {
        FiniteCmdp m;
        CHECK_THROWS_AS(m.add_state(std::vector<ChoiceSpec>{}), wpcn::DomainError);
        CHECK_THROWS_AS(m.add_state(std::vector<ChoiceSpec>{{0, 0.0, 0.0, {{0, 0.7}}}}),
                        wpcn::DomainError);
        CHECK_THROWS_AS(m.add_state(std::vector<ChoiceSpec>{{0, 0.0, 0.0, {{0, 1.5}, {0, -0.5}}}}),
                        wpcn::DomainError);
        m.add_state(std::vector<ChoiceSpec>{{0, 0.0, 0.0, {{3, 1.0}}}});
        CHECK_THROWS_AS(m.validate(), wpcn::DomainError);
        CHECK_THROWS_AS(FiniteCmdp(1.0), wpcn::DomainError);
    }

    TEST_CASE("stationary distribution of a two-state chain")
    {
        const FiniteCmdp m = two_state_chain(0.2, 0.05);
        const auto st = stationary_distribution(m, zeros(m));
        CHECK(st.distribution[0] == doctest::Approx(0.05 / 0.25).epsilon(1e-10));
        CHECK(st.distribution[1] == doctest::Approx(0.2 / 0.25).epsilon(1e-10));
        CHECK(st.recurrent_classes == 1);
        CHECK_FALSE(st.multichain);
        const auto ev = evaluate_policy(m, zeros(m));
        CHECK(ev.reward == doctest::Approx(0.2 * 1.0 + 0.8 * 3.0).epsilon(1e-10));
        CHECK(ev.cost == doctest::Approx(0.2 * 0.5 + 0.8 * 2.0).epsilon(1e-10));
    }

    TEST_CASE("stationary distribution of a periodic chain")
    {
        const FiniteCmdp m = two_state_chain(1.0, 1.0);
        const auto st = stationary_distribution(m, zeros(m));
        CHECK(st.distribution[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(st.residual <= 1e-12);
    }

    TEST_CASE("identity kernel is flagged multichain")
    {
        const FiniteCmdp m = identity_chain(4);
        const auto st = stationary_distribution(m, zeros(m));
        CHECK(st.multichain);
        CHECK(st.recurrent_classes == 4);
        for (double x : st.distribution)
            CHECK(x == doctest::Approx(0.25));
    }

    TEST_CASE("stationary distribution matches a direct linear solve")
    {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 20; ++trial) {
            const FiniteCmdp m = testing::random_cmdp(rng, 8, 3);
            const PurePolicy p = zeros(m);
            const auto st = stationary_distribution(m, p);
            if (st.multichain)
                continue;
            const auto ref = exact_stationary(m, p);
            for (std::size_t s = 0; s < m.num_states(); ++s)
                CHECK(std::abs(st.distribution[s] - ref(Eigen::Index(s))) < 1e-9);
        }
    }

    TEST_CASE("value iteration: constant reward fixed point")
    {
        FiniteCmdp m(0.9);
        m.add_state(std::vector<ChoiceSpec>{{0, 2.0, 0.0, {{0, 1.0}}}});
        const auto vi = value_iteration(m, 0.0, {1e-12, 100000, {}});
        CHECK(vi.value[0] == doctest::Approx(2.0).epsilon(1e-11));
        for (std::size_t i = 1; i < vi.residuals.size(); ++i)
            CHECK(vi.residuals[i] <= 0.9 * vi.residuals[i - 1] + 4.0 * 2.2e-16 * 2.0);
    }

    TEST_CASE("value iteration: two-state closed form")
    {
        const FiniteCmdp m = two_state_chain(0.3, 0.6, 0.8);
        const auto vi = value_iteration(m, 0.5, {1e-12, 100000, {}});
        const auto ref = exact_value(m, zeros(m), 0.5);
        CHECK(vi.value[0] == doctest::Approx(ref(0)).epsilon(1e-10));
        CHECK(vi.value[1] == doctest::Approx(ref(1)).epsilon(1e-10));
    }

    TEST_CASE("value iteration: ties go to the lowest choice")
    {
        FiniteCmdp m(0.9);
        m.add_state(std::vector<ChoiceSpec>{{5, 1.0, 0.0, {{0, 1.0}}}, {6, 1.0, 0.0, {{0, 1.0}}}});
        const auto vi = value_iteration(m, 0.0);
        CHECK(vi.policy.choice[0] == 0);
        CHECK(action_ids(m, vi.policy)[0] == 5);
    }

    TEST_CASE("value iteration: greedy policy matches exhaustive enumeration")
    {
        std::mt19937_64 rng(42);
        for (int trial = 0; trial < 25; ++trial) {
            const FiniteCmdp m = testing::random_cmdp(rng, 6, 4);
            const double beta = std::uniform_real_distribution<double>(0.0, 5.0)(rng);
            const auto vi = value_iteration(m, beta);
            const auto best = enumerated_optimum(m, beta);
            const auto got = exact_value(m, vi.policy, beta);
            for (std::size_t s = 0; s < m.num_states(); ++s) {
                CHECK(best(Eigen::Index(s)) - got(Eigen::Index(s)) <= 1e-6);
                CHECK(std::abs(vi.value[s] - best(Eigen::Index(s))) <= 1e-8);
            }
        }
    }

    TEST_CASE("value is nonincreasing in beta")
    {
        std::mt19937_64 rng(3);
        const FiniteCmdp m = testing::random_cmdp(rng, 8, 4);
        std::vector<double> prev;
        for (double beta = 0.0; beta <= 10.0; beta += 0.5) {
            const auto vi = value_iteration(m, beta);
            if (!prev.empty()) {
                for (std::size_t s = 0; s < m.num_states(); ++s)
                    CHECK(vi.value[s] <= prev[s] + 1e-9);
            }
            prev = vi.value;
        }
    }

    TEST_CASE("solve: slack budget returns the unconstrained policy")
    {
        const FiniteCmdp m = two_state_chain(0.2, 0.05);
        const auto sol = solve_cmdp(m, 100.0);
        CHECK(sol.q == 1.0);
        CHECK_FALSE(sol.constraint_active);
        CHECK(sol.mu_minus == sol.mu_plus);
        CHECK(sol.beta_minus == 0.0);
        CHECK(sol.cost < 100.0);
        CHECK(sol.evaluations == 1);
    }

    TEST_CASE("solve: binding budget is met with equality")
    {
        std::mt19937_64 rng(11);
        int binding = 0;
        for (int trial = 0; trial < 30; ++trial) {
            const FiniteCmdp m = testing::random_cmdp(rng, 8, 4);
            const auto free = solve_cmdp(m, 1e9);
            const double budget = 0.6 * free.cost;
            MixedPolicy sol;
            try {
                sol = solve_cmdp(m, budget);
            } catch (const wpcn::LogicError&) {
                continue; // every policy exceeds this budget
            }
            if (!sol.constraint_active)
                continue;
            ++binding;
            CHECK(sol.q >= 0.0);
            CHECK(sol.q <= 1.0);
            CHECK(sol.cost == doctest::Approx(budget).epsilon(1e-12));
            CHECK(sol.cost_minus <= budget);
            CHECK(sol.cost_plus > budget);
            CHECK(sol.beta_plus <= sol.beta_minus);
            CHECK(sol.beta_minus - sol.beta_plus < 1e-4);
            CHECK(sol.reward <= free.reward + 1e-9);
            const auto eval_minus = evaluate_policy(m, sol.mu_minus);
            CHECK(eval_minus.cost == doctest::Approx(sol.cost_minus).epsilon(1e-12));
        }
        CHECK(binding >= 10);
    }

    TEST_CASE("solve: infeasible budget is a logic error")
    {
        FiniteCmdp m(0.9);
        m.add_state(std::vector<ChoiceSpec>{{0, 1.0, 1.0, {{0, 1.0}}}});
        SolveOptions o;
        o.max_doublings = 5;
        CHECK_THROWS_AS(solve_cmdp(m, 0.5, o), wpcn::LogicError);
        CHECK_THROWS_AS(solve_cmdp(m, -1.0), wpcn::DomainError);
    }

    TEST_CASE("solve: tiny wireless instance against a dense multiplier grid")
    {
        const wpcn::WpcnModel model = testing::tiny_wpcn();
        const FiniteCmdp& m = model.cmdp();
        const double budget = model.params().energy_budget_j;
        const auto sol = solve_cmdp(m, budget);
        REQUIRE(sol.constraint_active);
        CHECK(std::abs(sol.cost - budget) < 1e-9 * budget);

        // best two-point mixture over policies found on a dense grid
        const double top = 2.0 * sol.beta_minus;
        double best = -1.0;
        double prev_cost = 0.0, prev_reward = 0.0;
        bool have_prev = false;
        for (int i = 0; i <= 4000; ++i) {
            const double beta = top * (4000 - i) / 4000.0; // descending: cost grows
            const auto ev = evaluate_policy(m, value_iteration(m, beta).policy);
            if (ev.cost <= budget)
                best = std::max(best, ev.reward);
            if (have_prev && prev_cost <= budget && ev.cost > budget) {
                const double q = (ev.cost - budget) / (ev.cost - prev_cost);
                best = std::max(best, q * prev_reward + (1.0 - q) * ev.reward);
            }
            prev_cost = ev.cost;
            prev_reward = ev.reward;
            have_prev = true;
        }
        CHECK(sol.reward == doctest::Approx(best).epsilon(1e-9));
    }

    TEST_CASE("solve: tiny wireless instance matches enumeration for the Lagrangian")
    {
        const wpcn::WpcnModel model = testing::tiny_wpcn();
        const FiniteCmdp& m = model.cmdp();
        for (double beta : {0.0, 1e3, 1e4, 5e4, 1e5}) {
            const auto vi = value_iteration(m, beta);
            const auto best = enumerated_optimum(m, beta);
            const auto got = exact_value(m, vi.policy, beta);
            for (std::size_t s = 0; s < m.num_states(); ++s)
                CHECK(best(Eigen::Index(s)) - got(Eigen::Index(s)) <= 1e-6);
        }
    }

    TEST_CASE("per-block mixture evaluation reduces to the pure policies at q = 0, 1")
    {
        const wpcn::WpcnModel model = testing::tiny_wpcn();
        const FiniteCmdp& m = model.cmdp();
        auto sol = solve_cmdp(m, model.params().energy_budget_j);
        const auto minus = evaluate_policy(m, sol.mu_minus);
        const auto plus = evaluate_policy(m, sol.mu_plus);
        sol.q = 1.0;
        CHECK(evaluate_per_block_mixture(m, sol).reward == doctest::Approx(minus.reward).epsilon(1e-10));
        sol.q = 0.0;
        CHECK(evaluate_per_block_mixture(m, sol).cost == doctest::Approx(plus.cost).epsilon(1e-10));
        sol.q = 1.5;
        CHECK_THROWS_AS(evaluate_per_block_mixture(m, sol), wpcn::DomainError);
    }

    TEST_CASE("policy checks")
    {
        const FiniteCmdp m = two_state_chain(0.2, 0.05);
        CHECK_THROWS_AS(evaluate_policy(m, PurePolicy{{0}}), wpcn::DomainError);
        CHECK_THROWS_AS(evaluate_policy(m, PurePolicy{{0, 1}}), wpcn::DomainError);
        CHECK(lagrangian_reward(m, 1, 0, 2.0) == doctest::Approx(3.0 - 4.0));
    }
}
