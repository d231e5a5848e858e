#include "doctest.h"
#include "support.hpp"

#include "wpcn/channel.hpp"
#include "wpcn/error.hpp"

#include <boost/math/distributions/non_central_chi_squared.hpp>

#include <cmath>

using testing::gold;
using namespace wpcn;

namespace {

const RicianFading kDefault{};

double reference_cdf(double theta, const RicianFading& f)
{
    boost::math::non_central_chi_squared dist(2.0, f.varsigma2 / f.varrho2);
    return boost::math::cdf(dist, theta / f.varrho2);
}

} // namespace

TEST_SUITE("channel")
{
    TEST_CASE("fading summary quantities")
    {
        CHECK(kDefault.k_factor() == doctest::Approx(3.0));
        CHECK(kDefault.mean_power() == doctest::Approx(1.0));
        CHECK_THROWS_AS((RicianFading{0.0, 0.75, 1.34}.validate()), DomainError);
        CHECK_THROWS_AS((RicianFading{0.1, -1.0, 1.34}.validate()), DomainError);
        CHECK_THROWS_AS((RicianFading{0.1, 0.75, 0.0}.validate()), DomainError);
    }

    TEST_CASE("density matches the reference and vanishes at infinity")
    {
        CHECK(rician_pdf(1.0, kDefault) == doctest::Approx(gold("pdf_theta1")).epsilon(1e-13));
        CHECK(rician_pdf(0.3, kDefault) == doctest::Approx(gold("pdf_theta0_3")).epsilon(1e-13));
        CHECK(rician_pdf(kInfinity, kDefault) == 0.0);
        CHECK(std::isfinite(rician_pdf(5000.0, kDefault)));
        CHECK_THROWS_AS(rician_pdf(-1.0, kDefault), DomainError);
    }

    TEST_CASE("density reduces to exponential without line of sight")
    {
        const RicianFading rayleigh{0.5, 0.0, 1.0};
        for (double t : {0.0, 0.4, 2.0, 7.5})
            CHECK(rician_pdf(t, rayleigh) == doctest::Approx(std::exp(-t)).epsilon(1e-14));
    }

    TEST_CASE("cdf and survival agree with the noncentral chi-square law")
    {
        for (double t : {0.05, 0.3, 0.8, 1.5, 3.0, 6.0}) {
            CHECK(std::abs(rician_cdf(t, kDefault) - reference_cdf(t, kDefault)) < 1e-10);
            CHECK(std::abs(rician_survival(t, kDefault) - (1.0 - reference_cdf(t, kDefault))) < 1e-10);
        }
        CHECK(rician_cdf(0.0, kDefault) == 0.0);
        CHECK(rician_cdf(kInfinity, kDefault) == 1.0);
    }

    TEST_CASE("tail limit leaves 1e-12 of mass")
    {
        const double x = rician_tail_limit(kDefault);
        CHECK(rician_survival(x, kDefault) == doctest::Approx(1e-12).epsilon(1e-5));
    }

    TEST_CASE("level crossing rate matches reference values")
    {
        const auto b = partition_boundaries(3, kDefault);
        CHECK(level_crossing_rate(b[1], kDefault) == doctest::Approx(gold("lcr_boundary_2")).epsilon(1e-11));
        CHECK(level_crossing_rate(b[2], kDefault) == doctest::Approx(gold("lcr_boundary_3")).epsilon(1e-11));
        CHECK(level_crossing_rate(0.0, kDefault) == 0.0);
        CHECK(level_crossing_rate(kInfinity, kDefault) == 0.0);
    }

    TEST_CASE("partition: K=3 boundaries")
    {
        const auto b = partition_boundaries(3, kDefault);
        REQUIRE(b.size() == 4);
        CHECK(b[0] == 0.0);
        CHECK(b[1] == doctest::Approx(gold("boundary_2")).epsilon(1e-10));
        CHECK(b[2] == doctest::Approx(gold("boundary_3")).epsilon(1e-10));
        CHECK(std::isinf(b[3]));
    }

    TEST_CASE("partition: K=1 is the whole half-line")
    {
        const auto b = partition_boundaries(1, kDefault);
        REQUIRE(b.size() == 2);
        CHECK(b[0] == 0.0);
        CHECK(std::isinf(b[1]));
        CHECK_THROWS_AS(partition_boundaries(0, kDefault), DomainError);
    }

    TEST_CASE("partition: Rayleigh quartiles")
    {
        const auto b = partition_boundaries(4, RicianFading{0.5, 0.0, 1.0});
        CHECK(std::abs(b[1] - gold("rayleigh_quantile_1_of_4")) < 1e-8);
        CHECK(std::abs(b[2] - gold("rayleigh_quantile_2_of_4")) < 1e-8);
        CHECK(std::abs(b[3] - gold("rayleigh_quantile_3_of_4")) < 1e-8);
    }

    TEST_CASE("partition is equiprobable for several K")
    {
        for (std::size_t k : {2u, 3u, 5u, 8u}) {
            const auto b = partition_boundaries(k, kDefault);
            for (std::size_t i = 1; i < k; ++i) {
                CHECK(b[i] > b[i - 1]);
                CHECK(std::abs(reference_cdf(b[i], kDefault) - double(i) / double(k)) < 1e-8);
            }
        }
    }

    TEST_CASE("representative gains are conditional means scaled by path loss")
    {
        const auto b = partition_boundaries(3, kDefault);
        for (std::size_t k = 0; k < 3; ++k) {
            const std::string key = "rep_gain_" + std::to_string(k + 1);
            CHECK(representative_gain(k, 10.0, 2.8, kDefault, b) ==
                  doctest::Approx(gold(key)).epsilon(1e-10));
        }
        CHECK(representative_gain(0, 1.0, 2.8, kDefault, partition_boundaries(1, kDefault)) ==
              doctest::Approx(kDefault.mean_power()).epsilon(1e-10));
        CHECK_THROWS_AS(representative_gain(3, 10.0, 2.8, kDefault, b), DomainError);
    }

    TEST_CASE("transition matrix matches reference and is row-stochastic")
    {
        const auto b = partition_boundaries(3, kDefault);
        const num::Matrix p = transition_matrix(b, kDefault, 0.016);
        for (std::size_t i = 0; i < 3; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < 3; ++j) {
                const std::string key =
                    "transition_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
                CHECK(std::abs(p(i, j) - gold(key)) < 1e-11);
                CHECK(p(i, j) >= 0.0);
                sum += p(i, j);
            }
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
        CHECK(p(0, 2) == 0.0);
        CHECK(p(2, 0) == 0.0);
    }

    TEST_CASE("transition matrix for K=1 and too-long blocks")
    {
        const num::Matrix one = transition_matrix(partition_boundaries(1, kDefault), kDefault, 0.016);
        CHECK(one(0, 0) == 1.0);
        const auto b = partition_boundaries(3, kDefault);
        CHECK_THROWS_AS(transition_matrix(b, kDefault, 1.0), ModelError);
        CHECK_THROWS_AS(transition_matrix(b, kDefault, 0.0), DomainError);
    }

    TEST_CASE("channel model: uniform stationary distribution and consistent tables")
    {
        for (std::size_t k : {1u, 2u, 3u, 6u}) {
            const ChannelModel m = ChannelModel::build(k, kDefault, 0.016, 10.0, 2.8);
            REQUIRE(m.num_states() == k);
            const num::Matrix& p = m.transition();
            for (std::size_t j = 0; j < k; ++j) {
                double flow = 0.0;
                for (std::size_t i = 0; i < k; ++i)
                    flow += p(i, j) / double(k);
                CHECK(std::abs(flow - 1.0 / double(k)) < 1e-12);
                CHECK(m.steady_state()[j] == doctest::Approx(1.0 / double(k)));
            }
            for (std::size_t j = 1; j < k; ++j)
                CHECK(m.gains()[j] > m.gains()[j - 1]);
            for (std::size_t j = 0; j < k; ++j)
                CHECK(m.bin_average(j, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-9));
        }
    }

    TEST_CASE("channel model: bin means average to the mean power")
    {
        const ChannelModel m = ChannelModel::build(3, kDefault, 0.016, 10.0, 2.8);
        double mean = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            const std::string key = "bin_mean_" + std::to_string(k + 1);
            CHECK(m.bin_means()[k] == doctest::Approx(gold(key)).epsilon(1e-10));
            mean += m.bin_means()[k] / 3.0;
        }
        CHECK(mean == doctest::Approx(kDefault.mean_power()).epsilon(1e-10));
        CHECK(m.pathloss() == doctest::Approx(std::pow(10.0, -2.8)));
        CHECK(m.upper_limit(2) == m.tail_limit());
        CHECK_THROWS_AS(m.bin_average(3, [](double t) { return t; }), DomainError);
    }
}
