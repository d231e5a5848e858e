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

#include "wpcn/channel.hpp"

#include "wpcn/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace wpcn {

namespace {

constexpr double kCdfTolerance = 1e-10;      // absolute, in probability
constexpr double kInversionTolerance = 1e-11; // |CDF(x) - p| at which bisection stops
constexpr double kTailMass = 1e-12;

// Beyond this point the density is negligible (< 1e-40 / x) and decreasing.
double negligible_density_point(const RicianFading& fading)
{
    double x = 2.0 * fading.mean_power() + 1.0;
    for (int i = 0; i < 200; ++i) {
        if (rician_pdf(x, fading) * x < 1e-40)
            return x;
        x *= 2.0;
    }
    throw NumericalError("rician: failed to locate the end of the density support");
}

double check_probability(double p, const char* what)
{
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream msg;
        msg << what << ": probability " << p << " outside (0, 1)";
        throw DomainError(msg.str());
    }
    return p;
}

// Smallest x with CDF(x) = p, by bisection on an expanding bracket.
double invert_cdf(double p, const RicianFading& fading)
{
    check_probability(p, "invert_cdf");
    double lo = 0.0;
    double hi = fading.mean_power();
    double cdf_hi = rician_cdf(hi, fading);
    for (int i = 0; cdf_hi < p; ++i) {
        if (i > 200)
            throw NumericalError("invert_cdf: could not bracket the quantile");
        lo = hi;
        hi *= 2.0;
        cdf_hi = rician_cdf(hi, fading);
    }
    double best = 0.5 * (lo + hi);
    double best_gap = kInfinity;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double gap = rician_cdf(mid, fading) - p;
        if (std::abs(gap) < best_gap) {
            best = mid;
            best_gap = std::abs(gap);
        }
        if (std::abs(gap) <= kInversionTolerance)
            return mid;
        if (gap < 0.0)
            lo = mid;
        else
            hi = mid;
        if (!(mid > lo || mid < hi) || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi)
            break;
    }
    if (best_gap <= kCdfTolerance)
        return best;
    std::ostringstream msg;
    msg.precision(17);
    msg << "invert_cdf: no convergence for p=" << p << ", bracket [" << lo << ", " << hi
        << "], residual " << best_gap;
    throw NumericalError(msg.str());
}

} // namespace

void RicianFading::validate() const
{
    if (!(varrho2 > 0.0) || !std::isfinite(varrho2))
        throw DomainError("RicianFading: varrho2 must be positive");
    if (!(varsigma2 >= 0.0) || !std::isfinite(varsigma2))
        throw DomainError("RicianFading: varsigma2 must be nonnegative");
    if (!(doppler_hz > 0.0) || !std::isfinite(doppler_hz))
        throw DomainError("RicianFading: doppler_hz must be positive");
}

double rician_pdf(double theta, const RicianFading& fading)
{
    if (!(theta >= 0.0))
        throw DomainError("rician_pdf: theta must be nonnegative");
    if (std::isinf(theta))
        return 0.0;
    // exp(-(theta + s^2)/(2 r2)) I0(x) = exp(-(sqrt(theta) - s)^2 / (2 r2)) I0s(x)
    const double los = std::sqrt(fading.varsigma2);
    const double root = std::sqrt(theta);
    const double x = root * los / fading.varrho2;
    const double gap = root - los;
    return std::exp(-gap * gap / (2.0 * fading.varrho2)) * num::bessel_i0_scaled(x) /
           (2.0 * fading.varrho2);
}

double rician_cdf(double x, const RicianFading& fading)
{
    if (!(x >= 0.0))
        throw DomainError("rician_cdf: x must be nonnegative");
    if (std::isinf(x))
        return 1.0;
    auto pdf = [&](double t) { return rician_pdf(t, fading); };
    return num::integrate(pdf, 0.0, x, {kCdfTolerance, 0.0, 4000}).value;
}

double rician_survival(double x, const RicianFading& fading)
{
    if (!(x >= 0.0))
        throw DomainError("rician_survival: x must be nonnegative");
    const double end = negligible_density_point(fading);
    if (x >= end)
        return 0.0;
    auto pdf = [&](double t) { return rician_pdf(t, fading); };
    return num::integrate(pdf, x, end, {1e-300, 1e-10, 4000}).value;
}

double rician_tail_limit(const RicianFading& fading)
{
    // survival is decreasing; bisect log-survival on [mean, end]
    double lo = fading.mean_power();
    double hi = negligible_density_point(fading);
    if (rician_survival(lo, fading) <= kTailMass)
        lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double s = rician_survival(mid, fading);
        if (std::abs(s / kTailMass - 1.0) < 1e-6)
            return mid;
        if (s > kTailMass)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi)
            return mid;
    }
    return 0.5 * (lo + hi);
}

double level_crossing_rate(double theta_level, const RicianFading& fading)
{
    if (!(theta_level >= 0.0))
        throw DomainError("level_crossing_rate: level must be nonnegative");
    if (std::isinf(theta_level))
        return 0.0;
    const double kappa = fading.k_factor();
    const double z = (1.0 + kappa) * theta_level / fading.mean_power();
    const double x = 2.0 * std::sqrt(kappa * z);
    // exp(-(kappa + z)) I0(x) = exp(-(sqrt(kappa) - sqrt(z))^2) I0s(x)
    const double gap = std::sqrt(kappa) - std::sqrt(z);
    return std::sqrt(2.0 * std::numbers::pi * z) * fading.doppler_hz * std::exp(-gap * gap) *
           num::bessel_i0_scaled(x);
}

std::vector<double> partition_boundaries(std::size_t num_states, const RicianFading& fading)
{
    if (num_states < 1)
        throw DomainError("partition_boundaries: need at least one channel state");
    fading.validate();
    std::vector<double> bounds(num_states + 1);
    bounds.front() = 0.0;
    bounds.back() = kInfinity;
    const double n = static_cast<double>(num_states);
    for (std::size_t k = 1; k < num_states; ++k)
        bounds[k] = invert_cdf(static_cast<double>(k) / n, fading);
    for (std::size_t k = 1; k <= num_states; ++k) {
        if (!(bounds[k] > bounds[k - 1]))
            throw NumericalError("partition_boundaries: boundaries not strictly increasing");
    }
    return bounds;
}

double representative_gain(std::size_t k, double distance_m, double pathloss_exponent,
                           const RicianFading& fading, std::span<const double> boundaries)
{
    if (boundaries.size() < 2 || k + 1 >= boundaries.size())
        throw DomainError("representative_gain: state index out of range");
    if (!(distance_m > 0.0))
        throw DomainError("representative_gain: distance must be positive");
    const double n = static_cast<double>(boundaries.size() - 1);
    const double lo = boundaries[k];
    double hi = boundaries[k + 1];
    if (std::isinf(hi))
        hi = rician_tail_limit(fading);
    auto moment = [&](double t) { return t * rician_pdf(t, fading); };
    const double mean = n * num::integrate(moment, lo, hi, {1e-12, 1e-13, 4000}).value;
    return std::pow(distance_m, -pathloss_exponent) * mean;
}

num::Matrix transition_matrix(std::span<const double> boundaries, const RicianFading& fading,
                              double block_s)
{
    if (boundaries.size() < 2)
        throw DomainError("transition_matrix: need at least two boundaries");
    if (!(block_s > 0.0))
        throw DomainError("transition_matrix: block duration must be positive");
    const std::size_t n = boundaries.size() - 1;
    const double inv_pi = static_cast<double>(n); // 1 / pi_k with pi_k = 1/K
    num::Matrix p(n, n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double off = 0.0;
        if (k + 1 < n) {
            p(k, k + 1) = level_crossing_rate(boundaries[k + 1], fading) * block_s * inv_pi;
            off += p(k, k + 1);
        }
        if (k > 0) {
            p(k, k - 1) = level_crossing_rate(boundaries[k], fading) * block_s * inv_pi;
            off += p(k, k - 1);
        }
        p(k, k) = 1.0 - off;
        if (p(k, k) < 0.0) {
            std::ostringstream msg;
            msg << "transition_matrix: negative self-transition probability " << p(k, k)
                << " in state " << k << " (block " << block_s << " s too long for Doppler "
                << fading.doppler_hz << " Hz with " << n << " states)";
            throw ModelError(msg.str());
        }
    }
    return p;
}

ChannelModel ChannelModel::build(std::size_t num_states, const RicianFading& fading,
                                 double block_s, double distance_m, double pathloss_exponent)
{
    fading.validate();
    if (!(distance_m > 0.0))
        throw DomainError("ChannelModel: distance must be positive");
    if (!(pathloss_exponent >= 0.0))
        throw DomainError("ChannelModel: path-loss exponent must be nonnegative");

    ChannelModel m;
    m.fading_ = fading;
    m.block_s_ = block_s;
    m.distance_m_ = distance_m;
    m.pathloss_exponent_ = pathloss_exponent;
    m.boundaries_ = partition_boundaries(num_states, fading);
    m.tail_limit_ = rician_tail_limit(fading);
    if (num_states > 1 && !(m.tail_limit_ > m.boundaries_[num_states - 1]))
        throw NumericalError("ChannelModel: tail limit below the top boundary");
    m.transition_ = transition_matrix(m.boundaries_, fading, block_s);
    m.steady_.assign(num_states, 1.0 / static_cast<double>(num_states));

    const double loss = m.pathloss();
    for (std::size_t k = 0; k < num_states; ++k) {
        const double mean = m.bin_average(k, [](double t) { return t; });
        m.bin_means_.push_back(mean);
        m.gains_.push_back(mean * loss);
        if (k > 0 && !(m.gains_[k] > m.gains_[k - 1]))
            throw NumericalError("ChannelModel: representative gains not strictly increasing");
    }
    return m;
}

double ChannelModel::pathloss() const
{
    return std::pow(distance_m_, -pathloss_exponent_);
}

double ChannelModel::upper_limit(std::size_t k) const
{
    const double hi = boundaries_[k + 1];
    return std::isinf(hi) ? tail_limit_ : hi;
}

double ChannelModel::bin_average(std::size_t k, const std::function<double(double)>& g,
                                 const num::QuadratureOptions& opts) const
{
    if (k >= num_states())
        throw DomainError("ChannelModel::bin_average: state index out of range");
    auto integrand = [&](double t) { return g(t) * rician_pdf(t, fading_); };
    const double mass = num::integrate(integrand, lower_limit(k), upper_limit(k), opts).value;
    return static_cast<double>(num_states()) * mass;
}

} // namespace wpcn
