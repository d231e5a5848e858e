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

#include "wpcn/numerics.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace wpcn {

/// Rician fading of the channel power theta.
///
/// varrho2 is the per-dimension scatter power (total multipath power is
/// 2 * varrho2) and varsigma2 the line-of-sight power. varsigma2 = 0 is the
/// Rayleigh limit.
struct RicianFading {
    double varrho2 = 0.125;
    double varsigma2 = 0.75;
    double doppler_hz = 1.34;

    /// Local-mean fading power 2 varrho2 + varsigma2.
    double mean_power() const { return 2.0 * varrho2 + varsigma2; }
    /// Rician factor varsigma2 / (2 varrho2).
    double k_factor() const { return varsigma2 / (2.0 * varrho2); }

    /// Throws DomainError unless varrho2 > 0, varsigma2 >= 0, doppler_hz > 0.
    void validate() const;
};

/// Density of theta; integrates to one over [0, inf).
double rician_pdf(double theta, const RicianFading& fading);

/// P(theta <= x) by adaptive quadrature of the density (absolute tolerance 1e-10).
double rician_cdf(double x, const RicianFading& fading);

/// P(theta > x), accurate in the far tail.
double rician_survival(double x, const RicianFading& fading);

/// Truncation point of the unbounded top bin: the x with P(theta > x) = 1e-12.
double rician_tail_limit(const RicianFading& fading);

/// Expected number of crossings of the level theta_level per second.
double level_crossing_rate(double theta_level, const RicianFading& fading);

/// Equiprobable partition Theta_1..Theta_{K+1} with Theta_1 = 0 and the last
/// entry +infinity. Each interior Theta_k solves CDF(Theta_k) = (k-1)/K.
std::vector<double> partition_boundaries(std::size_t num_states, const RicianFading& fading);

/// Path-loss-scaled conditional mean power of bin k (0-based):
/// d^-alpha * E[theta | Theta_k <= theta < Theta_{k+1}].
double representative_gain(std::size_t k, double distance_m, double pathloss_exponent,
                           const RicianFading& fading, std::span<const double> boundaries);

/// One-step tridiagonal transition matrix of the quantized channel.
///
/// Upward rate out of bin k uses its upper boundary, downward rate its lower
/// boundary, both divided by the bin probability 1/K. Throws ModelError when
/// a self-transition probability would be negative (block too long for the
/// Doppler rate).
num::Matrix transition_matrix(std::span<const double> boundaries, const RicianFading& fading,
                              double block_s);

/// Finite-state Markov channel. Immutable once built.
class ChannelModel {
  public:
    static ChannelModel build(std::size_t num_states, const RicianFading& fading, double block_s,
                              double distance_m, double pathloss_exponent);

    std::size_t num_states() const { return steady_.size(); }
    const RicianFading& fading() const { return fading_; }
    double block_s() const { return block_s_; }
    double distance_m() const { return distance_m_; }
    double pathloss_exponent() const { return pathloss_exponent_; }
    double pathloss() const;

    /// Theta_1..Theta_{K+1}; last entry is +infinity.
    std::span<const double> boundaries() const { return boundaries_; }
    /// Path-loss-scaled representative gain per state, strictly increasing.
    std::span<const double> gains() const { return gains_; }
    /// Conditional mean fading power per state (no path loss).
    std::span<const double> bin_means() const { return bin_means_; }
    const num::Matrix& transition() const { return transition_; }
    std::span<const double> steady_state() const { return steady_; }
    double tail_limit() const { return tail_limit_; }

    /// Finite integration limits of bin k; the top bin ends at tail_limit().
    double lower_limit(std::size_t k) const { return boundaries_[k]; }
    double upper_limit(std::size_t k) const;

    /// (1/pi_k) * integral over bin k of g(theta) rho(theta).
    double bin_average(std::size_t k, const std::function<double(double)>& g,
                       const num::QuadratureOptions& opts = {1e-12, 1e-13, 4000}) const;

  private:
    RicianFading fading_;
    double block_s_ = 0.0;
    double distance_m_ = 0.0;
    double pathloss_exponent_ = 0.0;
    double tail_limit_ = 0.0;
    std::vector<double> boundaries_;
    std::vector<double> bin_means_;
    std::vector<double> gains_;
    num::Matrix transition_;
    std::vector<double> steady_;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

} // namespace wpcn
