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

#include "wpcn/numerics.hpp"

#include "wpcn/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace wpcn::num {

namespace {

// Sum_k (x^2/4)^k / (k!)^2. All terms positive, so no cancellation.
double i0_series(double x)
{
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (term < 1e-17 * sum)
            break;
    }
    return sum;
}

// sqrt(2 pi x) e^{-x} I0(x) ~ sum_k a_k, a_k = a_{k-1} (2k-1)^2 / (8 x k).
// Truncated at the smallest term; for x >= 25 that is far below double eps.
double i0_asymptotic_scaled(double x)
{
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * x * k);
        if (next >= term)
            break;
        term = next;
        sum += term;
        if (term < 1e-17 * sum)
            break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

// Kronrod abscissae and weights (QUADPACK qk15); the Gauss 7-point rule uses
// the odd-indexed abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
};

Segment gauss_kronrod_15(const std::function<double(double)>& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * pair;
        if (j % 2 == 1)
            gauss += kWg[j / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

} // namespace

double bessel_i0(double x)
{
    x = std::abs(x);
    if (x < kBesselI0SeriesLimit)
        return i0_series(x);
    return std::exp(x) * i0_asymptotic_scaled(x);
}

double bessel_i0_scaled(double x)
{
    x = std::abs(x);
    if (x < kBesselI0SeriesLimit)
        return std::exp(-x) * i0_series(x);
    return i0_asymptotic_scaled(x);
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts)
{
    if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("integrate: require finite a <= b");
    if (a == b)
        return {0.0, 0.0, 0};

    auto by_error = [](const Segment& lhs, const Segment& rhs) { return lhs.error < rhs.error; };
    std::vector<Segment> heap;
    heap.push_back(gauss_kronrod_15(f, a, b));
    double value = heap.front().value;
    double error = heap.front().error;

    while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
        if (heap.size() >= opts.max_intervals) {
            std::ostringstream msg;
            msg << "integrate: tolerance " << opts.abs_tol << " not met on [" << a << ", " << b
                << "] after " << heap.size() << " intervals (error estimate " << error << ")";
            throw NumericalError(msg.str());
        }
        std::pop_heap(heap.begin(), heap.end(), by_error);
        const Segment worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            std::ostringstream msg;
            msg << "integrate: interval [" << worst.a << ", " << worst.b
                << "] cannot be subdivided further (error estimate " << error << ")";
            throw NumericalError(msg.str());
        }
        const Segment left = gauss_kronrod_15(f, worst.a, mid);
        const Segment right = gauss_kronrod_15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), by_error);
    }

    // Resum to shed the drift of the running updates.
    value = 0.0;
    error = 0.0;
    for (const auto& s : heap) {
        value += s.value;
        error += s.error;
    }
    return {value, error, heap.size()};
}

} // namespace wpcn::num
