//
// Copyright 2026 The pptopn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "pptopn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "pptopn/errors.hpp"

namespace pptopn {
namespace {

std::vector<double> midranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    const auto n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 3) {
        throw ContractError("spearman_rho: needs >= 3 paired samples");
    }
    const auto rx = midranks(xs);
    const auto ry = midranks(ys);
    return pearson(rx, ry);
}

double spearman_pvalue_negative(double rho, std::size_t n) {
    if (n < 4) throw ContractError("spearman_pvalue_negative: needs n >= 4");
    const double dof = static_cast<double>(n) - 2.0;
    const double clamped = std::clamp(rho, -0.999999999999, 0.999999999999);
    const double t = clamped * std::sqrt(dof / (1.0 - clamped * clamped));
    boost::math::students_t dist(dof);
    return boost::math::cdf(dist, t);  // P(T <= t): small when rho is clearly negative
}

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw ContractError("linear_fit: needs >= 2 paired samples");
    }
    const auto n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw ContractError("linear_fit: all x values identical");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

double total_variation_from_uniform(const std::vector<std::uint64_t>& counts) {
    if (counts.empty()) throw ContractError("total_variation_from_uniform: empty histogram");
    const double total = static_cast<double>(
        std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
    if (total == 0.0) throw ContractError("total_variation_from_uniform: no samples");
    const double uniform = 1.0 / static_cast<double>(counts.size());
    double tv = 0.0;
    for (std::uint64_t c : counts) {
        tv += std::abs(static_cast<double>(c) / total - uniform);
    }
    return tv / 2.0;
}

double chi_square_uniform_pvalue(const std::vector<std::uint64_t>& counts) {
    if (counts.size() < 2) throw ContractError("chi_square_uniform_pvalue: needs >= 2 cells");
    const double total = static_cast<double>(
        std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
    if (total == 0.0) throw ContractError("chi_square_uniform_pvalue: no samples");
    const double expected = total / static_cast<double>(counts.size());
    double statistic = 0.0;
    for (std::uint64_t c : counts) {
        const double d = static_cast<double>(c) - expected;
        statistic += d * d / expected;
    }
    boost::math::chi_squared dist(static_cast<double>(counts.size()) - 1.0);
    return boost::math::cdf(boost::math::complement(dist, statistic));
}

double median(std::vector<double> values) {
    if (values.empty()) throw ContractError("median: empty sample");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double hi = values[mid];
    if (values.size() % 2 == 1) return hi;
    std::nth_element(values.begin(), values.begin() + mid - 1, values.begin() + mid);
    return (values[mid - 1] + hi) / 2.0;
}

}  // namespace pptopn
