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

#pragma once

#include <cstdint>
#include <vector>

namespace pptopn {

/// Spearman rank correlation (midranks for ties). Requires >= 3 points.
double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys);

/// One-sided p-value for H1: rho < 0, via the t approximation with n-2
/// degrees of freedom.
double spearman_pvalue_negative(double rho, std::size_t n);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares y ~ a + b x. Requires >= 2 distinct x values.
LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

/// Total variation distance between the empirical distribution of `counts`
/// and the uniform distribution over its cells.
double total_variation_from_uniform(const std::vector<std::uint64_t>& counts);

/// Chi-square goodness-of-fit p-value against the uniform distribution.
double chi_square_uniform_pvalue(const std::vector<std::uint64_t>& counts);

/// Median of a sample (by copy; sample may be unsorted).
double median(std::vector<double> values);

}  // namespace pptopn
