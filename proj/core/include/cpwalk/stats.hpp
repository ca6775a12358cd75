/*
 * Copyright 2026 The cpwalk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cpwalk {

double normal_quantile(double p);
/// Two-sided critical value for confidence level `level`.
double critical_value(double level);

struct EstimateReport {
    std::string label;
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t replicas = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double level = 0.95;
    /// replicas.csv column holding the per-replica values.
    std::string column;

    bool ci_contains(double x) const { return ci_low <= x && x <= ci_high; }
};

/// Sample mean with a normal-approximation interval.
EstimateReport mean_estimate(std::span<const double> xs, double level, std::string label = {},
                             std::string column = {});

/// Proportion with a Wilson score interval.
EstimateReport proportion_estimate(std::size_t hits, std::size_t trials, double level, std::string label = {},
                                   std::string column = {});

/// |a - b| <= k * sqrt(se_a^2 + se_b^2) for independent estimates.
bool agree_within(const EstimateReport& a, const EstimateReport& b, double k);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value (Stephens' correction).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);
double kolmogorov_q(double lambda);

enum class FitStatus { ok, inconclusive, degenerate };
const char* to_string(FitStatus s);

struct TailFit {
    std::vector<double> t;
    std::vector<std::size_t> hits;
    std::vector<std::size_t> trials;
    std::vector<double> probability;
    /// NaN where the count is zero.
    std::vector<double> log_probability;
    std::vector<bool> used;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double slope_se = 0.0;
    double slope_ci_low = 0.0;
    double slope_ci_high = 0.0;
    double level = 0.95;
    FitStatus status = FitStatus::inconclusive;

    std::size_t usable() const;
    bool strictly_decreasing() const;
};

/// Least squares on log p over cells with p > 0; slope SE by the delta method
/// with var(log p) = (1 - p) / (n p). Fewer than 4 usable cells is inconclusive,
/// no positive cell at all is degenerate.
TailFit fit_tail(std::span<const double> t, std::span<const std::size_t> hits, std::span<const std::size_t> trials,
                 double level);

/// Same fit from probability estimates with standard errors; var(log p) is
/// taken as (se / p)^2. Cells with p <= 0 are dropped.
TailFit fit_tail_estimates(std::span<const double> t, std::span<const double> p, std::span<const double> se,
                           double level);

} // namespace cpwalk
