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

#include "cpwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "cpwalk/errors.hpp"

namespace cpwalk {

double normal_quantile(double p) {
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double critical_value(double level) {
    if (!(level > 0.0 && level < 1.0)) fail(ErrorCode::invalid_argument, "confidence level must be in (0,1)");
    return normal_quantile(0.5 + level / 2.0);
}

EstimateReport mean_estimate(std::span<const double> xs, double level, std::string label, std::string column) {
    EstimateReport r;
    r.label = std::move(label);
    r.column = std::move(column);
    r.level = level;
    r.replicas = xs.size();
    if (xs.empty()) {
        r.estimate = r.ci_low = r.ci_high = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    const double n = double(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = xs.size() > 1 ? ss / (n - 1.0) : 0.0;
    r.estimate = mean;
    r.std_error = std::sqrt(var / n);
    const double z = critical_value(level);
    r.ci_low = mean - z * r.std_error;
    r.ci_high = mean + z * r.std_error;
    return r;
}

EstimateReport proportion_estimate(std::size_t hits, std::size_t trials, double level, std::string label,
                                   std::string column) {
    EstimateReport r;
    r.label = std::move(label);
    r.column = std::move(column);
    r.level = level;
    r.replicas = trials;
    if (trials == 0) {
        r.estimate = r.ci_low = r.ci_high = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    const double n = double(trials);
    const double p = double(hits) / n;
    const double z = critical_value(level);
    const double z2 = z * z;
    const double center = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    const double half = z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    r.estimate = p;
    r.std_error = std::sqrt(p * (1.0 - p) / n);
    r.ci_low = std::max(0.0, std::min(p, center - half));
    r.ci_high = std::min(1.0, std::max(p, center + half));
    return r;
}

bool agree_within(const EstimateReport& a, const EstimateReport& b, double k) {
    return std::abs(a.estimate - b.estimate) <= k * std::hypot(a.std_error, b.std_error);
}

double kolmogorov_q(double lambda) {
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += (j % 2 ? 2.0 : -2.0) * term;
        if (term < 1e-18) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    KsResult r;
    r.n1 = a.size();
    r.n2 = b.size();
    if (a.empty() || b.empty()) return r;
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        // Step both empirical CDFs past every tie at v before comparing.
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(double(i) / double(x.size()) - double(j) / double(y.size())));
    }
    const double ne = double(x.size()) * double(y.size()) / double(x.size() + y.size());
    const double sq = std::sqrt(ne);
    r.statistic = d;
    r.p_value = kolmogorov_q((sq + 0.12 + 0.11 / sq) * d);
    return r;
}

const char* to_string(FitStatus s) {
    switch (s) {
    case FitStatus::ok: return "ok";
    case FitStatus::inconclusive: return "inconclusive";
    case FitStatus::degenerate: return "degenerate";
    }
    return "unknown";
}

std::size_t TailFit::usable() const { return std::size_t(std::count(used.begin(), used.end(), true)); }

bool TailFit::strictly_decreasing() const {
    for (std::size_t i = 1; i < probability.size(); ++i)
        if (!(probability[i] < probability[i - 1])) return false;
    return !probability.empty();
}

namespace {

TailFit fit_log_linear(TailFit f, const std::vector<double>& var_log) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> xs, ys, vs;
    for (std::size_t i = 0; i < f.t.size(); ++i) {
        const bool ok = f.probability[i] > 0.0;
        f.used.push_back(ok);
        f.log_probability.push_back(ok ? std::log(f.probability[i]) : nan);
        if (ok) {
            xs.push_back(f.t[i]);
            ys.push_back(std::log(f.probability[i]));
            vs.push_back(var_log[i]);
        }
    }
    f.slope = f.intercept = f.r_squared = f.slope_se = f.slope_ci_low = f.slope_ci_high = nan;
    if (xs.empty()) {
        f.status = FitStatus::degenerate;
        return f;
    }
    if (xs.size() < 4) {
        f.status = FitStatus::inconclusive;
        return f;
    }
    const double n = double(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) {
        f.status = FitStatus::inconclusive;
        return f;
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    double var = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double w = (xs[i] - mx) / sxx;
        var += w * w * vs[i];
    }
    f.slope_se = std::sqrt(var);
    const double z = critical_value(f.level);
    f.slope_ci_low = f.slope - z * f.slope_se;
    f.slope_ci_high = f.slope + z * f.slope_se;
    f.status = FitStatus::ok;
    return f;
}

} // namespace

TailFit fit_tail(std::span<const double> t, std::span<const std::size_t> hits, std::span<const std::size_t> trials,
                 double level) {
    if (t.size() != hits.size() || t.size() != trials.size())
        fail(ErrorCode::invalid_argument, "tail fit inputs differ in length");
    TailFit f;
    f.level = level;
    f.t.assign(t.begin(), t.end());
    f.hits.assign(hits.begin(), hits.end());
    f.trials.assign(trials.begin(), trials.end());
    std::vector<double> var_log;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double p = trials[i] ? double(hits[i]) / double(trials[i]) : 0.0;
        f.probability.push_back(p);
        var_log.push_back(p > 0.0 ? (1.0 - p) / (double(trials[i]) * p) : 0.0);
    }
    return fit_log_linear(std::move(f), var_log);
}

TailFit fit_tail_estimates(std::span<const double> t, std::span<const double> p, std::span<const double> se,
                           double level) {
    if (t.size() != p.size() || t.size() != se.size())
        fail(ErrorCode::invalid_argument, "tail fit inputs differ in length");
    TailFit f;
    f.level = level;
    f.t.assign(t.begin(), t.end());
    f.probability.assign(p.begin(), p.end());
    std::vector<double> var_log;
    for (std::size_t i = 0; i < t.size(); ++i) var_log.push_back(p[i] > 0.0 ? (se[i] / p[i]) * (se[i] / p[i]) : 0.0);
    return fit_log_linear(std::move(f), var_log);
}

} // namespace cpwalk
