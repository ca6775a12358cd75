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

#include <cmath>

#include "cpwalk/errors.hpp"
#include "internal.hpp"

namespace cpwalk {

namespace {

void add_fit_checks(EstimatorOutput& out, const std::string& name, const TailFit& f) {
    std::string detail = std::string("status ") + to_string(f.status) + ", " + std::to_string(f.usable()) +
                         " usable cells";
    if (f.status == FitStatus::ok)
        detail += ", slope " + detail::fmt(f.slope) + " CI [" + detail::fmt(f.slope_ci_low) + ", " +
                  detail::fmt(f.slope_ci_high) + "], R^2 " + detail::fmt(f.r_squared);
    out.checks.push_back({name + "_slope_negative", f.status == FitStatus::ok && f.slope_ci_high < 0.0, detail});
    if (f.status == FitStatus::degenerate) out.warnings.push_back(name + ": every cell has zero count (degenerate)");
    if (f.status == FitStatus::inconclusive)
        out.warnings.push_back(name + ": InconclusiveFit, fewer than 4 cells with positive counts");
}

std::vector<std::string> walk_columns(const std::vector<double>& grid, int d) {
    std::vector<std::string> cols;
    for (double t : grid) {
        cols.push_back(detail::at("rho", "t", t));
        for (int a = 0; a < d; ++a) cols.push_back(detail::at("v" + std::to_string(a), "t", t));
    }
    return cols;
}

std::vector<double> walk_row(const detail::WalkSample& w, int d) {
    std::vector<double> row;
    for (std::size_t g = 0; g < w.rho.size(); ++g) {
        row.push_back(w.rho[g]);
        for (int a = 0; a < d; ++a) row.push_back(w.velocity[g][a]);
    }
    return row;
}

} // namespace

EstimatorOutput ldp_tail_rho(const LdpRhoParams& p, const RunSpec& run) {
    const auto grid = detail::sorted_grid(p.t_grid, "t_grid");
    if (!(p.epsilon > 0.0)) fail(ErrorCode::validation_error, "epsilon must be > 0");
    if (p.initial != InitialLaw::ones && p.initial != InitialLaw::zeros)
        fail(ErrorCode::validation_error, "initial must be ones or zeros");
    const int d = p.kernel.dimension();
    InitialSpec init;
    init.law = p.initial;

    auto batch = run_replicas<detail::WalkSample>(run.replicas, run.threads, [&](std::size_t i) {
        return detail::sample_walk(p.kernel, p.lambda, init, grid, run, i);
    });

    EstimatorOutput out;
    out.estimator = "ldp-rho";
    out.stream_roles = p.initial == InitialLaw::ones ? std::vector<std::string>{"rep", "jumps", "O", "V"}
                                                     : std::vector<std::string>{"jumps", "O", "V"};
    out.table.columns = walk_columns(grid, d);
    detail::collect(out, batch, run, [&](const detail::WalkSample& w) { return walk_row(w, d); });

    const auto last = out.table.values(detail::at("rho", "t", grid.back()));
    const auto rho_hat = mean_estimate(last, run.level, "rho_hat", detail::at("rho", "t", grid.back()));
    out.estimates.push_back(rho_hat);
    const double center = p.center.value_or(rho_hat.estimate);
    out.values.emplace_back("center", center);
    const bool upper = p.initial == InitialLaw::ones;
    const double threshold = upper ? center + p.epsilon : center - p.epsilon;
    out.values.emplace_back("threshold", threshold);

    std::vector<std::size_t> hits, trials;
    for (double t : grid) {
        auto xs = out.table.values(detail::at("rho", "t", t));
        std::size_t h = 0;
        for (double x : xs) h += upper ? (x > threshold) : (x < threshold);
        hits.push_back(h);
        trials.push_back(xs.size());
        out.estimates.push_back(proportion_estimate(h, xs.size(), run.level, detail::at("p_tail", "t", t),
                                                    detail::at("rho", "t", t)));
    }
    TailFit f = fit_tail(grid, hits, trials, run.level);
    add_fit_checks(out, "rho_tail", f);
    out.fits.emplace_back("rho_tail", std::move(f));
    return out;
}

EstimatorOutput ldp_tail_walker(const LdpWalkParams& p, const RunSpec& run) {
    const auto grid = detail::sorted_grid(p.t_grid, "t_grid");
    if (!(p.epsilon > 0.0)) fail(ErrorCode::validation_error, "epsilon must be > 0");
    const int d = p.kernel.dimension();
    const bool from_ones = p.initial.law == InitialLaw::ones;

    auto batch = run_replicas<detail::WalkSample>(run.replicas, run.threads, [&](std::size_t i) {
        return detail::sample_walk(p.kernel, p.lambda, p.initial, grid, run, i);
    });

    EstimatorOutput out;
    out.estimator = "ldp-walk";
    out.stream_roles = {"init", "rep", "jumps", "O", "V", "jumps/1", "O/1", "V/1"};
    if (!from_ones) out.stream_roles.insert(out.stream_roles.end(), {"rep/2", "jumps/2", "O/2", "V/2"});
    out.table.columns = walk_columns(grid, d);
    detail::collect(out, batch, run, [&](const detail::WalkSample& w) { return walk_row(w, d); });

    const double T = grid.back();
    Vector center{};
    if (p.center) {
        center = *p.center;
    } else {
        for (int a = 0; a < d; ++a) {
            auto xs = out.table.values(detail::at("v" + std::to_string(a), "t", T));
            center[a] = mean_estimate(xs, run.level).estimate;
        }
    }
    for (int a = 0; a < d; ++a) out.values.emplace_back("center" + std::to_string(a), center[a]);

    std::vector<std::size_t> hits, trials;
    for (double t : grid) {
        std::vector<std::vector<double>> comps;
        for (int a = 0; a < d; ++a) comps.push_back(out.table.values(detail::at("v" + std::to_string(a), "t", t)));
        std::size_t h = 0;
        const std::size_t n = out.table.rows.size();
        for (std::size_t j = 0; j < n; ++j) {
            double dist = 0.0;
            for (int a = 0; a < d; ++a) dist += std::abs(comps[a][j] - center[a]);
            // |W_t - t v|_1 > eps t  <=>  |W_t / t - v|_1 > eps
            h += dist > p.epsilon;
        }
        hits.push_back(h);
        trials.push_back(n);
        out.estimates.push_back(proportion_estimate(h, n, run.level, detail::at("p_tail", "t", t)));
    }
    TailFit f = fit_tail(grid, hits, trials, run.level);
    add_fit_checks(out, "walk_tail", f);
    out.fits.emplace_back("walk_tail", std::move(f));

    // The walker tail bound assumes rho_0 = rho_1; both are measured here.
    const std::vector<double> last{T};
    auto rho_of = [&](InitialLaw law, std::size_t replicas, std::uint64_t aux) {
        InitialSpec s;
        s.law = law;
        auto b = run_replicas<double>(replicas, run.threads, [&](std::size_t i) {
            return detail::sample_walk(p.kernel, p.lambda, s, last, run, i, aux).rho[0];
        });
        std::vector<double> xs;
        for (auto& r : b.rows)
            if (r) xs.push_back(*r);
        return mean_estimate(xs, run.level);
    };
    EstimateReport rho_mu = mean_estimate(out.table.values(detail::at("rho", "t", T)), run.level, "rho_mu",
                                          detail::at("rho", "t", T));
    EstimateReport rho0 = rho_of(InitialLaw::zeros, run.replicas, 1);
    rho0.label = "rho_0";
    EstimateReport rho1 = from_ones ? rho_mu : rho_of(InitialLaw::ones, p.reference_replicas, 2);
    rho1.label = "rho_1";
    out.estimates.push_back(rho_mu);
    out.estimates.push_back(rho0);
    out.estimates.push_back(rho1);
    const bool same = std::abs(rho1.estimate - rho0.estimate) <=
                      critical_value(run.level) * std::hypot(rho0.std_error, rho1.std_error);
    out.checks.push_back({"rho0_equals_rho1", same,
                          "rho_0 " + detail::fmt(rho0.estimate) + ", rho_1 " + detail::fmt(rho1.estimate)});
    if (!same)
        out.warnings.push_back("RhoMismatch: rho_0 = " + detail::fmt(rho0.estimate) + " and rho_1 = " +
                               detail::fmt(rho1.estimate) + " differ beyond the joint CI");
    return out;
}

} // namespace cpwalk
