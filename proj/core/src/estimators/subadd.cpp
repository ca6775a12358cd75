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
#include "cpwalk/walker.hpp"
#include "internal.hpp"

namespace cpwalk {

namespace {

struct SubaddRow {
    // Integer occupied-site counts; X = count / gamma.
    std::uint32_t x0t = 0, xtts = 0, x0ts = 0;
    std::uint32_t y0t = 0, ytts = 0, y0ts = 0;
    std::uint32_t x00 = 0;
    std::size_t jumps_t = 0, jumps_ts = 0;
    std::vector<std::uint32_t> x0k, xtk;
};

Box centered_box(int dim, const Point& c, int radius) {
    Point lo{}, hi{};
    for (int a = 0; a < dim; ++a) {
        lo[a] = c[a] - radius;
        hi[a] = c[a] + radius;
    }
    return Box(dim, lo, hi);
}

} // namespace

EstimatorOutput subadditive_X(const SubaddParams& p, const RunSpec& run) {
    if (!(p.t > 0.0) || !(p.s > 0.0)) fail(ErrorCode::validation_error, "t and s must be > 0");
    if (p.k_max < 1 || double(p.k_max) > p.s || double(p.k_max) > p.t)
        fail(ErrorCode::validation_error, "k_max must be in [1, min(t, s)]");
    const KernelSpec& k = p.kernel;
    const int d = k.dimension();
    const double t = p.t, s = p.s, T = t + s;
    const int pad = safety_pad(p.lambda, T, run.pad_factor);
    const Box box = Box::cube(d, walk_reach(k, T) + pad);
    const int pad_s = safety_pad(p.lambda, s, run.pad_factor);
    const int radius_s = walk_reach(k, s) + pad_s;

    auto batch = run_replicas<SubaddRow>(run.replicas, run.threads, [&](std::size_t i) {
        WalkDriver drv = sample_driver(k.gamma(), T, detail::driver_streams(run, i));
        SubaddRow row;
        row.x00 = 0;
        Sweeper sw(box, EventCursor(EventGenerator(box, p.lambda, T, run.stream(i, "rep"))));
        const int main_lane = sw.add_lane(Configuration(box, true));
        SweepEnvironment env(sw, main_lane, pad);
        WalkStepper main(k, drv);
        while (!main.done() && main.next_time() <= t) main.step(env.occupied(main.position(), main.next_time()));
        const std::size_t nt = main.step_index();
        row.jumps_t = nt;
        row.x0t = std::uint32_t(main.observed());
        WalkResult head = main.result();
        for (int kk = 1; kk <= p.k_max; ++kk) row.x0k.push_back(head.rho[head.jumps_by(double(kk))]);

        const Point wt = main.position();
        WalkDriver rest = restart_driver(drv, t, nt, main.observed());
        WalkStepper xs(k, rest, wt), ys(k, rest, wt), y0(k, drv);
        ConstantEnvironment zero(0);
        while (!y0.done() && y0.next_time() <= t) y0.step(zero.occupied(y0.position(), y0.next_time()));
        row.y0t = std::uint32_t(y0.observed());

        if (p.shared) {
            // Literal restart: the same rep, the copies reset at time t.
            sw.advance_to(t);
            const int xl = sw.add_lane(Configuration(box, true));
            const int yl = sw.add_lane(Configuration(box, false));
            SweepEnvironment xe(sw, xl, pad), ye(sw, yl, pad);
            while (!main.done()) {
                const double j = main.next_time();
                main.step(env.occupied(main.position(), j));
                xs.step(xe.occupied(xs.position(), j));
                ys.step(ye.occupied(ys.position(), j));
                y0.step(zero.occupied(y0.position(), j));
            }
        } else {
            while (!main.done()) main.step(env.occupied(main.position(), main.next_time()));
            while (!y0.done()) y0.step(zero.occupied(y0.position(), y0.next_time()));
            const Box fresh = centered_box(d, wt, radius_s);
            Sweeper fs(fresh, EventCursor(EventGenerator(fresh, p.lambda, T, run.stream(i, "rep", 1), false, t)), t);
            fs.add_lane(Configuration(fresh, true));
            SweepEnvironment xe(fs, 0, pad_s);
            while (!xs.done()) xs.step(xe.occupied(xs.position(), xs.next_time()));
            // The restarted 0-bar environment stays empty.
            while (!ys.done()) ys.step(zero.occupied(ys.position(), ys.next_time()));
        }
        row.jumps_ts = main.step_index();
        row.x0ts = std::uint32_t(main.observed());
        row.xtts = std::uint32_t(xs.observed());
        row.ytts = std::uint32_t(ys.observed());
        row.y0ts = std::uint32_t(y0.observed());
        WalkResult xr = xs.result();
        for (int kk = 1; kk <= p.k_max; ++kk) row.xtk.push_back(xr.rho[xr.jumps_by(t + double(kk))]);
        return row;
    });

    EstimatorOutput out;
    out.estimator = "subadd";
    out.stream_roles = {"rep", "jumps", "O", "V"};
    if (!p.shared) out.stream_roles.push_back("rep/1");
    const double g = k.gamma();
    out.table.columns = {"X_0_0", "X_0_t", "X_t_ts", "X_0_ts", "Y_0_t", "Y_t_ts", "Y_0_ts", "N_t", "N_ts"};
    for (int kk = 1; kk <= p.k_max; ++kk) out.table.columns.push_back("X_0_k" + std::to_string(kk));
    for (int kk = 1; kk <= p.k_max; ++kk) out.table.columns.push_back("X_t_tk" + std::to_string(kk));
    std::size_t violations = 0, y_violations = 0, bound_violations = 0;
    detail::collect(out, batch, run, [&](const SubaddRow& r) {
        if (r.x0ts > r.x0t + r.xtts) ++violations;
        if (r.y0ts < r.y0t + r.ytts) ++y_violations;
        if (r.x0t > r.jumps_t || r.x0ts > r.jumps_ts) ++bound_violations;
        std::vector<double> row{double(r.x00) / g, double(r.x0t) / g, double(r.xtts) / g, double(r.x0ts) / g,
                                double(r.y0t) / g, double(r.ytts) / g, double(r.y0ts) / g, double(r.jumps_t),
                                double(r.jumps_ts)};
        for (auto v : r.x0k) row.push_back(double(v) / g);
        for (auto v : r.xtk) row.push_back(double(v) / g);
        return row;
    });
    const std::size_t n = out.table.rows.size();

    for (const char* c : {"X_0_t", "X_t_ts", "X_0_ts", "Y_0_t", "Y_t_ts", "Y_0_ts"}) {
        auto xs = out.table.values(c);
        out.estimates.push_back(mean_estimate(xs, run.level, c, c));
    }
    const std::string mode = p.shared ? "shared rep" : "fresh rep";
    out.values.emplace_back("subadditivity_violations", double(violations));
    out.values.emplace_back("superadditivity_violations_Y", double(y_violations));
    if (p.shared) {
        out.checks.push_back({"subadditivity_pathwise", violations == 0,
                              std::to_string(violations) + " of " + std::to_string(n) + " replicas violate"});
        out.checks.push_back({"superadditivity_Y_pathwise", y_violations == 0,
                              std::to_string(y_violations) + " of " + std::to_string(n) + " replicas violate"});
    } else {
        out.warnings.push_back("fresh rep mode: the pathwise inequality is not expected, rerun with --shared-rep");
    }
    {
        auto x00 = out.table.values("X_0_0");
        bool zero = true;
        for (double v : x00) zero = zero && v == 0.0;
        out.checks.push_back({"X_0_0_zero", zero, mode});
    }
    out.checks.push_back({"bounds_0_le_X_le_N", bound_violations == 0,
                          std::to_string(bound_violations) + " replicas outside [0, N_t]"});

    // Stationarity: X_{t,t+k} and X_{0,k} have the same law.
    const double alpha = p.ks_alpha / double(p.k_max);
    for (int kk = 1; kk <= p.k_max; ++kk) {
        auto a = out.table.values("X_0_k" + std::to_string(kk));
        auto b = out.table.values("X_t_tk" + std::to_string(kk));
        KsResult ks = ks_two_sample(a, b);
        const std::string key = "k=" + std::to_string(kk);
        out.values.emplace_back("ks_D[" + key + "]", ks.statistic);
        out.values.emplace_back("ks_p[" + key + "]", ks.p_value);
        out.checks.push_back({"ks[" + key + "]", ks.p_value > alpha,
                              "p = " + detail::fmt(ks.p_value) + " vs Bonferroni level " + detail::fmt(alpha)});
    }

    // Independence of X_{0,t} and X_{t,t+s}: Fisher-z interval for the correlation.
    {
        auto a = out.table.values("X_0_t");
        auto b = out.table.values("X_t_ts");
        double ma = 0, mb = 0;
        for (std::size_t j = 0; j < n; ++j) {
            ma += a[j];
            mb += b[j];
        }
        ma /= double(n);
        mb /= double(n);
        double sab = 0, saa = 0, sbb = 0;
        for (std::size_t j = 0; j < n; ++j) {
            sab += (a[j] - ma) * (b[j] - mb);
            saa += (a[j] - ma) * (a[j] - ma);
            sbb += (b[j] - mb) * (b[j] - mb);
        }
        const double r = (saa > 0 && sbb > 0) ? sab / std::sqrt(saa * sbb) : 0.0;
        out.values.emplace_back("corr_X0t_Xtts", r);
        if (n > 3) {
            const double z = std::atanh(std::clamp(r, -0.999999, 0.999999));
            const double h = critical_value(run.level) / std::sqrt(double(n) - 3.0);
            const double lo = std::tanh(z - h), hi = std::tanh(z + h);
            out.checks.push_back({"independence", lo <= 0.0 && 0.0 <= hi,
                                  "correlation CI [" + detail::fmt(lo) + ", " + detail::fmt(hi) + "]"});
        }
    }
    return out;
}

} // namespace cpwalk
