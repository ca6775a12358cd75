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

#include <algorithm>
#include <bit>
#include <cmath>

#include "cpwalk/errors.hpp"
#include "cpwalk/sweeper.hpp"
#include "internal.hpp"

namespace cpwalk {

namespace {

// Lane 0 runs from 1-bar, lane 1 from the product measure.
class OriginWatch : public SweepListener {
public:
    explicit OriginWatch(std::uint32_t origin) : origin_(origin) {}

    void on_event(const Event& e, std::uint32_t target, std::uint8_t, std::uint8_t after) override {
        if ((after & 3u) == 2u) ++order_violations;
        if (active && target == origin_ && (after & 3u) == 1u && e.time < window_end) hit = true;
    }

    bool active = false;
    bool hit = false;
    double window_end = 0.0;
    std::size_t order_violations = 0;

private:
    std::uint32_t origin_;
};

// Conditional probability, given the rep, that the origin is discrepant at
// some time in [T, T + w): the product initial law is integrated out exactly.
// A backward dual from the origin carries one colour per constant piece of
// the window; colour j ends at time 0 on the set A_j, and the event is that
// some nonempty A_j avoids the initial configuration.
double dual_window_probability(const Box& box, double lambda, double T, double w, double density, Rng& rng) {
    const auto o = std::uint32_t(box.index(Point{}));
    const int dirs = box.directions();
    const double per_site = 1.0 + double(dirs) * lambda;
    struct OriginEvent {
        double time;
        int dir; // -1 for a cross, else the direction towards the source
    };
    std::vector<OriginEvent> window;
    for (double t = T + rng.exponential(per_site); t < T + w; t += rng.exponential(per_site)) {
        const double u = rng.uniform() * per_site;
        window.push_back({t, u < 1.0 ? -1 : int(rng.below(std::uint64_t(dirs)))});
    }
    if (window.size() + 1 > 64) fail(ErrorCode::resource_limit, "too many origin events in one window");

    std::vector<std::uint64_t> mask(box.size(), 0);
    std::vector<std::int32_t> slot(box.size(), -1);
    std::vector<std::uint32_t> alive;
    auto touch = [&](std::uint32_t x) {
        if (slot[x] < 0 && mask[x]) {
            slot[x] = std::int32_t(alive.size());
            alive.push_back(x);
        }
    };
    auto clear = [&](std::uint32_t x) {
        mask[x] = 0;
        if (slot[x] < 0) return;
        const std::uint32_t last = alive.back();
        alive[std::size_t(slot[x])] = last;
        slot[last] = slot[x];
        alive.pop_back();
        slot[x] = -1;
    };
    auto pull = [&](std::uint32_t y, int dir) {
        // Arrow x -> y: paths into (y, s) may come from (x, s-).
        const std::uint32_t x = box.neighbor(y, dir);
        if (x == Box::npos) fail(ErrorCode::walker_left_safe_region, "dual reached the box face");
        mask[x] |= mask[y];
        touch(x);
    };

    std::size_t piece = window.size();
    mask[o] |= std::uint64_t(1) << piece;
    touch(o);
    double s = T + w;
    bool in_window = true;
    while (!alive.empty()) {
        const double fixed = piece > 0 ? window[piece - 1].time : (in_window ? T : 0.0);
        const double next = s - rng.exponential(double(alive.size()) * per_site);
        if (in_window && next <= fixed) {
            s = fixed;
            if (piece > 0) {
                const OriginEvent& e = window[--piece];
                if (e.dir < 0)
                    clear(o);
                else
                    pull(o, e.dir);
                mask[o] |= std::uint64_t(1) << (piece);
                touch(o);
            } else {
                in_window = false;
            }
            continue;
        }
        if (next <= 0.0) break;
        s = next;
        const std::uint32_t y = alive[rng.below(alive.size())];
        // Inside the window the origin's events were drawn above.
        if (in_window && y == o) continue;
        if (rng.uniform() * per_site < 1.0)
            clear(y);
        else
            pull(y, int(rng.below(std::uint64_t(dirs))));
    }
    if (alive.empty()) return 0.0;

    // Colours whose set contains another colour's set add nothing to the union.
    const std::size_t colours = window.size() + 1;
    std::vector<std::uint64_t> members;
    for (auto x : alive) members.push_back(mask[x]);
    std::vector<std::size_t> minimal;
    for (std::size_t i = 0; i < colours; ++i) {
        const std::uint64_t bi = std::uint64_t(1) << i;
        bool nonempty = false;
        for (auto m : members) nonempty = nonempty || (m & bi);
        if (!nonempty) continue;
        bool dominated = false;
        for (std::size_t j = 0; j < colours && !dominated; ++j) {
            if (j == i) continue;
            const std::uint64_t bj = std::uint64_t(1) << j;
            bool j_nonempty = false, subset = true, equal = true;
            for (auto m : members) {
                j_nonempty = j_nonempty || (m & bj);
                if ((m & bj) && !(m & bi)) subset = false;
                if (bool(m & bj) != bool(m & bi)) equal = false;
            }
            // A_j strictly inside A_i, or equal with the lower index kept.
            if (j_nonempty && subset && (!equal || j < i)) dominated = true;
        }
        if (!dominated) minimal.push_back(i);
    }
    const double q = 1.0 - density;
    if (minimal.size() > 16) {
        // Rare: fall back to one draw of the initial configuration.
        std::vector<std::uint8_t> eta(members.size());
        for (auto& e : eta) e = rng.bernoulli(density);
        for (auto i : minimal) {
            bool hit = false;
            for (std::size_t k = 0; k < members.size(); ++k) hit = hit || ((members[k] >> i) & 1u && eta[k]);
            if (!hit) return 1.0;
        }
        return 0.0;
    }
    // P(some A_j avoids eta) by inclusion-exclusion over the minimal family.
    double g = 0.0;
    const std::size_t f = minimal.size();
    for (std::uint32_t S = 1; S < (1u << f); ++S) {
        std::uint64_t bits = 0;
        for (std::size_t k = 0; k < f; ++k)
            if (S >> k & 1u) bits |= std::uint64_t(1) << minimal[k];
        std::size_t u = 0;
        for (auto m : members) u += (m & bits) != 0;
        const double term = std::pow(q, double(u));
        g += (std::popcount(S) % 2) ? term : -term;
    }
    return std::clamp(g, 0.0, 1.0);
}

struct CouplingRow {
    std::vector<char> hits;
    std::size_t violations = 0;
};

} // namespace

EstimatorOutput coupling_discrepancy(const CouplingParams& p, const RunSpec& run) {
    const auto grid = detail::sorted_grid(p.T_grid, "T_grid");
    if (!(p.density > 0.0 && p.density <= 1.0)) fail(ErrorCode::validation_error, "density must be in (0, 1]");
    if (!(p.window > 0.0)) fail(ErrorCode::validation_error, "window must be > 0");
    for (std::size_t g = 1; g < grid.size(); ++g)
        if (grid[g] < grid[g - 1] + p.window) fail(ErrorCode::validation_error, "T_grid windows overlap");
    const double horizon = grid.back() + p.window;
    const Box box = Box::cube(p.dimension, std::max(1, safety_pad(p.lambda, horizon, run.pad_factor)));
    const auto origin = std::uint32_t(box.index(Point{}));

    if (p.dual) {
        auto batch = run_replicas<std::vector<double>>(run.replicas, run.threads, [&](std::size_t i) {
            std::vector<double> row;
            for (std::size_t g = 0; g < grid.size(); ++g) {
                Rng rng = run.stream(i, "dual", g);
                row.push_back(dual_window_probability(box, p.lambda, grid[g], p.window, p.density, rng));
            }
            return row;
        });
        EstimatorOutput out;
        out.estimator = "coupling";
        out.stream_roles = {"dual/<T index>"};
        for (double T : grid) out.table.columns.push_back(detail::at("p_cond", "T", T));
        detail::collect(out, batch, run, [](const std::vector<double>& r) { return r; });
        std::vector<double> ps, ses;
        for (double T : grid) {
            const auto col = detail::at("p_cond", "T", T);
            auto e = mean_estimate(out.table.values(col), run.level, detail::at("p_disc", "T", T), col);
            ps.push_back(e.estimate);
            ses.push_back(e.std_error);
            out.estimates.push_back(e);
        }
        TailFit f = fit_tail_estimates(grid, ps, ses, run.level);
        out.checks.push_back({"strictly_decreasing", f.strictly_decreasing(), "conditional window probabilities"});
        out.checks.push_back({"slope_negative", f.status == FitStatus::ok && f.slope_ci_high < 0.0,
                              std::string("status ") + to_string(f.status)});
        if (f.status == FitStatus::degenerate) out.warnings.push_back("coupling: every cell is zero (degenerate)");
        if (f.status == FitStatus::inconclusive) out.warnings.push_back("coupling: InconclusiveFit");
        out.fits.emplace_back("coupling", std::move(f));
        out.values.emplace_back("box_radius", double(box.hi(0)));
        return out;
    }

    auto batch = run_replicas<CouplingRow>(run.replicas, run.threads, [&](std::size_t i) {
        Rng init = run.stream(i, "init");
        Sweeper sw(box, EventCursor(EventGenerator(box, p.lambda, horizon, run.stream(i, "rep"))));
        sw.add_lane(Configuration(box, true));
        sw.add_lane(sample_bernoulli_config(box, p.density, init));
        OriginWatch watch(origin);
        sw.set_listener(&watch);
        CouplingRow row;
        for (double T : grid) {
            sw.advance_to(T);
            watch.hit = (sw.state(origin) & 3u) == 1u;
            watch.window_end = T + p.window;
            watch.active = true;
            sw.advance_to(T + p.window);
            watch.active = false;
            row.hits.push_back(watch.hit);
        }
        sw.set_listener(nullptr);
        row.violations = watch.order_violations;
        return row;
    });

    EstimatorOutput out;
    out.estimator = "coupling";
    out.stream_roles = {"init", "rep"};
    for (double T : grid) out.table.columns.push_back(detail::at("disc", "T", T));
    std::size_t violations = 0;
    detail::collect(out, batch, run, [&](const CouplingRow& r) {
        violations += r.violations;
        return std::vector<double>(r.hits.begin(), r.hits.end());
    });
    const std::size_t n = out.table.rows.size();
    std::vector<std::size_t> hits, trials;
    for (double T : grid) {
        const auto col = detail::at("disc", "T", T);
        auto xs = out.table.values(col);
        std::size_t h = 0;
        for (double x : xs) h += x != 0.0;
        hits.push_back(h);
        trials.push_back(n);
        out.estimates.push_back(proportion_estimate(h, n, run.level, detail::at("p_disc", "T", T), col));
    }
    TailFit f = fit_tail(grid, hits, trials, run.level);
    out.checks.push_back({"order_pathwise", violations == 0, std::to_string(violations) + " order violations"});
    out.checks.push_back({"strictly_decreasing", f.strictly_decreasing(), "empirical window probabilities"});
    out.checks.push_back({"slope_negative", f.status == FitStatus::ok && f.slope_ci_high < 0.0,
                          std::string("status ") + to_string(f.status)});
    if (f.status == FitStatus::degenerate) out.warnings.push_back("coupling: every cell has zero count (degenerate)");
    if (f.status == FitStatus::inconclusive) out.warnings.push_back("coupling: InconclusiveFit");
    out.fits.emplace_back("coupling", std::move(f));
    out.values.emplace_back("box_radius", double(box.hi(0)));
    return out;
}

} // namespace cpwalk
