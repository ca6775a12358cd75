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
#include <limits>

#include "cpwalk/errors.hpp"
#include "cpwalk/sweeper.hpp"
#include "internal.hpp"

namespace cpwalk {

namespace {

bool differs(std::uint8_t s) { return ((s ^ (s >> 1)) & 1u) != 0; }

// Exact mode: per-norm counts of discrepant sites. The cone grows between
// events, so the last in-cone time is read off just before each event.
class ConeWatch : public SweepListener {
public:
    ConeWatch(const std::vector<int>& norm, double m, int max_norm) : norm_(&norm), m_(m), count_(max_norm + 2, 0) {}

    void seed(std::uint32_t site) { add(site); }

    void on_event(const Event& e, std::uint32_t target, std::uint8_t before, std::uint8_t after) override {
        probe(e.time);
        const bool b = differs(before), a = differs(after);
        if (b && !a) remove(target);
        if (!b && a) add(target);
    }

    void probe(double t) {
        if (min_ < count_.size() && double(min_) < m_ * t) last = std::max(last, t);
    }

    double last = -std::numeric_limits<double>::infinity();

private:
    void add(std::uint32_t site) {
        const auto n = std::size_t((*norm_)[site]);
        if (n >= count_.size()) return;
        ++count_[n];
        min_ = std::min(min_, n);
    }
    void remove(std::uint32_t site) {
        const auto n = std::size_t((*norm_)[site]);
        if (n >= count_.size()) return;
        --count_[n];
        while (min_ < count_.size() && count_[min_] == 0) ++min_;
    }

    const std::vector<int>* norm_;
    double m_;
    std::vector<std::uint32_t> count_;
    std::size_t min_ = std::numeric_limits<std::size_t>::max();
};

} // namespace

EstimatorOutput cone_mixing_phi(const ConeParams& p, const RunSpec& run) {
    const auto grid = detail::sorted_grid(p.T_grid, "T_grid");
    if (!(p.m > 0.0)) fail(ErrorCode::validation_error, "m must be > 0");
    if (p.reference != 0 && p.reference != 1) fail(ErrorCode::validation_error, "reference must be 0 or 1");
    if (!(p.extra_horizon >= 0.0)) fail(ErrorCode::validation_error, "extra_horizon must be >= 0");
    if (!p.exact && !(p.grid_step > 0.0)) fail(ErrorCode::validation_error, "grid_step must be > 0");
    const double horizon = grid.back() + p.extra_horizon;
    const int cone = int(std::ceil(p.m * horizon));
    const double lead = initial_lead(p.eta);
    const Box box = Box::cube(p.dimension, cone + std::max(1, safety_pad(p.lambda, horizon + lead, run.pad_factor)));
    std::vector<int> norm(box.size());
    for (std::uint32_t s = 0; s < box.size(); ++s) norm[s] = l1_norm(box.point(s));
    std::vector<double> times;
    if (!p.exact) {
        for (long j = 1;; ++j) {
            const double t = double(j) * p.grid_step;
            if (t > horizon + 1e-12) break;
            times.push_back(t);
        }
    }

    // Latest time <= horizon with a discrepancy inside the cone, or -inf.
    auto batch = run_replicas<double>(run.replicas, run.threads, [&](std::size_t i) {
        Sweeper sw(box, EventCursor(EventGenerator(box, p.lambda, horizon, run.stream(i, "rep"))));
        sw.add_lane(sample_initial(box, p.eta, p.lambda, run.stream(i, "init")));
        sw.add_lane(Configuration(box, p.reference == 1));
        if (p.exact) {
            ConeWatch watch(norm, p.m, cone);
            for (std::uint32_t s = 0; s < box.size(); ++s)
                if (differs(sw.state(s))) watch.seed(s);
            sw.set_listener(&watch);
            sw.advance_to(horizon);
            sw.set_listener(nullptr);
            watch.probe(horizon);
            return watch.last;
        }
        double last = -std::numeric_limits<double>::infinity();
        for (double t : times) {
            sw.advance_to(t);
            const double r = p.m * t;
            for (std::uint32_t s = 0; s < box.size(); ++s) {
                if (double(norm[s]) < r && differs(sw.state(s))) {
                    last = t;
                    break;
                }
            }
        }
        return last;
    });

    EstimatorOutput out;
    out.estimator = "conemix";
    out.stream_roles = {"init", "rep"};
    out.table.columns = {"last_discrepancy"};
    for (double T : grid) out.table.columns.push_back(detail::at("hit", "T", T));
    detail::collect(out, batch, run, [&](double last) {
        std::vector<double> row{std::isfinite(last) ? last : -1.0};
        for (double T : grid) row.push_back(p.exact ? double(last > T) : double(last >= T));
        return row;
    });
    const std::size_t n = out.table.rows.size();
    std::vector<double> phi;
    for (double T : grid) {
        const auto col = detail::at("hit", "T", T);
        auto xs = out.table.values(col);
        std::size_t h = 0;
        for (double x : xs) h += x != 0.0;
        out.estimates.push_back(proportion_estimate(h, n, run.level, detail::at("phi", "T", T), col));
        phi.push_back(double(h) / double(std::max<std::size_t>(n, 1)));
    }
    bool nonincreasing = true;
    for (std::size_t g = 1; g < phi.size(); ++g) nonincreasing = nonincreasing && phi[g] <= phi[g - 1];
    out.checks.push_back({"phi_nonincreasing", nonincreasing, "sup over a shrinking time set"});
    out.values.emplace_back("horizon", horizon);
    out.values.emplace_back("box_radius", double(box.hi(0)));
    out.values.emplace_back("exact", p.exact ? 1.0 : 0.0);
    if (!p.exact) out.warnings.push_back("grid mode: phi is a lower bound of the continuous-time value");
    return out;
}

} // namespace cpwalk
