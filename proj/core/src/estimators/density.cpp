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
#include <memory>

#include "cpwalk/errors.hpp"
#include "cpwalk/graphical.hpp"
#include "cpwalk/walker.hpp"
#include "internal.hpp"

namespace cpwalk {

namespace {

constexpr std::size_t kTauBins = 20;

struct DensityRow {
    double density_t = 0.0, density_2t = 0.0;
    double tau_t = 0.0, tau_2t = 0.0;
    double new_label_rate = 0.0;
    std::size_t observations = 0;
    std::size_t violations = 0;
    std::size_t env_violations = 0;
    std::vector<std::size_t> gaps;
};

// Mean gap among observations made in the first `steps` jumps; 0 if none.
double mean_tau(const ObservationLog& log, std::size_t steps) {
    std::size_t count = 0, last = 0;
    for (auto t : log.times) {
        if (t > steps) break;
        ++count;
        last = t;
    }
    return count ? double(last) / double(count) : 0.0;
}

double ratio(std::size_t a, std::size_t b) { return b ? double(a) / double(b) : 0.0; }

} // namespace

EstimatorOutput positive_density_lower_bound(const DensityParams& p, const RunSpec& run) {
    if (!(p.horizon > 0.0)) fail(ErrorCode::validation_error, "horizon must be > 0");
    const KernelSpec& k = p.kernel;
    const int d = k.dimension();
    const double T = p.horizon, T2 = 2.0 * p.horizon;
    const bool d1 = p.observer == ObserverKind::d1_rightmost;
    if (d1 && d != 1) fail(ErrorCode::dimension_mismatch, "d1_rightmost observer needs a d = 1 kernel");
    if (!d1 && d < 2) fail(ErrorCode::dimension_mismatch, "slab observer needs d >= 2");
    if (!d1 && p.K < 1) fail(ErrorCode::validation_error, "K must be >= 1");
    if (!d1 && p.shared && p.initial.law != InitialLaw::ones)
        fail(ErrorCode::validation_error, "shared slab mode compares against a 1-bar environment");
    const double lead = d1 ? initial_lead(p.initial) : 0.0;
    const int pad = safety_pad(p.lambda, T2 + lead, run.pad_factor);
    const int reach = walk_reach(k, T2);
    const Box box = Box::cube(d, reach + pad);

    auto batch = run_replicas<DensityRow>(run.replicas, run.threads, [&](std::size_t i) {
        WalkDriver drv = sample_driver(k.gamma(), T2, detail::driver_streams(run, i));
        WalkStepper obs_walk(k, drv), ref_walk(k, drv);
        DensityRow row;
        const ObservationLog* log = nullptr;
        std::size_t new_labels = 0;

        std::unique_ptr<Sweeper> sw;
        std::unique_ptr<SweepEnvironment> xi;
        std::unique_ptr<RightmostObserver> rightmost;
        std::unique_ptr<SlabEnvironment> slabs;
        std::unique_ptr<SlabObserver> slab_obs;
        std::unique_ptr<WalkStepper> xi_walk;
        Environment* ref_env = nullptr;
        Observer* observer = nullptr;

        if (d1) {
            Configuration init = mask_left_of(sample_initial(box, p.initial, p.lambda, run.stream(i, "init")), 0);
            sw = std::make_unique<Sweeper>(box, EventCursor(EventGenerator(box, p.lambda, T2, run.stream(i, "rep"))));
            sw->add_lane(init);
            xi = std::make_unique<SweepEnvironment>(*sw, 0, pad);
            rightmost = std::make_unique<RightmostObserver>(*xi);
            observer = rightmost.get();
            ref_env = xi.get();
            log = &rightmost->log();
        } else {
            SlabFamilySpec fam{p.K, p.L, d, reach + pad, pad, p.lambda, T2};
            if (p.shared) {
                auto factory = [&, i] { return EventCursor(EventGenerator(box, p.lambda, T2, run.stream(i, "rep"))); };
                slabs = std::make_unique<SlabEnvironment>(fam, factory, box);
                sw = std::make_unique<Sweeper>(box, factory());
                sw->add_lane(Configuration(box, true));
                xi = std::make_unique<SweepEnvironment>(*sw, 0, pad);
                xi_walk = std::make_unique<WalkStepper>(k, drv);
            } else {
                const std::uint64_t base = std::uint64_t(1) << 32;
                slabs = std::make_unique<SlabEnvironment>(
                    fam, [&, i](std::int64_t s) { return run.stream(i, "slab", base + std::uint64_t(s)); });
            }
            slab_obs = std::make_unique<SlabObserver>(*slabs, p.delta);
            observer = slab_obs.get();
            ref_env = slabs.get();
            log = &slab_obs->log();
        }

        std::size_t nt = 0;
        while (!obs_walk.done()) {
            const double j = obs_walk.next_time();
            if (j <= T) nt = obs_walk.step_index() + 1;
            const std::size_t before = log->times.size();
            ObservationContext ctx(obs_walk.step_index(), obs_walk.position(), j, d1 ? static_cast<Environment&>(*xi)
                                                                                     : *slabs);
            const int f = observer->observe(ctx);
            if (f != 0 && f != 1) fail(ErrorCode::observer_contract_violation, "observer returned a non-Boolean value");
            new_labels += log->times.size() - before;
            const int b = ref_env->occupied(ref_walk.position(), j);
            if (xi_walk) {
                const int c = xi->occupied(xi_walk->position(), j);
                xi_walk->step(c);
            }
            obs_walk.step(f);
            ref_walk.step(b);
            if (obs_walk.observed() > ref_walk.observed()) ++row.violations;
            if (xi_walk && ref_walk.observed() > xi_walk->observed()) ++row.env_violations;
        }
        const std::size_t n2 = obs_walk.step_index();
        WalkResult res = obs_walk.result();
        row.density_t = ratio(res.rho[nt], nt);
        row.density_2t = ratio(res.rho[n2], n2);
        row.tau_t = mean_tau(*log, nt);
        row.tau_2t = mean_tau(*log, n2);
        row.observations = log->times.size();
        row.new_label_rate = ratio(new_labels, n2);
        row.gaps = log->gaps();
        return row;
    });

    EstimatorOutput out;
    out.estimator = "density-lb";
    out.stream_roles = {"jumps", "O", "V"};
    if (d1) out.stream_roles.insert(out.stream_roles.end(), {"init", "rep"});
    else if (p.shared) out.stream_roles.push_back("rep");
    else out.stream_roles.push_back("slab/<2^32+i>");
    out.table.columns = {detail::at("density", "t", T), detail::at("density", "t", T2), detail::at("tau_mean", "t", T),
                         detail::at("tau_mean", "t", T2), "observations", "observation_rate", "violations",
                         "env_violations"};
    std::size_t violations = 0, env_violations = 0;
    std::vector<std::size_t> hist(kTauBins + 1, 0);
    detail::collect(out, batch, run, [&](const DensityRow& r) {
        violations += r.violations;
        env_violations += r.env_violations;
        for (auto g : r.gaps) ++hist[std::min(g, kTauBins + 1) - 1];
        return std::vector<double>{r.density_t, r.density_2t, r.tau_t, r.tau_2t, double(r.observations),
                                   r.new_label_rate, double(r.violations), double(r.env_violations)};
    });
    for (const auto& col : out.table.columns) {
        if (col == "violations" || col == "env_violations" || col == "observations") continue;
        out.estimates.push_back(mean_estimate(out.table.values(col), run.level, col, col));
    }
    out.checks.push_back({"observer_le_rho_pathwise", violations == 0,
                          std::to_string(violations) + " steps with rho_obs(k) > rho(k)"});
    if (!d1 && p.shared)
        out.checks.push_back({"zeta_le_xi_pathwise", env_violations == 0,
                              std::to_string(env_violations) + " steps with rho(k, zeta) > rho(k, xi)"});
    const auto* dens = out.estimate(detail::at("density", "t", T2));
    out.checks.push_back({"density_positive", dens->ci_low > 0.0, "CI low " + detail::fmt(dens->ci_low)});
    {
        auto a = out.table.values(detail::at("tau_mean", "t", T));
        auto b = out.table.values(detail::at("tau_mean", "t", T2));
        std::vector<double> diff;
        for (std::size_t j = 0; j < a.size(); ++j)
            if (a[j] > 0.0 && b[j] > 0.0) diff.push_back(b[j] - a[j]);
        auto dr = mean_estimate(diff, run.level, "tau_mean_diff");
        out.estimates.push_back(dr);
        out.checks.push_back({"tau_stable", dr.ci_contains(0.0),
                              "paired difference CI [" + detail::fmt(dr.ci_low) + ", " + detail::fmt(dr.ci_high) + "]"});
    }
    if (!d1) {
        const auto* rate = out.estimate("observation_rate");
        out.checks.push_back({"observation_rate_positive", rate->ci_low > 0.0, "CI low " + detail::fmt(rate->ci_low)});
    }
    for (std::size_t b = 0; b < kTauBins; ++b)
        out.values.emplace_back("tau_hist[" + std::to_string(b + 1) + "]", double(hist[b]));
    out.values.emplace_back("tau_hist[>" + std::to_string(kTauBins) + "]", double(hist[kTauBins]));
    out.values.emplace_back("box_radius", double(box.hi(0)));
    return out;
}

} // namespace cpwalk
