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

#include "cpwalk/oracles.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <sstream>

#include "cpwalk/errors.hpp"
#include "cpwalk/graphical.hpp"

namespace cpwalk::oracle {

namespace {

bool in_slab(const Box& box, const SlabSpec* slab, std::uint32_t site, double t) {
    return !slab || slab->contains(box.coord(site, 0), t);
}

// Enumerates every path leaving (site, from); each survivor at t is recorded.
void search(const GraphicalRep& rep, std::uint32_t site, double from, double t, const SlabSpec* slab,
            std::set<std::uint32_t>& out) {
    const Box& box = rep.box();
    for (const Event& e : rep.events()) {
        if (e.time <= from) continue;
        if (e.time > t) break;
        if (!in_slab(box, slab, site, e.time)) return;
        if (e.site != site) continue;
        if (e.is_cross()) return;
        const std::uint32_t y = box.neighbor(site, e.direction());
        if (y == Box::npos) continue;
        if (slab && !in_slab(box, slab, y, e.time)) continue;
        search(rep, y, e.time, t, slab, out);
    }
    if (in_slab(box, slab, site, t)) out.insert(site);
}

} // namespace

std::vector<std::uint32_t> reachable(const GraphicalRep& rep, std::uint32_t x, double s, double t,
                                     const SlabSpec* slab) {
    std::set<std::uint32_t> out;
    if (in_slab(rep.box(), slab, x, s)) search(rep, x, s, t, slab, out);
    return {out.begin(), out.end()};
}

bool connected(const GraphicalRep& rep, std::uint32_t x, double s, std::uint32_t y, double t, const SlabSpec* slab) {
    const auto r = reachable(rep, x, s, t, slab);
    return std::binary_search(r.begin(), r.end(), y);
}

Configuration evolve(const GraphicalRep& rep, const Configuration& initial, double t0, double t1) {
    Configuration out(rep.box(), false);
    for (std::uint32_t x = 0; x < initial.size(); ++x)
        if (initial[x])
            for (auto y : reachable(rep, x, t0, t1)) out.set(y, true);
    return out;
}

Configuration dual_evolve(const GraphicalRep& rep, const Configuration& targets, double t, double s) {
    Configuration out(rep.box(), false);
    for (std::uint32_t x = 0; x < targets.size(); ++x)
        for (auto y : reachable(rep, x, t - s, t))
            if (targets[y]) out.set(x, true);
    return out;
}

Configuration truncated_evolve(const GraphicalRep& rep, const SlabSpec& slab, const Configuration& initial,
                               double t1) {
    Configuration out(rep.box(), false);
    for (std::uint32_t x = 0; x < initial.size(); ++x)
        if (initial[x])
            for (auto y : reachable(rep, x, 0.0, t1, &slab)) out.set(y, true);
    return out;
}

std::optional<int> rightmost(const GraphicalRep& rep, const Configuration& initial, int z, double s, double t) {
    const Box& box = rep.box();
    const Configuration at_s = oracle::evolve(rep, initial, 0.0, s);
    std::optional<int> best;
    for (std::uint32_t x = 0; x < at_s.size(); ++x) {
        if (!at_s[x] || box.coord(x, 0) > z) continue;
        for (auto y : reachable(rep, x, s, t)) {
            const int c = box.coord(y, 0);
            if (!best || c > *best) best = c;
        }
    }
    return best;
}

std::optional<WalkResult> walk(const KernelSpec& kernel, const GraphicalRep& rep, const Configuration& initial,
                               const WalkDriver& driver) {
    const Box& box = rep.box();
    WalkResult r;
    r.gamma = driver.gamma;
    r.start = driver.start;
    Point pos{};
    std::size_t rho = 0;
    r.path.push_back(pos);
    r.rho.push_back(0);
    for (std::size_t k = 0; k < driver.jumps(); ++k) {
        const double J = driver.jump_times[k];
        if (!box.contains(pos)) return std::nullopt;
        const std::uint32_t here = box.index(pos);
        int b = 0;
        for (std::uint32_t x = 0; x < initial.size() && !b; ++x)
            if (initial[x] && connected(rep, x, 0.0, here, J)) b = 1;
        const double u = b ? driver.occupied_draws[rho] : driver.vacant_draws[k - rho];
        const auto cdf = kernel.cdf(b);
        std::size_t n = 0;
        while (n + 1 < cdf.size() && !(u < cdf[n])) ++n;
        pos = pos + kernel.atoms()[n];
        rho += std::size_t(b);
        r.path.push_back(pos);
        r.rho.push_back(std::uint32_t(rho));
        r.jump_times.push_back(J);
    }
    return r;
}

Instance random_instance(Rng& rng, const InstanceLimits& lim) {
    const int d = 1 + int(rng.below(std::uint64_t(lim.max_dim)));
    const int R = 1 + int(rng.below(std::uint64_t(lim.max_radius)));
    const Boundary bc = lim.allow_periodic && rng.bernoulli(0.3) ? Boundary::periodic : Boundary::truncate;
    const Box box = Box::cube(d, R, bc);
    const double horizon = lim.max_horizon * (0.25 + 0.75 * rng.uniform_open0());
    const int n = int(rng.below(std::uint64_t(lim.max_events) + 1));
    std::vector<Event> events;
    for (int i = 0; i < n; ++i) {
        const double t = horizon * rng.uniform_open0();
        const auto site = std::uint32_t(rng.below(box.size()));
        if (rng.bernoulli(0.35))
            events.push_back(Event::cross(t, site));
        else
            events.push_back(Event::arrow(t, site, int(rng.below(std::uint64_t(box.directions())))));
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.time < b.time; });
    Instance ins;
    ins.rep = GraphicalRep(box, 1.0, horizon, std::move(events), {"oracle", 0});
    ins.a = sample_bernoulli_config(box, 0.2 + 0.6 * rng.uniform(), rng);
    ins.b = sample_bernoulli_config(box, 0.1 + 0.5 * rng.uniform(), rng);
    double u = horizon * rng.uniform(), v = horizon * rng.uniform();
    ins.t0 = std::min(u, v);
    ins.t1 = std::max(u, v);
    ins.z = box.lo(0) + int(rng.below(std::uint64_t(box.extent(0))));
    return ins;
}

namespace {

std::string describe(const Instance& ins) {
    std::ostringstream os;
    const Box& box = ins.rep.box();
    os << "d=" << box.dim() << " R=" << box.hi(0) << " " << to_string(box.boundary()) << " horizon=" << ins.rep.horizon()
       << " events=" << ins.rep.events().size() << " t0=" << ins.t0 << " t1=" << ins.t1 << " z=" << ins.z;
    return os.str();
}

class Suite {
public:
    explicit Suite(std::string name) { r_.name = std::move(name); }
    void record(bool ok, const Instance& ins) {
        ++r_.total;
        if (ok)
            ++r_.passed;
        else if (r_.failures.size() < 5)
            r_.failures.push_back(describe(ins));
    }
    SuiteResult result() const { return r_; }

private:
    SuiteResult r_;
};

} // namespace

std::vector<SuiteResult> run_suites(std::uint64_t seed, std::size_t instances, const InstanceLimits& limits) {
    const RngPolicy policy(seed);
    Suite ev("evolve"), du("dual_evolve"), rm("rightmost"), tr("truncated_evolve"), wk("walk");
    const KernelSpec k1 = build_kernel(nearest_neighbour_drift_kernel(2.0, 1.0), 1);
    std::vector<RateEntry> sym;
    for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 2; ++a)
            for (int sign : {1, -1}) {
                std::vector<int> z(2, 0);
                z[std::size_t(a)] = sign;
                sym.push_back({s, z, s == 1 && a == 0 && sign == 1 ? 2.0 : 1.0});
            }
    const KernelSpec k2 = build_kernel(sym, 2);

    for (std::size_t i = 0; i < instances; ++i) {
        Rng rng = policy.stream({"oracle", i, "instance", 0});
        Instance ins = random_instance(rng, limits);
        const GraphicalRep& rep = ins.rep;
        const Box& box = rep.box();

        ev.record(cpwalk::evolve(rep, ins.a, ins.t0, ins.t1) == oracle::evolve(rep, ins.a, ins.t0, ins.t1), ins);

        const double s = ins.t1 - ins.t0;
        du.record(cpwalk::dual_evolve(rep, ins.b, ins.t1, s) == oracle::dual_evolve(rep, ins.b, ins.t1, s), ins);

        if (box.dim() == 1 && box.boundary() == Boundary::truncate)
            rm.record(cpwalk::rightmost(rep, ins.a, ins.z, ins.t0, ins.t1) == oracle::rightmost(rep, ins.a, ins.z, ins.t0, ins.t1),
                      ins);

        if (box.boundary() == Boundary::truncate) {
            SlabSpec slab{1 + int(rng.below(2)), rng.bernoulli(0.5) ? 0.0 : (rng.uniform() - 0.5) * 2.0, 0};
            Configuration init = ins.a;
            for (std::uint32_t x = 0; x < init.size(); ++x)
                if (!slab.contains(box.coord(x, 0), 0.0)) init.set(x, false);
            tr.record(cpwalk::truncated_evolve(rep, slab, init, ins.t1) == oracle::truncated_evolve(rep, slab, init, ins.t1),
                      ins);

            const KernelSpec& k = box.dim() == 1 ? k1 : k2;
            WalkDriver drv = sample_driver(k.gamma(), rep.horizon(),
                                           DriverStreams{policy.stream({"oracle", i, "jumps", 0}),
                                                         policy.stream({"oracle", i, "O", 0}),
                                                         policy.stream({"oracle", i, "V", 0}), std::nullopt});
            std::optional<WalkResult> lib;
            Sweeper sw(box, EventCursor(rep.events()));
            sw.add_lane(ins.a);
            SweepEnvironment env(sw, 0, 0);
            try {
                lib = run_walk(k, env, drv);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::walker_left_safe_region) throw;
            }
            const auto ref = walk(k, rep, ins.a, drv);
            bool ok = lib.has_value() == ref.has_value();
            if (ok && lib) ok = lib->path == ref->path && lib->rho == ref->rho && lib->jump_times == ref->jump_times;
            wk.record(ok, ins);
        }
    }
    return {ev.result(), du.result(), rm.result(), tr.result(), wk.result()};
}

int oracle_check(std::uint64_t seed, std::size_t instances, std::ostream& log) {
    bool all = true;
    for (const auto& r : run_suites(seed, instances)) {
        log << r.name << ": " << r.passed << "/" << r.total << " agree with the path-search oracle\n";
        for (const auto& f : r.failures) log << "  mismatch: " << f << "\n";
        all = all && r.ok();
    }
    log << (all ? "oracle-check: all suites pass\n" : "oracle-check: FAILED\n");
    return all ? 0 : 1;
}

} // namespace cpwalk::oracle
