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

#include "cpwalk/graphical.hpp"

#include <algorithm>

#include "cpwalk/errors.hpp"

namespace cpwalk {

namespace {

void check_window(const GraphicalRep& rep, double t0, double t1) {
    if (!(t0 >= 0.0 && t0 <= t1 && t1 <= rep.horizon()))
        fail(ErrorCode::time_out_of_range, "need 0 <= t0 <= t1 <= horizon");
}

void check_box(const GraphicalRep& rep, const Configuration& c) {
    if (!(c.box() == rep.box())) fail(ErrorCode::invalid_argument, "configuration and rep boxes differ");
}

class TraceListener : public SweepListener {
public:
    explicit TraceListener(EvolveTrace& trace) : trace_(trace) {}
    void on_event(const Event& e, std::uint32_t target, std::uint8_t before, std::uint8_t after) override {
        if ((before & 1u) != (after & 1u)) trace_.changes.push_back({e.time, target, (after & 1u) != 0});
    }

private:
    EvolveTrace& trace_;
};

} // namespace

Configuration EvolveTrace::state_at(double t) const {
    Configuration c = initial;
    for (const auto& ch : changes) {
        if (ch.time > t) break;
        c.set(ch.site, ch.value);
    }
    return c;
}

Configuration evolve(const GraphicalRep& rep, const Configuration& initial, double t0, double t1, EvolveTrace* trace) {
    check_window(rep, t0, t1);
    check_box(rep, initial);
    Sweeper sweep(rep.box(), EventCursor(rep.events()), t0);
    sweep.add_lane(initial);
    std::optional<TraceListener> listener;
    if (trace) {
        trace->initial = initial;
        trace->changes.clear();
        listener.emplace(*trace);
        sweep.set_listener(&*listener);
    }
    sweep.advance_to(t1);
    return sweep.configuration(0);
}

std::vector<Configuration> coupled_evolve(const GraphicalRep& rep, std::span<const Configuration> initials,
                                          double t0, double t1) {
    check_window(rep, t0, t1);
    std::vector<Configuration> out;
    out.reserve(initials.size());
    for (std::size_t first = 0; first < initials.size(); first += Sweeper::kMaxLanes) {
        Sweeper sweep(rep.box(), EventCursor(rep.events()), t0);
        std::size_t last = std::min(initials.size(), first + Sweeper::kMaxLanes);
        for (std::size_t i = first; i < last; ++i) {
            check_box(rep, initials[i]);
            sweep.add_lane(initials[i]);
        }
        sweep.advance_to(t1);
        for (std::size_t i = first; i < last; ++i) out.push_back(sweep.configuration(int(i - first)));
    }
    return out;
}

Configuration dual_evolve(const GraphicalRep& rep, const Configuration& targets, double t, double s) {
    if (!(s >= 0.0 && s <= t && t <= rep.horizon())) fail(ErrorCode::time_out_of_range, "need 0 <= s <= t <= horizon");
    check_box(rep, targets);
    const Box& box = rep.box();
    Configuration d = targets;
    auto events = rep.events();
    const double lo = t - s;
    std::size_t i = rep.first_after(t);
    while (i > 0) {
        const Event& e = events[--i];
        if (e.time <= lo) break;
        if (e.is_cross()) {
            d.set(e.site, false);
            continue;
        }
        std::uint32_t y = box.neighbor(e.site, e.direction());
        if (y != Box::npos && d[y]) d.set(e.site, true);
    }
    return d;
}

Configuration truncated_evolve(const GraphicalRep& rep, const SlabSpec& slab, const Configuration& initial,
                               double t1) {
    check_window(rep, 0.0, t1);
    check_box(rep, initial);
    const Box& box = rep.box();
    for (std::uint32_t i = 0; i < box.size(); ++i)
        if (initial[i] && !slab.contains(box.coord(i, 0), 0.0))
            fail(ErrorCode::invalid_argument, "initial configuration not supported on the slab section");
    Sweeper sweep(box, EventCursor(rep.events()), 0.0);
    sweep.set_slab(slab);
    sweep.add_lane(initial);
    sweep.advance_to(t1);
    return sweep.configuration(0);
}

std::optional<int> rightmost_occupied(const Sweeper& sweeper, int lane, int z) {
    const Box& box = sweeper.box();
    if (z < box.lo(0)) return std::nullopt;
    int x = std::min(z, box.hi(0));
    for (std::uint32_t i = std::uint32_t(x - box.lo(0)) + 1; i-- > 0;)
        if (sweeper.occupied(i, lane)) return box.lo(0) + int(i);
    return std::nullopt;
}

std::optional<int> rightmost(const GraphicalRep& rep, const Configuration& initial, int z, double s, double t) {
    if (rep.box().dim() != 1) fail(ErrorCode::dimension_mismatch, "rightmost needs d = 1");
    check_window(rep, s, t);
    check_window(rep, 0.0, s);
    Configuration at_s = evolve(rep, initial, 0.0, s);
    const Box& box = rep.box();
    for (std::uint32_t i = 0; i < box.size(); ++i)
        if (box.coord(i, 0) > z) at_s.set(i, false);
    Configuration at_t = evolve(rep, at_s, s, t);
    for (std::uint32_t i = std::uint32_t(box.size()); i-- > 0;)
        if (at_t[i]) return box.coord(i, 0);
    return std::nullopt;
}

Configuration sample_upper_invariant(const Box& box, double lambda, double burn_in, Rng rng) {
    if (!(lambda > 0.0) || !(burn_in > 0.0)) fail(ErrorCode::invalid_argument, "need lambda > 0 and burn_in > 0");
    Sweeper sweep(box, EventCursor(EventGenerator(box, lambda, burn_in, std::move(rng))));
    sweep.add_lane(Configuration::ones(box));
    sweep.advance_to(burn_in);
    return sweep.configuration(0);
}

void RightmostTracker::restart(std::optional<int> z) {
    if (!z) {
        r_.reset();
        return;
    }
    const Box& box = sweeper_->box();
    if (*z < box.lo(0)) {
        r_.reset();
        return;
    }
    r_ = scan_left(std::int64_t(std::min(*z, box.hi(0)) - box.lo(0)));
}

std::optional<int> RightmostTracker::value() const {
    if (!r_) return std::nullopt;
    return sweeper_->box().lo(0) + int(*r_);
}

std::optional<std::uint32_t> RightmostTracker::scan_left(std::int64_t from) const {
    for (std::int64_t i = from; i >= 0; --i)
        if (sweeper_->occupied(std::uint32_t(i), lane_)) return std::uint32_t(i);
    return std::nullopt;
}

void RightmostTracker::on_event(const Event& e, std::uint32_t target, std::uint8_t before, std::uint8_t after) {
    if (!r_) return;
    const auto bit = std::uint8_t(1u << lane_);
    if (e.is_cross()) {
        if (target == *r_ && (before & bit)) r_ = scan_left(std::int64_t(*r_) - 1);
        return;
    }
    // An arrow r -> r+1 carries the masked process one step right.
    if (e.site == *r_ && e.direction() == 0 && (after & bit)) r_ = target;
}

} // namespace cpwalk
