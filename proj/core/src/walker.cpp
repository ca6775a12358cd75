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

#include "cpwalk/walker.hpp"

#include <algorithm>
#include <cmath>

#include "cpwalk/errors.hpp"
#include "cpwalk/graphical.hpp"

namespace cpwalk {

std::size_t WalkDriver::jumps_by(double t) const {
    return std::size_t(std::upper_bound(jump_times.begin(), jump_times.end(), t) - jump_times.begin());
}

WalkDriver sample_driver(double gamma, double horizon, DriverStreams streams) {
    if (!(gamma > 0.0)) fail(ErrorCode::invalid_argument, "gamma must be > 0");
    if (!(horizon >= 0.0)) fail(ErrorCode::invalid_argument, "horizon must be >= 0");
    WalkDriver d;
    d.gamma = gamma;
    d.horizon = horizon;
    for (double t = streams.jumps.exponential(gamma); t <= horizon; t += streams.jumps.exponential(gamma))
        d.jump_times.push_back(t);
    const std::size_t n = d.jump_times.size();
    d.occupied_draws.resize(n);
    d.vacant_draws.resize(n);
    for (auto& u : d.occupied_draws) u = streams.occupied.uniform();
    for (auto& u : d.vacant_draws) u = streams.vacant.uniform();
    if (streams.single) {
        d.single_draws.resize(n);
        for (auto& u : d.single_draws) u = streams.single->uniform();
    }
    return d;
}

WalkDriver restart_driver(const WalkDriver& driver, double t, std::size_t steps, std::size_t observed) {
    if (steps != driver.jumps_by(t)) fail(ErrorCode::invalid_argument, "restart step count must equal N_t");
    WalkDriver d;
    d.gamma = driver.gamma;
    d.start = t;
    d.horizon = driver.horizon;
    d.jump_times.assign(driver.jump_times.begin() + std::ptrdiff_t(steps), driver.jump_times.end());
    d.occupied_draws.assign(driver.occupied_draws.begin() + std::ptrdiff_t(observed), driver.occupied_draws.end());
    d.vacant_draws.assign(driver.vacant_draws.begin() + std::ptrdiff_t(steps - observed), driver.vacant_draws.end());
    if (!driver.single_draws.empty())
        d.single_draws.assign(driver.single_draws.begin() + std::ptrdiff_t(steps), driver.single_draws.end());
    return d;
}

std::size_t WalkResult::jumps_by(double t) const {
    auto n = std::size_t(std::upper_bound(jump_times.begin(), jump_times.end(), t) - jump_times.begin());
    return std::min(n, steps());
}

int FrozenEnvironment::occupied(const Point& x, double) {
    if (!config_.box().contains(x)) fail(ErrorCode::walker_left_safe_region, "read outside frozen configuration");
    return config_[config_.box().index(x)] ? 1 : 0;
}

int SweepEnvironment::occupied(const Point& x, double t) {
    if (t > sweeper_->time()) sweeper_->advance_to(t);
    else if (t < sweeper_->time()) fail(ErrorCode::time_out_of_range, "environment read in the past");
    const Box& box = sweeper_->box();
    if (!box.contains_with_margin(x, margin_))
        fail(ErrorCode::walker_left_safe_region, "walker read outside the exact region");
    return sweeper_->occupied(box.index(x), lane_) ? 1 : 0;
}

WalkStepper::WalkStepper(const KernelSpec& kernel, const WalkDriver& driver, Point start, bool single_u)
    : kernel_(&kernel), driver_(&driver), single_(single_u), pos_(start) {
    if (single_u && driver.single_draws.size() < driver.jumps())
        fail(ErrorCode::invalid_argument, "driver has no U sequence");
    out_.gamma = driver.gamma;
    out_.start = driver.start;
    out_.path.reserve(driver.jumps() + 1);
    out_.rho.reserve(driver.jumps() + 1);
    out_.path.push_back(start);
    out_.rho.push_back(0);
}

void WalkStepper::step(int b) {
    double u;
    if (single_)
        u = driver_->single_draws[k_];
    else
        u = b ? driver_->occupied_draws[rho_] : driver_->vacant_draws[k_ - rho_];
    pos_ = pos_ + kernel_->sample_jump(b, u);
    rho_ += std::size_t(b);
    ++k_;
    out_.path.push_back(pos_);
    out_.rho.push_back(std::uint32_t(rho_));
}

WalkResult WalkStepper::result() const {
    WalkResult r = out_;
    r.jump_times.assign(driver_->jump_times.begin(), driver_->jump_times.begin() + std::ptrdiff_t(k_));
    return r;
}

namespace {

WalkResult walk(const KernelSpec& kernel, Environment& env, const WalkDriver& driver, Point start, bool single) {
    WalkStepper st(kernel, driver, start, single);
    while (!st.done()) st.step(env.occupied(st.position(), st.next_time()));
    return st.result();
}

} // namespace

WalkResult run_walk(const KernelSpec& kernel, Environment& env, const WalkDriver& driver, Point start) {
    return walk(kernel, env, driver, start, false);
}

WalkResult run_walk_single_u(const KernelSpec& kernel, Environment& env, const WalkDriver& driver, Point start) {
    return walk(kernel, env, driver, start, true);
}

void ObservationContext::require(double t) const {
    if (t > time_) fail(ErrorCode::observer_contract_violation, "observer requested data after J_k");
}

WalkResult run_walk_general(const KernelSpec& kernel, Environment& env, const WalkDriver& driver, Observer& observer,
                            Point start) {
    WalkStepper st(kernel, driver, start);
    while (!st.done()) {
        ObservationContext ctx(st.step_index(), st.position(), st.next_time(), env);
        int f = observer.observe(ctx);
        if (f != 0 && f != 1) fail(ErrorCode::observer_contract_violation, "observer returned a non-Boolean value");
        st.step(f);
    }
    return st.result();
}

std::vector<std::size_t> ObservationLog::gaps() const {
    std::vector<std::size_t> g;
    g.reserve(times.size());
    std::size_t prev = 0;
    for (auto t : times) {
        g.push_back(t - prev);
        prev = t;
    }
    return g;
}

RightmostObserver::RightmostObserver(SweepEnvironment& env) : env_(&env) {
    Sweeper& sw = env.sweeper();
    if (sw.box().dim() != 1) fail(ErrorCode::dimension_mismatch, "rightmost observer needs d = 1");
    tracker_ = std::make_unique<RightmostTracker>(sw, env.lane());
    tracker_->restart(0);
    sw.set_listener(tracker_.get());
}

RightmostObserver::~RightmostObserver() {
    env_->sweeper().set_listener(nullptr);
}

int RightmostObserver::observe(const ObservationContext& ctx) {
    Sweeper& sw = env_->sweeper();
    ctx.require(ctx.time());
    if (ctx.time() > sw.time()) sw.advance_to(ctx.time());
    const std::optional<int> front = tracker_->value();
    fronts_.push_back(front);
    const int s = ctx.position()[0];
    const bool sees = front && s <= *front;
    int f = 0;
    if (sees) {
        f = ctx.occupied(ctx.position(), ctx.time());
        log_.times.push_back(ctx.step() + 1);
        tracker_->restart(s);
    } else {
        tracker_->restart(front);
    }
    return f;
}

struct SlabEnvironment::Slab {
    std::unique_ptr<Sweeper> sweeper;
    int offset = 0;
};

namespace {

Box slab_region(const SlabFamilySpec& s) {
    Point lo{}, hi{};
    lo[0] = -s.K + int(std::floor(std::min(0.0, s.L * s.horizon)));
    hi[0] = s.K + int(std::ceil(std::max(0.0, s.L * s.horizon)));
    for (int a = 1; a < s.dimension; ++a) {
        lo[a] = -s.width;
        hi[a] = s.width;
    }
    return Box(s.dimension, lo, hi);
}

Configuration slab_section(const Box& box, const SlabSpec& slab) {
    Configuration c(box, false);
    for (std::uint32_t i = 0; i < box.size(); ++i)
        if (slab.contains(box.coord(i, 0), 0.0)) c.set(i, true);
    return c;
}

} // namespace

SlabEnvironment::SlabEnvironment(SlabFamilySpec spec, std::function<Rng(std::int64_t)> streams)
    : spec_(spec), streams_(std::move(streams)) {
    if (spec.dimension < 2) fail(ErrorCode::dimension_mismatch, "slab observer needs d >= 2");
}

SlabEnvironment::SlabEnvironment(SlabFamilySpec spec, std::function<EventCursor()> shared_events,
                                 const Box& shared_box)
    : spec_(spec), shared_(std::move(shared_events)), shared_box_(shared_box) {
    if (spec.dimension < 2 || shared_box.dim() != spec.dimension)
        fail(ErrorCode::dimension_mismatch, "slab observer needs d >= 2");
}

SlabEnvironment::~SlabEnvironment() = default;

std::size_t SlabEnvironment::created() const { return slabs_.size(); }

SlabEnvironment::Slab& SlabEnvironment::slab(std::int64_t i) {
    for (auto& [idx, s] : slabs_)
        if (idx == i) return *s;
    auto s = std::make_unique<Slab>();
    const int center = int(2 * spec_.K * i);
    if (shared_box_) {
        SlabSpec spec{spec_.K, spec_.L, center};
        s->sweeper = std::make_unique<Sweeper>(*shared_box_, shared_(), 0.0);
        s->sweeper->set_slab(spec);
        s->sweeper->add_lane(slab_section(*shared_box_, spec));
        s->offset = 0;
    } else {
        Box box = slab_region(spec_);
        SlabSpec spec{spec_.K, spec_.L, 0};
        s->sweeper = std::make_unique<Sweeper>(box, EventCursor(EventGenerator(box, spec_.lambda, spec_.horizon,
                                                                               streams_(i))), 0.0);
        s->sweeper->set_slab(spec);
        s->sweeper->add_lane(slab_section(box, spec));
        s->offset = center;
    }
    slabs_.emplace_back(i, std::move(s));
    return *slabs_.back().second;
}

std::int64_t SlabEnvironment::slab_of(int x0, double t) const {
    const double y = double(x0) - spec_.L * t;
    return std::int64_t(std::ceil((y - double(spec_.K)) / (2.0 * spec_.K)));
}

std::optional<std::int64_t> SlabEnvironment::slab_of_window(int x0, double a, double b) const {
    if (a < 0.0) return std::nullopt;
    // y(s) = x0 - L s is monotone, so the window's y-range has endpoints at a and b.
    const double ya = double(x0) - spec_.L * a, yb = double(x0) - spec_.L * b;
    const double lo = std::min(ya, yb), hi = std::max(ya, yb);
    std::int64_t i = std::int64_t(std::ceil((hi - double(spec_.K)) / (2.0 * spec_.K)));
    const double c = 2.0 * double(spec_.K) * double(i);
    if (lo >= c - spec_.K && hi <= c + spec_.K) return i;
    return std::nullopt;
}

int SlabEnvironment::occupied_in(std::int64_t i, const Point& x, double t) {
    Slab& s = slab(i);
    Sweeper& sw = *s.sweeper;
    if (t > sw.time()) sw.advance_to(t);
    else if (t < sw.time()) fail(ErrorCode::time_out_of_range, "slab read in the past");
    Point local = x;
    local[0] -= s.offset;
    if (!sw.box().contains_with_margin(local, 0))
        fail(ErrorCode::walker_left_safe_region, "walker read outside the slab region");
    for (int a = 1; a < spec_.dimension; ++a)
        if (std::abs(local[a]) > spec_.width - spec_.margin)
            fail(ErrorCode::walker_left_safe_region, "walker read outside the slab region");
    return sw.occupied(sw.box().index(local), 0) ? 1 : 0;
}

int SlabEnvironment::occupied(const Point& x, double t) { return occupied_in(slab_of(x[0], t), x, t); }

SlabObserver::SlabObserver(SlabEnvironment& env, double delta) : env_(&env), delta_(delta), label_(1) {
    if (delta < 0.0) fail(ErrorCode::invalid_argument, "look-back delta must be >= 0");
}

int SlabObserver::observe(const ObservationContext& ctx) {
    const int x0 = ctx.position()[0];
    const double t = ctx.time();
    const std::int64_t point_slab = env_->slab_of(x0, t);
    std::optional<std::int64_t> window_slab;
    if (delta_ == 0.0)
        window_slab = point_slab;
    else
        window_slab = env_->slab_of_window(x0, t - delta_, t);
    int f = 0;
    if (window_slab && *window_slab < label_) {
        ctx.require(t);
        f = env_->occupied_in(*window_slab, ctx.position(), t);
    }
    labels_.push_back(label_);
    if (point_slab < label_) {
        label_ = point_slab;
        log_.times.push_back(ctx.step() + 1);
    }
    return f;
}

} // namespace cpwalk
