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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "cpwalk/configuration.hpp"
#include "cpwalk/graphical.hpp"
#include "cpwalk/kernel.hpp"
#include "cpwalk/rng.hpp"
#include "cpwalk/sweeper.hpp"

namespace cpwalk {

/// The walker's randomness. Jump times are absolute; a restarted driver keeps
/// the original clock and starts at `start`.
struct WalkDriver {
    double gamma = 0.0;
    double start = 0.0;
    double horizon = 0.0;
    std::vector<double> jump_times;
    std::vector<double> occupied_draws;
    std::vector<double> vacant_draws;
    std::vector<double> single_draws;

    std::size_t jumps() const { return jump_times.size(); }
    /// N_t: number of jumps in (start, t].
    std::size_t jumps_by(double t) const;
};

struct DriverStreams {
    Rng jumps;
    Rng occupied;
    Rng vacant;
    std::optional<Rng> single;
};

WalkDriver sample_driver(double gamma, double horizon, DriverStreams streams);

/// Driver seen from time t after the first `steps` jumps, `observed` of which
/// read an occupied site: N^{(t)}, O^{(t)}, V^{(t)}.
WalkDriver restart_driver(const WalkDriver& driver, double t, std::size_t steps, std::size_t observed);

struct WalkResult {
    double gamma = 0.0;
    double start = 0.0;
    std::vector<Point> path;
    std::vector<double> jump_times;
    std::vector<std::uint32_t> rho;

    std::size_t steps() const { return path.size() - 1; }
    std::size_t jumps_by(double t) const;
    const Point& position_at(double t) const { return path[jumps_by(t)]; }
    /// rho_t = rho(N_t) / gamma.
    double rho_at(double t) const { return double(rho[jumps_by(t)]) / gamma; }
    std::size_t occupied_used(std::size_t k) const { return rho[k]; }
    std::size_t vacant_used(std::size_t k) const { return k - rho[k]; }
};

/// Read access to xi_t(x) with nondecreasing t.
class Environment {
public:
    virtual ~Environment() = default;
    virtual int occupied(const Point& x, double t) = 0;
};

/// Same value at every site and time.
class ConstantEnvironment : public Environment {
public:
    explicit ConstantEnvironment(int value) : value_(value) {}
    int occupied(const Point&, double) override { return value_; }

private:
    int value_;
};

/// A fixed configuration; reading outside its box is a safe-region violation.
class FrozenEnvironment : public Environment {
public:
    explicit FrozenEnvironment(Configuration c) : config_(std::move(c)) {}
    int occupied(const Point& x, double t) override;

private:
    Configuration config_;
};

/// One lane of a sweep. Reads closer than `margin` to a truncated face abort.
class SweepEnvironment : public Environment {
public:
    SweepEnvironment(Sweeper& sweeper, int lane, int margin) : sweeper_(&sweeper), lane_(lane), margin_(margin) {}
    int occupied(const Point& x, double t) override;
    Sweeper& sweeper() { return *sweeper_; }
    int lane() const { return lane_; }
    int margin() const { return margin_; }

private:
    Sweeper* sweeper_;
    int lane_;
    int margin_;
};

/// Iterates the O/V construction one jump at a time.
class WalkStepper {
public:
    WalkStepper(const KernelSpec& kernel, const WalkDriver& driver, Point start = {}, bool single_u = false);

    bool done() const { return k_ == driver_->jumps(); }
    std::size_t step_index() const { return k_; }
    double next_time() const { return driver_->jump_times[k_]; }
    const Point& position() const { return pos_; }
    std::size_t observed() const { return rho_; }
    /// Applies observation b in {0,1} at step k and jumps.
    void step(int b);
    WalkResult result() const;

private:
    const KernelSpec* kernel_;
    const WalkDriver* driver_;
    bool single_;
    std::size_t k_ = 0;
    std::size_t rho_ = 0;
    Point pos_;
    WalkResult out_;
};

WalkResult run_walk(const KernelSpec& kernel, Environment& env, const WalkDriver& driver, Point start = {});
WalkResult run_walk_single_u(const KernelSpec& kernel, Environment& env, const WalkDriver& driver, Point start = {});

/// What an observer may see at step k. Reads are limited to times <= J_k.
class ObservationContext {
public:
    ObservationContext(std::size_t k, const Point& position, double time, Environment& env)
        : k_(k), position_(position), time_(time), env_(&env) {}

    std::size_t step() const { return k_; }
    const Point& position() const { return position_; }
    double time() const { return time_; }
    /// Throws ObserverContractViolation for t > J_k.
    void require(double t) const;
    int occupied(const Point& x, double t) const {
        require(t);
        return env_->occupied(x, t);
    }
    Environment& environment() const { return *env_; }

private:
    std::size_t k_;
    Point position_;
    double time_;
    Environment* env_;
};

class Observer {
public:
    virtual ~Observer() = default;
    virtual int observe(const ObservationContext& ctx) = 0;
};

class IdentityObserver : public Observer {
public:
    int observe(const ObservationContext& ctx) override { return ctx.occupied(ctx.position(), ctx.time()); }
};

class ConstantObserver : public Observer {
public:
    explicit ConstantObserver(int value) : value_(value) {}
    int observe(const ObservationContext&) override { return value_; }

private:
    int value_;
};

/// f_k = gate(k) * xi_{J_k}(S_k).
class GatedObserver : public Observer {
public:
    explicit GatedObserver(std::function<bool(const ObservationContext&)> gate) : gate_(std::move(gate)) {}
    int observe(const ObservationContext& ctx) override {
        return gate_(ctx) ? ctx.occupied(ctx.position(), ctx.time()) : 0;
    }

private:
    std::function<bool(const ObservationContext&)> gate_;
};

/// Walk with f_k from the observer; rho holds rho^{(d)}(k).
WalkResult run_walk_general(const KernelSpec& kernel, Environment& env, const WalkDriver& driver, Observer& observer,
                            Point start = {});

/// Observation-time bookkeeping shared by the section-4 observers.
struct ObservationLog {
    /// T_1 < T_2 < ...
    std::vector<std::size_t> times;
    std::vector<std::size_t> gaps() const;
};

/// d = 1 rightmost-particle observer on a sweep lane.
class RightmostObserver : public Observer {
public:
    explicit RightmostObserver(SweepEnvironment& env);
    ~RightmostObserver() override;

    int observe(const ObservationContext& ctx) override;
    const std::vector<std::optional<int>>& fronts() const { return fronts_; }
    const ObservationLog& log() const { return log_; }

private:
    SweepEnvironment* env_;
    std::unique_ptr<RightmostTracker> tracker_;
    std::vector<std::optional<int>> fronts_;
    ObservationLog log_;
};

/// Family of slab processes zeta^{(i)} on slabs 2Ki + S_{K,L}.
struct SlabFamilySpec {
    int K = 1;
    double L = 0.0;
    int dimension = 2;
    /// Half-width of the region in the other coordinates.
    int width = 1;
    int margin = 0;
    double lambda = 1.0;
    double horizon = 1.0;
};

/// Composite environment reading zeta^{(i)} for the slab containing (x,t).
/// Slab processes are created on first use: either on an independent stream
/// per slab, or as truncated sweeps of one shared event stream that the
/// factory replays from the start.
class SlabEnvironment : public Environment {
public:
    SlabEnvironment(SlabFamilySpec spec, std::function<Rng(std::int64_t)> streams);
    SlabEnvironment(SlabFamilySpec spec, std::function<EventCursor()> shared_events, const Box& shared_box);
    ~SlabEnvironment() override;

    int occupied(const Point& x, double t) override;
    /// Reads zeta^{(i)} at (x,t); (x,t) must lie in slab i.
    int occupied_in(std::int64_t slab, const Point& x, double t);

    /// Lowest slab index whose closed slab contains (x0, t).
    std::int64_t slab_of(int x0, double t) const;
    /// Lowest slab containing {x0} x [a, b).
    std::optional<std::int64_t> slab_of_window(int x0, double a, double b) const;
    const SlabFamilySpec& spec() const { return spec_; }
    std::size_t created() const;

private:
    struct Slab;
    Slab& slab(std::int64_t i);

    SlabFamilySpec spec_;
    std::function<Rng(std::int64_t)> streams_;
    std::function<EventCursor()> shared_;
    std::optional<Box> shared_box_;
    std::vector<std::pair<std::int64_t, std::unique_ptr<Slab>>> slabs_;
};

/// Slab observer: non-tilted when delta = 0, tilted with look-back delta.
class SlabObserver : public Observer {
public:
    SlabObserver(SlabEnvironment& env, double delta);

    int observe(const ObservationContext& ctx) override;
    const ObservationLog& log() const { return log_; }
    const std::vector<std::int64_t>& labels() const { return labels_; }

private:
    SlabEnvironment* env_;
    double delta_;
    std::int64_t label_;
    std::vector<std::int64_t> labels_;
    ObservationLog log_;
};

} // namespace cpwalk
