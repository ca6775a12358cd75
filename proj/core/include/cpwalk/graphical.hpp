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

#include <optional>
#include <span>
#include <vector>

#include "cpwalk/configuration.hpp"
#include "cpwalk/events.hpp"
#include "cpwalk/sweeper.hpp"

namespace cpwalk {

/// Piecewise-constant trajectory: the initial state and every bit flip.
struct EvolveTrace {
    struct Change {
        double time;
        std::uint32_t site;
        bool value;
    };
    Configuration initial;
    std::vector<Change> changes;

    Configuration state_at(double t) const;
};

/// Occupied set of C_{t1}(A, t0): events in (t0, t1] swept forward.
Configuration evolve(const GraphicalRep& rep, const Configuration& initial, double t0, double t1,
                     EvolveTrace* trace = nullptr);

std::vector<Configuration> coupled_evolve(const GraphicalRep& rep, std::span<const Configuration> initials,
                                          double t0, double t1);

/// Backward process: x occupied iff x at time t - s reaches some y in B at time t.
Configuration dual_evolve(const GraphicalRep& rep, const Configuration& targets, double t, double s);

Configuration truncated_evolve(const GraphicalRep& rep, const SlabSpec& slab, const Configuration& initial,
                               double t1);

/// r_{s,t}(z) in d = 1: rightmost site at time t reached from sites <= z
/// occupied at time s. Empty optional when nothing survives.
std::optional<int> rightmost(const GraphicalRep& rep, const Configuration& initial, int z, double s, double t);

/// Rightmost occupied site <= z in a d = 1 lane, if any.
std::optional<int> rightmost_occupied(const Sweeper& sweeper, int lane, int z);

/// Approximate upper-invariant sample: 1-bar evolved for burn_in on a fresh stream.
Configuration sample_upper_invariant(const Box& box, double lambda, double burn_in, Rng rng);

/// Tracks r_{s,t}(z) along a d = 1 sweep without re-evolving: the masked
/// process's rightmost particle moves right only along an arrow r -> r+1 and,
/// when crossed, falls back to the rightmost occupied site of the full lane.
class RightmostTracker : public SweepListener {
public:
    RightmostTracker(const Sweeper& sweeper, int lane) : sweeper_(&sweeper), lane_(lane) {}

    /// Restarts the mask at z at the sweeper's current time.
    void restart(std::optional<int> z);
    std::optional<int> value() const;

    void on_event(const Event& e, std::uint32_t target, std::uint8_t before, std::uint8_t after) override;

private:
    std::optional<std::uint32_t> scan_left(std::int64_t from) const;

    const Sweeper* sweeper_;
    int lane_;
    std::optional<std::uint32_t> r_;
};

} // namespace cpwalk
