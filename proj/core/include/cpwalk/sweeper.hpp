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

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "cpwalk/configuration.hpp"
#include "cpwalk/events.hpp"

namespace cpwalk {

/// Space-time slab {(x,t): x_1 in [center - K + L t, center + K + L t]}.
struct SlabSpec {
    int K = 1;
    double L = 0.0;
    int center = 0;

    bool contains(int x0, double t) const {
        double s = double(x0 - center) - L * t;
        return s >= -double(K) && s <= double(K);
    }
};

class SweepListener {
public:
    virtual ~SweepListener() = default;
    /// Called for every applied event; target is the changed site (the
    /// arrow head, or the crossed site). Slab exits arrive as crosses.
    virtual void on_event(const Event& e, std::uint32_t target, std::uint8_t before, std::uint8_t after) = 0;
};

/// Forward event sweep over up to eight coupled configurations ("lanes").
///
/// Every lane sees the same crosses. A lane with keep probability p < 1 uses
/// only arrows whose mark is below the thinning threshold, which realizes the
/// lambda-thinning coupling on one event stream.
class Sweeper {
public:
    static constexpr int kMaxLanes = 8;

    Sweeper(Box box, EventCursor events, double start_time = 0.0);

    int add_lane(const Configuration& initial, double keep_probability = 1.0);
    void reset_lane(int lane, const Configuration& c);
    /// Restricts arrows to the slab and keeps sites outside it vacant.
    void set_slab(const SlabSpec& slab);
    void set_listener(SweepListener* listener) { listener_ = listener; }

    /// Applies all events with time <= t.
    void advance_to(double t);

    double time() const { return time_; }
    const Box& box() const { return box_; }
    int lanes() const { return lanes_; }
    bool occupied(std::uint32_t site, int lane) const { return (state_[site] >> lane) & 1u; }
    std::uint8_t state(std::uint32_t site) const { return state_[site]; }
    /// Occupied sites of a lane (linear scan).
    std::size_t population(int lane) const;
    bool lane_empty(int lane) const;
    Configuration configuration(int lane) const;
    std::uint64_t applied_events() const { return applied_; }
    const std::optional<SlabSpec>& slab() const { return slab_; }

private:
    template <bool Slab, bool Thin, bool Listen>
    void run(double t);
    void clear_exits(double t);
    void clear_site(std::uint32_t site, double t);

    Box box_;
    EventCursor cursor_;
    double time_;
    std::vector<std::uint8_t> state_;
    int lanes_ = 0;
    std::array<std::uint32_t, kMaxLanes> threshold_{};
    bool thin_ = false;
    std::optional<SlabSpec> slab_;
    int next_low_ = 0;
    int next_high_ = 0;
    SweepListener* listener_ = nullptr;
    std::uint64_t applied_ = 0;
};

} // namespace cpwalk
