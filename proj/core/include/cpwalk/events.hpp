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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpwalk/lattice.hpp"
#include "cpwalk/rng.hpp"

namespace cpwalk {

/// Marks used for arrow thinning have 28 bits.
inline constexpr std::uint32_t kMarkScale = 1u << 28;

/// Keep threshold for probability p: an arrow survives iff mark < threshold.
std::uint32_t mark_threshold(double keep_probability);

struct Event {
    double time = 0.0;
    std::uint32_t site = 0;
    /// bits 0-3: 0 for a cross, dir + 1 for an arrow; bits 4-31: thinning mark.
    std::uint32_t tag = 0;

    bool is_cross() const { return (tag & 0xfu) == 0; }
    int direction() const { return int(tag & 0xfu) - 1; }
    std::uint32_t mark() const { return tag >> 4; }

    static Event cross(double t, std::uint32_t site) { return {t, site, 0}; }
    static Event arrow(double t, std::uint32_t site, int dir, std::uint32_t mark = 0) {
        return {t, site, std::uint32_t(dir + 1) | (mark << 4)};
    }
};
static_assert(sizeof(Event) == 16);

/// Streams the superposed Poisson events of a box in time order.
///
/// Total rate is |box| * (1 + 2d lambda); arrows leaving a truncated box are
/// drawn and discarded so the retained events keep the exact law.
class EventGenerator {
public:
    /// Events fall in (start_time, horizon].
    EventGenerator(const Box& box, double lambda, double horizon, Rng rng, bool with_marks = false,
                   double start_time = 0.0);

    /// Writes the next event; false once the horizon is passed.
    bool next(Event& out);
    /// Writes up to capacity events; returns the count (short only at the horizon).
    std::size_t fill(Event* out, std::size_t capacity);

    const Box& box() const { return box_; }
    double lambda() const { return lambda_; }
    double horizon() const { return horizon_; }
    double total_rate() const { return total_rate_; }

private:
    Box box_;
    double lambda_;
    double horizon_;
    Rng rng_;
    bool marks_;
    double total_rate_;
    double inv_rate_;
    double time_ = 0.0;
    std::uint32_t sites_;
    std::uint64_t cross_cut_;
    std::uint64_t dirs_;
    double arrow_scale_;
};

struct StreamRecord {
    std::string label;
    std::uint64_t key = 0;
};

/// Materialized graphical representation: a time-ordered event list on a box.
class GraphicalRep {
public:
    GraphicalRep() = default;
    /// Validates times in [0, horizon], nondecreasing order and site range.
    GraphicalRep(Box box, double lambda, double horizon, std::vector<Event> events, StreamRecord seed = {});

    const Box& box() const { return box_; }
    double lambda() const { return lambda_; }
    double horizon() const { return horizon_; }
    const StreamRecord& seed() const { return seed_; }
    std::span<const Event> events() const { return events_; }

    std::size_t cross_count() const;
    std::size_t arrow_count() const;
    std::vector<double> cross_times(std::uint32_t site) const;
    std::vector<double> arrow_times(std::uint32_t site, int dir) const;

    /// Index of the first event with time > t.
    std::size_t first_after(double t) const;

private:
    Box box_;
    double lambda_ = 0.0;
    double horizon_ = 0.0;
    std::vector<Event> events_;
    StreamRecord seed_;
};

struct RepBudget {
    double max_expected_events = 2.0e8;
};

GraphicalRep sample_rep(const Box& box, double lambda, double horizon, Rng rng, const RepBudget& budget = {},
                        bool with_marks = true, StreamRecord seed = {});

/// Keeps each arrow iff its mark falls below lambda_new / lambda.
GraphicalRep thin_rep(const GraphicalRep& rep, double lambda_new);

/// Translates a rep on a periodic box by offset.
GraphicalRep shift_rep(const GraphicalRep& rep, const Point& offset);

/// Forward-only reader over a materialized event list or a generator.
/// Generated events are produced in batches.
class EventCursor {
public:
    explicit EventCursor(std::span<const Event> events);
    explicit EventCursor(EventGenerator generator);
    EventCursor(EventCursor&& o) noexcept;
    EventCursor& operator=(EventCursor&& o) noexcept;

    const Event* peek() const { return cur_ != end_ ? cur_ : nullptr; }
    void pop() {
        if (++cur_ == end_) refill();
    }
    /// Drops every event with time <= t.
    void skip_through(double t);

private:
    static constexpr std::size_t kBatch = 256;
    void refill();

    std::optional<EventGenerator> gen_;
    std::vector<Event> buffer_;
    const Event* cur_ = nullptr;
    const Event* end_ = nullptr;
};

} // namespace cpwalk
