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

#include "cpwalk/events.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cpwalk/errors.hpp"
#include "cpwalk/ziggurat.hpp"

namespace cpwalk {

std::uint32_t mark_threshold(double keep_probability) {
    if (!(keep_probability > 0.0)) return 0;
    if (keep_probability >= 1.0) return kMarkScale;
    return std::uint32_t(std::floor(keep_probability * double(kMarkScale)));
}

EventGenerator::EventGenerator(const Box& box, double lambda, double horizon, Rng rng, bool with_marks,
                               double start_time)
    : box_(box), lambda_(lambda), horizon_(horizon), rng_(std::move(rng)), marks_(with_marks), time_(start_time) {
    if (!(start_time >= 0.0)) fail(ErrorCode::invalid_argument, "start time must be >= 0");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail(ErrorCode::invalid_argument, "lambda must be >= 0");
    if (!(horizon >= 0.0)) fail(ErrorCode::invalid_argument, "horizon must be >= 0");
    sites_ = std::uint32_t(box.size());
    const double per_site = 1.0 + double(box.directions()) * lambda;
    total_rate_ = double(box.size()) * per_site;
    inv_rate_ = 1.0 / total_rate_;
    double cut = std::floor(0x1.0p32 / per_site);
    cross_cut_ = std::uint64_t(std::min(cut, 0x1.0p32));
    dirs_ = std::uint64_t(box.directions());
    arrow_scale_ = cross_cut_ < (std::uint64_t(1) << 32) ? double(dirs_) / (0x1.0p32 - double(cross_cut_)) : 0.0;
}

bool EventGenerator::next(Event& out) {
    for (;;) {
        time_ += exp_ziggurat(rng_.engine()) * inv_rate_;
        if (time_ > horizon_) {
            time_ = std::numeric_limits<double>::infinity();
            return false;
        }
        std::uint64_t w = rng_.next_u64();
        // High half picks the site (Lemire), low half picks the event kind.
        std::uint64_t m = (w >> 32) * sites_;
        if (std::uint32_t(m) < sites_) {
            std::uint32_t t = (0u - sites_) % sites_;
            while (std::uint32_t(m) < t) m = (rng_.next_u64() >> 32) * sites_;
        }
        auto site = std::uint32_t(m >> 32);
        std::uint64_t k = w & 0xffffffffull;
        if (k < cross_cut_) {
            out = Event::cross(time_, site);
            return true;
        }
        auto dir = std::uint64_t(double(k - cross_cut_) * arrow_scale_);
        if (dir >= dirs_) dir = dirs_ - 1;
        std::uint32_t mark = marks_ ? std::uint32_t(rng_.next_u64() >> 36) : 0u;
        if (box_.neighbor(site, int(dir)) == Box::npos) continue;
        out = Event::arrow(time_, site, int(dir), mark);
        return true;
    }
}

GraphicalRep::GraphicalRep(Box box, double lambda, double horizon, std::vector<Event> events, StreamRecord seed)
    : box_(std::move(box)), lambda_(lambda), horizon_(horizon), events_(std::move(events)), seed_(std::move(seed)) {
    double prev = 0.0;
    for (const auto& e : events_) {
        if (!(e.time >= 0.0 && e.time <= horizon_)) fail(ErrorCode::time_out_of_range, "event time outside [0, horizon]");
        if (e.time < prev) fail(ErrorCode::invalid_argument, "events must be in time order");
        if (e.site >= box_.size()) fail(ErrorCode::invalid_argument, "event site outside box");
        if (!e.is_cross() && e.direction() >= box_.directions())
            fail(ErrorCode::invalid_argument, "arrow direction out of range");
        prev = e.time;
    }
}

std::size_t GraphicalRep::cross_count() const {
    return std::size_t(std::count_if(events_.begin(), events_.end(), [](const Event& e) { return e.is_cross(); }));
}

std::size_t GraphicalRep::arrow_count() const { return events_.size() - cross_count(); }

std::vector<double> GraphicalRep::cross_times(std::uint32_t site) const {
    std::vector<double> out;
    for (const auto& e : events_)
        if (e.site == site && e.is_cross()) out.push_back(e.time);
    return out;
}

std::vector<double> GraphicalRep::arrow_times(std::uint32_t site, int dir) const {
    std::vector<double> out;
    for (const auto& e : events_)
        if (e.site == site && !e.is_cross() && e.direction() == dir) out.push_back(e.time);
    return out;
}

std::size_t GraphicalRep::first_after(double t) const {
    auto it = std::upper_bound(events_.begin(), events_.end(), t,
                               [](double v, const Event& e) { return v < e.time; });
    return std::size_t(it - events_.begin());
}

GraphicalRep sample_rep(const Box& box, double lambda, double horizon, Rng rng, const RepBudget& budget,
                        bool with_marks, StreamRecord seed) {
    if (!(lambda > 0.0)) fail(ErrorCode::invalid_argument, "lambda must be > 0");
    if (!(horizon > 0.0)) fail(ErrorCode::invalid_argument, "horizon must be > 0");
    if (seed.key == 0) seed.key = rng.key();
    EventGenerator gen(box, lambda, horizon, std::move(rng), with_marks);
    double expected = gen.total_rate() * horizon;
    if (expected > budget.max_expected_events)
        fail(ErrorCode::resource_limit, "expected event count " + std::to_string(expected) + " exceeds budget");
    std::vector<Event> events;
    events.reserve(std::size_t(expected * 1.05 + 64));
    Event e;
    while (gen.next(e)) events.push_back(e);
    return GraphicalRep(box, lambda, horizon, std::move(events), std::move(seed));
}

GraphicalRep thin_rep(const GraphicalRep& rep, double lambda_new) {
    if (!(lambda_new > 0.0) || lambda_new > rep.lambda())
        fail(ErrorCode::invalid_argument, "thinning needs 0 < lambda' <= lambda");
    const std::uint32_t thr = mark_threshold(lambda_new / rep.lambda());
    std::vector<Event> kept;
    kept.reserve(rep.events().size());
    for (const auto& e : rep.events())
        if (e.is_cross() || e.mark() < thr) kept.push_back(e);
    return GraphicalRep(rep.box(), lambda_new, rep.horizon(), std::move(kept), rep.seed());
}

GraphicalRep shift_rep(const GraphicalRep& rep, const Point& offset) {
    const Box& box = rep.box();
    if (box.boundary() != Boundary::periodic) fail(ErrorCode::invalid_argument, "shift_rep needs a periodic box");
    std::vector<Event> out(rep.events().begin(), rep.events().end());
    for (auto& e : out) e.site = box.index(box.wrap(box.point(e.site) + offset));
    return GraphicalRep(box, rep.lambda(), rep.horizon(), std::move(out), rep.seed());
}

std::size_t EventGenerator::fill(Event* out, std::size_t capacity) {
    std::size_t n = 0;
    while (n < capacity && next(out[n])) ++n;
    return n;
}

EventCursor::EventCursor(std::span<const Event> events) : cur_(events.data()), end_(events.data() + events.size()) {}

EventCursor::EventCursor(EventGenerator generator) : gen_(std::move(generator)), buffer_(kBatch) { refill(); }

EventCursor::EventCursor(EventCursor&& o) noexcept { *this = std::move(o); }

EventCursor& EventCursor::operator=(EventCursor&& o) noexcept {
    if (o.gen_) {
        const std::size_t off = std::size_t(o.cur_ - o.buffer_.data());
        const std::size_t len = std::size_t(o.end_ - o.buffer_.data());
        gen_ = std::move(o.gen_);
        buffer_ = std::move(o.buffer_);
        cur_ = buffer_.data() + off;
        end_ = buffer_.data() + len;
    } else {
        gen_.reset();
        buffer_.clear();
        cur_ = o.cur_;
        end_ = o.end_;
    }
    o.cur_ = o.end_ = nullptr;
    return *this;
}

void EventCursor::refill() {
    if (!gen_) return;
    const std::size_t n = gen_->fill(buffer_.data(), buffer_.size());
    cur_ = buffer_.data();
    end_ = cur_ + n;
}

void EventCursor::skip_through(double t) {
    if (!gen_) {
        cur_ = std::upper_bound(cur_, end_, t, [](double v, const Event& e) { return v < e.time; });
        return;
    }
    for (const Event* e = peek(); e && e->time <= t; e = peek()) pop();
}

} // namespace cpwalk
