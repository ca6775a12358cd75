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

#include "cpwalk/sweeper.hpp"

#include "cpwalk/errors.hpp"

namespace cpwalk {

Sweeper::Sweeper(Box box, EventCursor events, double start_time)
    : box_(std::move(box)), cursor_(std::move(events)), time_(start_time), state_(box_.size(), 0) {
    cursor_.skip_through(start_time);
}

int Sweeper::add_lane(const Configuration& initial, double keep_probability) {
    if (lanes_ == kMaxLanes) fail(ErrorCode::resource_limit, "at most 8 lanes per sweep");
    if (!(initial.box() == box_)) fail(ErrorCode::invalid_argument, "lane configuration on a different box");
    const int lane = lanes_++;
    threshold_[std::size_t(lane)] = mark_threshold(keep_probability);
    if (keep_probability < 1.0) thin_ = true;
    reset_lane(lane, initial);
    return lane;
}

void Sweeper::reset_lane(int lane, const Configuration& c) {
    const auto bit = std::uint8_t(1u << lane);
    for (std::uint32_t i = 0; i < state_.size(); ++i) {
        bool on = c[i] && (!slab_ || slab_->contains(box_.coord(i, 0), time_));
        state_[i] = std::uint8_t(on ? (state_[i] | bit) : (state_[i] & ~bit));
    }
}

void Sweeper::set_slab(const SlabSpec& slab) {
    if (slab.K < 1) fail(ErrorCode::invalid_argument, "slab half-width K must be >= 1");
    slab_ = slab;
    next_low_ = box_.lo(0);
    next_high_ = box_.hi(0);
    for (std::uint32_t i = 0; i < state_.size(); ++i)
        if (state_[i] && !slab.contains(box_.coord(i, 0), time_)) clear_site(i, time_);
}

std::size_t Sweeper::population(int lane) const {
    std::size_t n = 0;
    for (auto v : state_) n += (v >> lane) & 1u;
    return n;
}

bool Sweeper::lane_empty(int lane) const {
    const auto bit = std::uint8_t(1u << lane);
    for (auto v : state_)
        if (v & bit) return false;
    return true;
}

void Sweeper::clear_site(std::uint32_t site, double t) {
    std::uint8_t before = state_[site];
    if (!before) return;
    state_[site] = 0;
    if (listener_) listener_->on_event(Event::cross(t, site), site, before, 0);
}

void Sweeper::clear_exits(double t) {
    const SlabSpec& s = *slab_;
    const std::uint32_t stride = std::uint32_t(box_.extent(0));
    auto clear_column = [&](int c) {
        for (std::uint32_t i = std::uint32_t(c - box_.lo(0)); i < state_.size(); i += stride) clear_site(i, t);
    };
    if (s.L > 0.0) {
        while (next_low_ <= box_.hi(0) && !s.contains(next_low_, t) && double(next_low_ - s.center) < s.L * t)
            clear_column(next_low_++);
    } else if (s.L < 0.0) {
        while (next_high_ >= box_.lo(0) && !s.contains(next_high_, t) && double(next_high_ - s.center) > s.L * t)
            clear_column(next_high_--);
    }
}

template <bool Slab, bool Thin, bool Listen>
void Sweeper::run(double t) {
    const bool tilted = Slab && slab_->L != 0.0;
    for (const Event* e = cursor_.peek(); e && e->time <= t; e = cursor_.peek()) {
        const Event ev = *e;
        cursor_.pop();
        ++applied_;
        if constexpr (Slab) {
            if (tilted) clear_exits(ev.time);
        }
        if (ev.is_cross()) {
            std::uint8_t before = state_[ev.site];
            state_[ev.site] = 0;
            if constexpr (Listen) listener_->on_event(ev, ev.site, before, 0);
            continue;
        }
        std::uint8_t src = state_[ev.site];
        if (!src && !Listen) continue;
        const std::uint32_t dst = box_.neighbor(ev.site, ev.direction());
        if (dst == Box::npos) continue;
        if constexpr (Slab) {
            if (!slab_->contains(box_.coord(ev.site, 0), ev.time) || !slab_->contains(box_.coord(dst, 0), ev.time))
                continue;
        }
        std::uint8_t bits = src;
        if constexpr (Thin) {
            const std::uint32_t m = ev.mark();
            std::uint8_t active = 0;
            for (int l = 0; l < lanes_; ++l) active |= std::uint8_t((m < threshold_[std::size_t(l)]) << l);
            bits &= active;
        }
        std::uint8_t before = state_[dst];
        std::uint8_t after = before | bits;
        state_[dst] = after;
        if constexpr (Listen) listener_->on_event(ev, dst, before, after);
    }
}

void Sweeper::advance_to(double t) {
    if (t < time_) fail(ErrorCode::time_out_of_range, "sweep cannot move backwards in time");
    const bool slab = slab_.has_value();
    const bool listen = listener_ != nullptr;
    if (slab) {
        if (thin_) {
            listen ? run<true, true, true>(t) : run<true, true, false>(t);
        } else {
            listen ? run<true, false, true>(t) : run<true, false, false>(t);
        }
        if (slab_->L != 0.0) clear_exits(t);
    } else {
        if (thin_) {
            listen ? run<false, true, true>(t) : run<false, true, false>(t);
        } else {
            listen ? run<false, false, true>(t) : run<false, false, false>(t);
        }
    }
    time_ = t;
}

Configuration Sweeper::configuration(int lane) const {
    Configuration c(box_, false);
    for (std::uint32_t i = 0; i < state_.size(); ++i)
        if ((state_[i] >> lane) & 1u) c.set(i, true);
    return c;
}

} // namespace cpwalk
