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

#include "cpwalk/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cpwalk/errors.hpp"

namespace cpwalk {

SparseContact::SparseContact(Box box, double lambda, Rng rng, std::optional<SlabSpec> slab)
    : box_(std::move(box)), lambda_(lambda), rng_(std::move(rng)), slab_(slab), slot_(box_.size(), -1) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail(ErrorCode::invalid_argument, "lambda must be >= 0");
}

void SparseContact::occupy(const Point& x) {
    if (!box_.contains(x)) fail(ErrorCode::invalid_argument, "initial site outside the box");
    if (slab_ && !slab_->contains(x[0], time_)) fail(ErrorCode::invalid_argument, "initial site outside the slab");
    const auto i = std::uint32_t(box_.index(x));
    if (slot_[i] < 0) add(i);
}

void SparseContact::add(std::uint32_t site) {
    slot_[site] = std::int32_t(alive_.size());
    alive_.push_back(site);
}

void SparseContact::remove(std::uint32_t site) {
    const std::int32_t s = slot_[site];
    const std::uint32_t last = alive_.back();
    alive_[std::size_t(s)] = last;
    slot_[last] = s;
    alive_.pop_back();
    slot_[site] = -1;
}

double SparseContact::next_exit() const {
    if (!slab_ || slab_->L == 0.0) return std::numeric_limits<double>::infinity();
    const SlabSpec& s = *slab_;
    // The trailing face passes column c at (c - center + K) / L for L > 0.
    // A face sitting exactly on a column at time_ still counts unless it was
    // already applied.
    if (s.L > 0.0) {
        const double c = std::ceil(double(s.center - s.K) + s.L * time_);
        const double t = (c - double(s.center) + double(s.K)) / s.L;
        return t > last_exit_ ? t : (c + 1.0 - double(s.center) + double(s.K)) / s.L;
    }
    const double c = std::floor(double(s.center + s.K) + s.L * time_);
    const double t = (c - double(s.center) - double(s.K)) / s.L;
    return t > last_exit_ ? t : (c - 1.0 - double(s.center) - double(s.K)) / s.L;
}

void SparseContact::apply_exit(double t) {
    // The face sits on an integer column at t; that column and everything
    // behind it are outside strictly after t.
    const SlabSpec& sl = *slab_;
    const bool forward = sl.L > 0.0;
    const double face = forward ? double(sl.center - sl.K) + sl.L * t : double(sl.center + sl.K) + sl.L * t;
    const int column = int(std::lround(face));
    for (std::size_t k = 0; k < alive_.size();) {
        const std::uint32_t site = alive_[k];
        const int x0 = box_.coord(site, 0);
        if (forward ? x0 <= column : x0 >= column)
            remove(site);
        else
            ++k;
    }
}

bool SparseContact::advance_to(double t) {
    const double per_site = 1.0 + double(box_.directions()) * lambda_;
    const auto dirs = std::uint64_t(box_.directions());
    while (!alive_.empty()) {
        const double rate = double(alive_.size()) * per_site;
        const double next = time_ + rng_.exponential(rate);
        const double exit = next_exit();
        if (exit < t && exit < next) {
            // Memoryless: discard the pending draw and resume after the exit.
            time_ = std::max(time_, exit);
            last_exit_ = exit;
            apply_exit(exit);
            continue;
        }
        if (next > t) break;
        time_ = next;
        ++events_;
        const std::uint32_t site = alive_[rng_.below(alive_.size())];
        if (rng_.uniform() * per_site < 1.0) {
            remove(site);
            continue;
        }
        const int dir = int(rng_.below(dirs));
        const std::uint32_t y = box_.neighbor(site, dir);
        if (y == Box::npos || slot_[y] >= 0) continue;
        if (slab_ && !slab_->contains(box_.coord(y, 0), time_)) continue;
        add(y);
    }
    if (time_ < t) time_ = t;
    return !alive_.empty();
}

Configuration SparseContact::configuration() const {
    Configuration c(box_, false);
    for (auto s : alive_) c.set(s, true);
    return c;
}

} // namespace cpwalk
