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

#include "cpwalk/configuration.hpp"

#include <algorithm>
#include <numeric>

#include "cpwalk/errors.hpp"
#include "cpwalk/rng.hpp"

namespace cpwalk {

Configuration::Configuration(Box box, bool value) : box_(std::move(box)), bits_(box_.size(), value ? 1 : 0) {}

std::size_t Configuration::count() const {
    return std::size_t(std::count(bits_.begin(), bits_.end(), std::uint8_t(1)));
}

bool Configuration::intersects(const Configuration& other) const {
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] && other.bits_[i]) return true;
    return false;
}

bool Configuration::leq(const Configuration& other) const {
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] && !other.bits_[i]) return false;
    return true;
}

Configuration sample_bernoulli_config(const Box& box, double density, Rng& rng) {
    if (!(density >= 0.0 && density <= 1.0)) fail(ErrorCode::invalid_argument, "density must be in [0,1]");
    Configuration c(box, false);
    if (density == 0.0) return c;
    if (density == 1.0) return Configuration(box, true);
    for (std::uint32_t i = 0; i < box.size(); ++i) c.set(i, rng.uniform() < density);
    return c;
}

Configuration mask_left_of(Configuration c, int bound) {
    const Box& box = c.box();
    for (std::uint32_t i = 0; i < box.size(); ++i)
        if (box.coord(i, 0) >= bound) c.set(i, false);
    return c;
}

Configuration shift_configuration(const Configuration& c, const Point& offset) {
    const Box& box = c.box();
    if (box.boundary() != Boundary::periodic) fail(ErrorCode::invalid_argument, "shift needs a periodic box");
    Configuration out(box, false);
    for (std::uint32_t i = 0; i < box.size(); ++i)
        if (c[i]) out.set(box.wrap(box.point(i) + offset), true);
    return out;
}

} // namespace cpwalk
