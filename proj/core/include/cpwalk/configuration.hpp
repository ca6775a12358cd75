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
#include <span>
#include <vector>

#include "cpwalk/lattice.hpp"

namespace cpwalk {

class Rng;

/// Occupancy bit per site of a box (stored one byte per site).
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(Box box, bool value = false);

    static Configuration ones(const Box& box) { return Configuration(box, true); }
    static Configuration zeros(const Box& box) { return Configuration(box, false); }

    const Box& box() const { return box_; }
    std::size_t size() const { return bits_.size(); }

    bool operator[](std::uint32_t i) const { return bits_[i] != 0; }
    bool at(const Point& p) const { return box_.contains(p) && bits_[box_.index(p)] != 0; }
    void set(std::uint32_t i, bool v) { bits_[i] = v ? 1 : 0; }
    void set(const Point& p, bool v) { bits_[box_.index(p)] = v ? 1 : 0; }

    std::size_t count() const;
    bool empty() const { return count() == 0; }
    bool intersects(const Configuration& other) const;
    /// Bitwise partial order.
    bool leq(const Configuration& other) const;

    std::span<const std::uint8_t> bits() const { return bits_; }

    bool operator==(const Configuration& o) const { return box_ == o.box_ && bits_ == o.bits_; }

private:
    Box box_;
    std::vector<std::uint8_t> bits_;
};

Configuration sample_bernoulli_config(const Box& box, double density, Rng& rng);

/// Keeps only sites whose first coordinate is < bound.
Configuration mask_left_of(Configuration c, int bound);

/// Shifts a configuration on a periodic box.
Configuration shift_configuration(const Configuration& c, const Point& offset);

} // namespace cpwalk
