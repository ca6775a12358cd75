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
#include <limits>
#include <optional>
#include <vector>

#include "cpwalk/configuration.hpp"
#include "cpwalk/rng.hpp"
#include "cpwalk/sweeper.hpp"

namespace cpwalk {

/// Contact process from a finite set, simulated on its occupied sites only
/// (Gillespie). Each occupied site dies at rate 1 and fires an arrow at rate
/// lambda per direction; arrows leaving the box or the slab do nothing.
/// Sites dropping out of a tilted slab are removed when the slab face passes.
class SparseContact {
public:
    SparseContact(Box box, double lambda, Rng rng, std::optional<SlabSpec> slab = std::nullopt);

    void occupy(const Point& x);
    /// Runs to time t; returns false once the process is extinct.
    bool advance_to(double t);

    double time() const { return time_; }
    std::size_t population() const { return alive_.size(); }
    bool extinct() const { return alive_.empty(); }
    std::uint64_t events() const { return events_; }
    Configuration configuration() const;
    const Box& box() const { return box_; }

private:
    void add(std::uint32_t site);
    void remove(std::uint32_t site);
    double next_exit() const;
    void apply_exit(double t);

    Box box_;
    double lambda_;
    Rng rng_;
    std::optional<SlabSpec> slab_;
    double time_ = 0.0;
    double last_exit_ = -std::numeric_limits<double>::infinity();
    std::vector<std::int32_t> slot_;
    std::vector<std::uint32_t> alive_;
    std::uint64_t events_ = 0;
};

} // namespace cpwalk
