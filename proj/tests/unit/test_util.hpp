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

#include <vector>

#include "cpwalk/kernel.hpp"
#include "cpwalk/rng.hpp"
#include "cpwalk/walker.hpp"

namespace cpwalk::fixtures {

/// alpha(1, +1) = 2, alpha(0, -1) = 1.
inline KernelSpec drift_kernel() { return build_kernel(nearest_neighbour_drift_kernel(2.0, 1.0), 1); }

/// alpha(i, +-e_j) = 1 in d = 2.
inline KernelSpec symmetric_kernel_2d() {
    std::vector<RateEntry> r;
    for (int s = 0; s < 2; ++s) {
        r.push_back({s, {1, 0}, 1.0});
        r.push_back({s, {-1, 0}, 1.0});
        r.push_back({s, {0, 1}, 1.0});
        r.push_back({s, {0, -1}, 1.0});
    }
    return build_kernel(r, 2);
}

inline Rng stream(std::uint64_t seed, const char* role, std::uint64_t replica = 0, std::uint64_t aux = 0) {
    return RngPolicy(seed).stream({"test", replica, role, aux});
}

inline WalkDriver driver(double gamma, double horizon, std::uint64_t seed, std::uint64_t replica = 0,
                         bool single = false) {
    DriverStreams s{stream(seed, "jumps", replica), stream(seed, "O", replica), stream(seed, "V", replica),
                    std::nullopt};
    if (single) s.single = stream(seed, "U", replica);
    return sample_driver(gamma, horizon, std::move(s));
}

} // namespace cpwalk::fixtures
