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
#include <cmath>
#include <cstdint>

namespace cpwalk {

/// Exponential(1) tables for the 256-layer ziggurat of Marsaglia and Tsang.
struct ExpZiggurat {
    static constexpr double r = 7.69711747013104972;
    static constexpr double v = 0.0039496598225815571993;
    std::array<double, 257> x{};
    std::array<double, 257> f{};

    static const ExpZiggurat& get();
};

/// Exact Exponential(1) draw. Layer i uses the low 8 bits, the abscissa the top 53.
template <class Gen>
double exp_ziggurat(Gen& gen) {
    static const ExpZiggurat& z = ExpZiggurat::get();
    for (;;) {
        const std::uint64_t bits = gen();
        const std::size_t i = bits & 0xffu;
        const double x = double(bits >> 11) * 0x1.0p-53 * z.x[i];
        if (x < z.x[i + 1]) return x;
        if (i == 0) return ExpZiggurat::r + exp_ziggurat(gen);
        const double y = z.f[i + 1] + (z.f[i] - z.f[i + 1]) * (double(gen() >> 11) * 0x1.0p-53);
        if (y < std::exp(-x)) return x;
    }
}

} // namespace cpwalk
