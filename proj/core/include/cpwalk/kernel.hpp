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

#include <optional>
#include <span>
#include <vector>

#include "cpwalk/lattice.hpp"

namespace cpwalk {

struct RateEntry {
    int state = 0;
    std::vector<int> displacement;
    double rate = 0.0;
};

/// Two-state jump kernel padded to a common total rate gamma.
///
/// Atoms are the non-origin support sorted by (l1 norm, lexicographic) with the
/// origin appended last. Both states share the same atom list.
class KernelSpec {
public:
    int dimension() const { return dim_; }
    double gamma() const { return gamma_; }
    std::span<const Point> atoms() const { return atoms_; }
    /// Padded rates alpha(state, z_j) aligned with atoms().
    std::span<const double> rates(int state) const { return rates_[state]; }
    /// p_state(1..M); p_state(0) = 0 is implicit.
    std::span<const double> cdf(int state) const { return cdf_[state]; }
    const Vector& drift(int state) const { return drift_[state]; }
    /// Rate added to the origin atom so the row sums to gamma.
    double padding(int state) const { return padding_[state]; }
    /// The user rate table, as supplied.
    std::span<const RateEntry> input() const { return input_; }

    const Point& sample_jump(int state, double u) const;

private:
    friend KernelSpec build_kernel(std::span<const RateEntry>, int, std::optional<double>);

    int dim_ = 0;
    double gamma_ = 0.0;
    std::vector<Point> atoms_;
    std::vector<double> rates_[2];
    std::vector<double> cdf_[2];
    Vector drift_[2]{};
    double padding_[2]{};
    std::vector<RateEntry> input_;
};

/// Builds the kernel. A gamma override must dominate the computed gamma.
KernelSpec build_kernel(std::span<const RateEntry> rates, int dimension,
                        std::optional<double> gamma_override = std::nullopt);

const Point& sample_jump(const KernelSpec& kernel, int state, double u);

struct KernelProperties {
    bool elliptic = false;
    double gamma = 0.0;
    Vector drift0{};
    Vector drift1{};
    int max_range = 0;
};

KernelProperties check_properties(const KernelSpec& kernel);

/// alpha(1,+e1) = a1, alpha(0,-e1) = a0 in d = 1.
std::vector<RateEntry> nearest_neighbour_drift_kernel(double a1, double a0);

} // namespace cpwalk
