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
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

namespace cpwalk {

inline constexpr int kMaxDim = 4;

/// Lattice site; coordinates beyond the active dimension stay zero.
using Point = std::array<std::int32_t, kMaxDim>;
using Vector = std::array<double, kMaxDim>;

inline std::int64_t l1_norm(const Point& p) {
    std::int64_t n = 0;
    for (auto c : p) n += c < 0 ? -std::int64_t(c) : std::int64_t(c);
    return n;
}

inline Point operator+(Point a, const Point& b) {
    for (int i = 0; i < kMaxDim; ++i) a[i] += b[i];
    return a;
}

inline Point operator-(Point a, const Point& b) {
    for (int i = 0; i < kMaxDim; ++i) a[i] -= b[i];
    return a;
}

inline Point unit(int axis, int sign = 1) {
    Point p{};
    p[axis] = sign;
    return p;
}

enum class Boundary : std::uint8_t { truncate, periodic };

std::string_view to_string(Boundary b);
Boundary parse_boundary(std::string_view s);

/// Rectangular window of Z^d. Sites are indexed with axis 0 varying fastest.
/// Directions: 2a is +e_a, 2a+1 is -e_a.
class Box {
public:
    static constexpr std::uint32_t npos = 0xffffffffu;

    Box() = default;
    Box(int dim, const Point& lo, const Point& hi, Boundary boundary = Boundary::truncate);
    static Box cube(int dim, int radius, Boundary boundary = Boundary::truncate);

    int dim() const { return dim_; }
    Boundary boundary() const { return boundary_; }
    int lo(int axis) const { return lo_[axis]; }
    int hi(int axis) const { return hi_[axis]; }
    int extent(int axis) const { return hi_[axis] - lo_[axis] + 1; }
    std::size_t size() const { return size_; }
    int directions() const { return 2 * dim_; }

    bool contains(const Point& p) const;
    /// True when p is at least `margin` sites away from every truncated face.
    bool contains_with_margin(const Point& p, int margin) const;
    std::uint32_t index(const Point& p) const;
    Point point(std::uint32_t index) const;
    int coord(std::uint32_t index, int axis) const {
        return lo_[axis] + int((index / stride_[axis]) % std::uint32_t(extent(axis)));
    }
    std::uint32_t stride(int axis) const { return stride_[axis]; }

    /// Neighbour in direction dir, or npos when the edge leaves a truncated box.
    std::uint32_t neighbor(std::uint32_t index, int dir) const {
        if (((*flags_)[index] >> dir & 1u) == 0) return std::uint32_t(std::int64_t(index) + step_[dir]);
        if (boundary_ == Boundary::truncate) return npos;
        return std::uint32_t(std::int64_t(index) + wrap_[dir]);
    }

    /// Number of directed nearest-neighbour edges with both endpoints in the box.
    std::size_t edge_count() const;
    int min_half_width() const;

    /// Wrap a point into a periodic box.
    Point wrap(const Point& p) const;

    bool operator==(const Box& o) const {
        return dim_ == o.dim_ && lo_ == o.lo_ && hi_ == o.hi_ && boundary_ == o.boundary_;
    }

private:
    int dim_ = 0;
    Boundary boundary_ = Boundary::truncate;
    Point lo_{};
    Point hi_{};
    std::array<std::uint32_t, kMaxDim> stride_{};
    std::size_t size_ = 0;
    std::array<std::int64_t, 2 * kMaxDim> step_{};
    std::array<std::int64_t, 2 * kMaxDim> wrap_{};
    std::shared_ptr<const std::vector<std::uint8_t>> flags_;
};

/// Smallest radius that keeps a window of radius `window` exact over `horizon`.
int safety_radius(int window, double lambda, double horizon, double pad_factor);
int safety_pad(double lambda, double horizon, double pad_factor);

} // namespace cpwalk
