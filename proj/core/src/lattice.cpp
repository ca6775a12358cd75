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

#include "cpwalk/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cpwalk/errors.hpp"

namespace cpwalk {

namespace {
constexpr std::size_t kMaxSites = std::size_t(1) << 28;
}

std::string_view to_string(Boundary b) {
    return b == Boundary::periodic ? "periodic" : "truncate";
}

Boundary parse_boundary(std::string_view s) {
    if (s == "truncate") return Boundary::truncate;
    if (s == "periodic") return Boundary::periodic;
    fail(ErrorCode::invalid_argument, "unknown boundary mode '" + std::string(s) + "'");
}

Box::Box(int dim, const Point& lo, const Point& hi, Boundary boundary)
    : dim_(dim), boundary_(boundary), lo_{}, hi_{} {
    if (dim < 1 || dim > kMaxDim) fail(ErrorCode::dimension_mismatch, "box dimension must be in [1,4]");
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) {
        lo_[a] = lo[a];
        hi_[a] = hi[a];
        if (hi[a] < lo[a]) fail(ErrorCode::invalid_argument, "empty box extent");
        stride_[a] = std::uint32_t(n);
        n *= std::size_t(extent(a));
        if (n > kMaxSites) fail(ErrorCode::resource_limit, "box has more than 2^28 sites");
    }
    size_ = n;
    if (boundary == Boundary::periodic) {
        for (int a = 0; a < dim; ++a)
            if (extent(a) < 3) fail(ErrorCode::invalid_argument, "periodic box needs extent >= 3 per axis");
    }
    for (int a = 0; a < dim; ++a) {
        step_[2 * a] = stride_[a];
        step_[2 * a + 1] = -std::int64_t(stride_[a]);
        std::int64_t span = std::int64_t(stride_[a]) * (extent(a) - 1);
        wrap_[2 * a] = -span;
        wrap_[2 * a + 1] = span;
    }
    auto flags = std::make_shared<std::vector<std::uint8_t>>(n, 0);
    for (int a = 0; a < dim; ++a) {
        std::uint32_t e = std::uint32_t(extent(a));
        for (std::uint32_t i = 0; i < n; ++i) {
            std::uint32_t c = (i / stride_[a]) % e;
            if (c == e - 1) (*flags)[i] |= std::uint8_t(1u << (2 * a));
            if (c == 0) (*flags)[i] |= std::uint8_t(1u << (2 * a + 1));
        }
    }
    flags_ = std::move(flags);
}

Box Box::cube(int dim, int radius, Boundary boundary) {
    if (radius < 1) fail(ErrorCode::invalid_argument, "box radius must be >= 1");
    Point lo{}, hi{};
    for (int a = 0; a < dim && a < kMaxDim; ++a) {
        lo[a] = -radius;
        hi[a] = radius;
    }
    return Box(dim, lo, hi, boundary);
}

bool Box::contains(const Point& p) const {
    for (int a = 0; a < dim_; ++a)
        if (p[a] < lo_[a] || p[a] > hi_[a]) return false;
    for (int a = dim_; a < kMaxDim; ++a)
        if (p[a] != 0) return false;
    return true;
}

bool Box::contains_with_margin(const Point& p, int margin) const {
    if (boundary_ == Boundary::periodic) return contains(p);
    for (int a = 0; a < dim_; ++a)
        if (p[a] < lo_[a] + margin || p[a] > hi_[a] - margin) return false;
    for (int a = dim_; a < kMaxDim; ++a)
        if (p[a] != 0) return false;
    return true;
}

std::uint32_t Box::index(const Point& p) const {
    std::uint32_t idx = 0;
    for (int a = 0; a < dim_; ++a) idx += std::uint32_t(p[a] - lo_[a]) * stride_[a];
    return idx;
}

Point Box::point(std::uint32_t index) const {
    Point p{};
    for (int a = 0; a < dim_; ++a) p[a] = coord(index, a);
    return p;
}

std::size_t Box::edge_count() const {
    std::size_t edges = 0;
    for (int a = 0; a < dim_; ++a) {
        std::size_t per_line = boundary_ == Boundary::periodic ? std::size_t(extent(a))
                                                              : std::size_t(extent(a) - 1);
        edges += 2 * per_line * (size_ / std::size_t(extent(a)));
    }
    return edges;
}

int Box::min_half_width() const {
    int w = std::numeric_limits<int>::max();
    for (int a = 0; a < dim_; ++a) w = std::min(w, (extent(a) - 1) / 2);
    return w;
}

Point Box::wrap(const Point& p) const {
    Point q = p;
    for (int a = 0; a < dim_; ++a) {
        int e = extent(a);
        int c = (q[a] - lo_[a]) % e;
        if (c < 0) c += e;
        q[a] = lo_[a] + c;
    }
    return q;
}

int safety_pad(double lambda, double horizon, double pad_factor) {
    return int(std::ceil(pad_factor * lambda * horizon));
}

int safety_radius(int window, double lambda, double horizon, double pad_factor) {
    return window + safety_pad(lambda, horizon, pad_factor);
}

} // namespace cpwalk
