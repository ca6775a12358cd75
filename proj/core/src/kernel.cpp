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

#include "cpwalk/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "cpwalk/errors.hpp"

namespace cpwalk {

namespace {

bool enumeration_less(const Point& a, const Point& b) {
    auto na = l1_norm(a), nb = l1_norm(b);
    if (na != nb) return na < nb;
    return a < b;
}

struct EnumLess {
    bool operator()(const Point& a, const Point& b) const { return enumeration_less(a, b); }
};

} // namespace

KernelSpec build_kernel(std::span<const RateEntry> rates, int dimension, std::optional<double> gamma_override) {
    if (dimension < 1 || dimension > kMaxDim) fail(ErrorCode::dimension_mismatch, "kernel dimension must be in [1,4]");

    std::map<Point, double, EnumLess> row[2];
    double origin[2] = {0.0, 0.0};
    for (const auto& e : rates) {
        if (e.state != 0 && e.state != 1) fail(ErrorCode::invalid_argument, "state must be 0 or 1");
        if (int(e.displacement.size()) != dimension)
            fail(ErrorCode::dimension_mismatch, "displacement has arity " + std::to_string(e.displacement.size()) +
                                                    ", expected " + std::to_string(dimension));
        if (!(e.rate >= 0.0) || !std::isfinite(e.rate)) fail(ErrorCode::negative_rate, "rate must be finite and >= 0");
        Point z{};
        for (int a = 0; a < dimension; ++a) z[a] = e.displacement[a];
        if (l1_norm(z) == 0)
            origin[e.state] += e.rate;
        else
            row[e.state][z] += e.rate;
    }

    double weighted[2];
    for (int i = 0; i < 2; ++i) {
        double positive = origin[i];
        double w = origin[i];
        for (auto& [z, r] : row[i]) {
            positive += r;
            w += double(l1_norm(z)) * r;
        }
        if (!(positive > 0.0)) fail(ErrorCode::empty_row, "state " + std::to_string(i) + " has no positive rate");
        weighted[i] = w;
    }

    KernelSpec k;
    k.dim_ = dimension;
    k.gamma_ = std::max(weighted[0], weighted[1]);
    if (gamma_override) {
        if (!(*gamma_override >= k.gamma_))
            fail(ErrorCode::invalid_argument, "gamma override below the kernel's gamma");
        k.gamma_ = *gamma_override;
    }
    k.input_.assign(rates.begin(), rates.end());

    std::map<Point, int, EnumLess> support;
    for (int i = 0; i < 2; ++i)
        for (auto& [z, r] : row[i])
            if (r > 0.0) support.emplace(z, 0);
    for (auto& [z, idx] : support) {
        idx = int(k.atoms_.size());
        k.atoms_.push_back(z);
    }
    k.atoms_.push_back(Point{});
    const std::size_t m = k.atoms_.size();

    for (int i = 0; i < 2; ++i) {
        auto& rr = k.rates_[i];
        rr.assign(m, 0.0);
        double sum = 0.0;
        for (auto& [z, r] : row[i])
            if (r > 0.0) {
                rr[std::size_t(support.at(z))] = r;
                sum += r;
            }
        k.padding_[i] = k.gamma_ - sum - origin[i];
        if (k.padding_[i] < 0.0) k.padding_[i] = 0.0;
        rr[m - 1] = origin[i] + k.padding_[i];

        auto& cdf = k.cdf_[i];
        cdf.assign(m, 0.0);
        double acc = 0.0;
        std::size_t last_positive = 0;
        for (std::size_t j = 0; j < m; ++j) {
            acc += rr[j] / k.gamma_;
            cdf[j] = acc;
            if (rr[j] > 0.0) last_positive = j;
        }
        double ulp = std::nextafter(1.0, 2.0) - 1.0;
        if (std::abs(acc - 1.0) > 8.0 * ulp)
            fail(ErrorCode::invalid_argument, "cumulative jump probabilities do not sum to 1");
        for (std::size_t j = last_positive; j < m; ++j) cdf[j] = 1.0;

        Vector u{};
        for (std::size_t j = 0; j + 1 < m; ++j)
            for (int a = 0; a < dimension; ++a) u[a] += rr[j] * k.atoms_[j][a];
        k.drift_[i] = u;
    }
    return k;
}

const Point& KernelSpec::sample_jump(int state, double u) const {
    const auto& c = cdf_[state];
    auto it = std::upper_bound(c.begin(), c.end(), u);
    if (it == c.end()) --it;
    return atoms_[std::size_t(it - c.begin())];
}

const Point& sample_jump(const KernelSpec& kernel, int state, double u) {
    return kernel.sample_jump(state, u);
}

KernelProperties check_properties(const KernelSpec& kernel) {
    KernelProperties p;
    p.gamma = kernel.gamma();
    p.drift0 = kernel.drift(0);
    p.drift1 = kernel.drift(1);
    auto atoms = kernel.atoms();
    bool elliptic = true;
    for (int i = 0; i < 2; ++i) {
        auto r = kernel.rates(i);
        for (int a = 0; a < kernel.dimension(); ++a)
            for (int s : {1, -1}) {
                Point e = unit(a, s);
                auto it = std::find(atoms.begin(), atoms.end(), e);
                if (it == atoms.end() || !(r[std::size_t(it - atoms.begin())] > 0.0)) elliptic = false;
            }
        for (std::size_t j = 0; j < atoms.size(); ++j)
            if (r[j] > 0.0) p.max_range = std::max<int>(p.max_range, int(l1_norm(atoms[j])));
    }
    p.elliptic = elliptic;
    return p;
}

std::vector<RateEntry> nearest_neighbour_drift_kernel(double a1, double a0) {
    return {RateEntry{1, {1}, a1}, RateEntry{0, {-1}, a0}};
}

} // namespace cpwalk
