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

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "cpwalk/errors.hpp"
#include "cpwalk/kernel.hpp"
#include "cpwalk/rng.hpp"
#include "test_util.hpp"

using namespace cpwalk;

namespace {

Point p1(int x) { return Point{x, 0, 0, 0}; }

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::invalid_argument;
}

} // namespace

TEST(Kernel, DriftExampleGammaPaddingAndDrifts) {
    const KernelSpec k = fixtures::drift_kernel();
    EXPECT_DOUBLE_EQ(k.gamma(), 2.0);
    ASSERT_EQ(k.atoms().size(), 3u);
    EXPECT_EQ(k.atoms()[0], p1(-1));
    EXPECT_EQ(k.atoms()[1], p1(1));
    EXPECT_EQ(k.atoms()[2], p1(0));
    EXPECT_DOUBLE_EQ(k.padding(0), 1.0);
    EXPECT_DOUBLE_EQ(k.padding(1), 0.0);
    EXPECT_DOUBLE_EQ(k.drift(1)[0], 2.0);
    EXPECT_DOUBLE_EQ(k.drift(0)[0], -1.0);
    // p_1 puts all mass on +1; p_0 splits between -1 and the origin.
    EXPECT_DOUBLE_EQ(k.cdf(1)[1], 1.0);
    EXPECT_DOUBLE_EQ(k.cdf(0)[0], 0.5);
    EXPECT_DOUBLE_EQ(k.cdf(0)[1], 0.5);
    EXPECT_DOUBLE_EQ(k.cdf(0)[2], 1.0);
}

TEST(Kernel, IdenticalRowsGiveIdenticalDriftsAndCdfs) {
    std::vector<RateEntry> r;
    for (int s = 0; s < 2; ++s) {
        r.push_back({s, {1}, 0.7});
        r.push_back({s, {-2}, 0.4});
        r.push_back({s, {0}, 0.1});
    }
    const KernelSpec k = build_kernel(r, 1);
    EXPECT_EQ(k.drift(0), k.drift(1));
    for (std::size_t j = 0; j < k.atoms().size(); ++j) EXPECT_EQ(k.cdf(0)[j], k.cdf(1)[j]);
}

TEST(Kernel, SymmetricTwoDimensional) {
    const KernelSpec k = fixtures::symmetric_kernel_2d();
    EXPECT_DOUBLE_EQ(k.gamma(), 4.0);
    EXPECT_DOUBLE_EQ(k.padding(0), 0.0);
    EXPECT_DOUBLE_EQ(k.padding(1), 0.0);
    for (int a = 0; a < 2; ++a) {
        EXPECT_DOUBLE_EQ(k.drift(0)[a], 0.0);
        EXPECT_DOUBLE_EQ(k.drift(1)[a], 0.0);
    }
    const auto props = check_properties(k);
    EXPECT_TRUE(props.elliptic);
    EXPECT_EQ(props.max_range, 1);
}

TEST(Kernel, GammaUsesWeightedNorm) {
    // alpha(1, 3) = 1 weighs 3 in gamma although the row sums to 1.
    const KernelSpec k = build_kernel(std::vector<RateEntry>{{1, {3}, 1.0}, {0, {-1}, 1.0}}, 1);
    EXPECT_DOUBLE_EQ(k.gamma(), 3.0);
    EXPECT_DOUBLE_EQ(k.padding(1), 2.0);
    EXPECT_EQ(check_properties(k).max_range, 3);
}

TEST(Kernel, GammaOverrideMustDominate) {
    const auto rates = nearest_neighbour_drift_kernel(2.0, 1.0);
    EXPECT_DOUBLE_EQ(build_kernel(rates, 1, 5.0).gamma(), 5.0);
    EXPECT_EQ(code_of([&] { build_kernel(rates, 1, 1.0); }), ErrorCode::invalid_argument);
}

TEST(Kernel, Errors) {
    EXPECT_EQ(code_of([] { build_kernel(std::vector<RateEntry>{{1, {1}, -1.0}, {0, {1}, 1.0}}, 1); }),
              ErrorCode::negative_rate);
    EXPECT_EQ(code_of([] { build_kernel(std::vector<RateEntry>{{1, {1}, 1.0}, {0, {1}, 0.0}}, 1); }),
              ErrorCode::empty_row);
    EXPECT_EQ(code_of([] { build_kernel(std::vector<RateEntry>{{1, {1, 0}, 1.0}, {0, {1}, 1.0}}, 1); }),
              ErrorCode::dimension_mismatch);
}

TEST(SampleJump, Examples) {
    const KernelSpec k = fixtures::drift_kernel();
    EXPECT_EQ(sample_jump(k, 1, 0.3), p1(1));
    EXPECT_EQ(sample_jump(k, 0, 0.7), p1(0));
    EXPECT_EQ(sample_jump(k, 0, 0.2), p1(-1));
    // u = 0 gives the first support atom of the row.
    EXPECT_EQ(sample_jump(k, 1, 0.0), p1(1));
    EXPECT_EQ(sample_jump(k, 0, 0.0), p1(-1));
    // Breakpoint 0.5 belongs to the next interval.
    EXPECT_EQ(sample_jump(k, 0, 0.5), p1(0));
}

TEST(Kernel, CdfEndsAtOneAndIsMonotone) {
    Rng rng = fixtures::stream(3, "kernel");
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<RateEntry> r;
        const int d = 1 + int(rng.below(3));
        for (int s = 0; s < 2; ++s) {
            const int n = 1 + int(rng.below(6));
            for (int i = 0; i < n; ++i) {
                std::vector<int> z(static_cast<std::size_t>(d));
                for (auto& c : z) c = int(rng.below(5)) - 2;
                r.push_back({s, z, 0.05 + rng.uniform() * 3.0});
            }
        }
        const KernelSpec k = build_kernel(r, d);
        for (int s = 0; s < 2; ++s) {
            const auto c = k.cdf(s);
            EXPECT_EQ(c.back(), 1.0);
            EXPECT_GE(c.front(), 0.0);
            for (std::size_t j = 1; j < c.size(); ++j) EXPECT_LE(c[j - 1], c[j]);
            double sum = 0.0;
            for (double x : k.rates(s)) sum += x;
            EXPECT_NEAR(sum, k.gamma(), 1e-12 * k.gamma());
        }
    }
}

TEST(Kernel, ScalingLeavesCdfsAndNormalisedDriftsUnchanged) {
    const auto base = nearest_neighbour_drift_kernel(2.0, 1.0);
    for (double c : {0.5, 3.0, 17.0}) {
        auto scaled = base;
        for (auto& e : scaled) e.rate *= c;
        const KernelSpec a = build_kernel(base, 1), b = build_kernel(scaled, 1);
        EXPECT_DOUBLE_EQ(b.gamma(), c * a.gamma());
        for (int s = 0; s < 2; ++s) {
            for (std::size_t j = 0; j < a.atoms().size(); ++j) EXPECT_NEAR(a.cdf(s)[j], b.cdf(s)[j], 1e-15);
            EXPECT_NEAR(a.drift(s)[0] / a.gamma(), b.drift(s)[0] / b.gamma(), 1e-15);
        }
    }
}

TEST(SampleJump, FrequenciesMatchRates) {
    std::vector<RateEntry> r{{1, {1}, 1.5}, {1, {-1}, 0.5}, {1, {2}, 0.25}, {0, {-1}, 1.0}, {0, {0}, 0.3}};
    const KernelSpec k = build_kernel(r, 1);
    Rng rng = fixtures::stream(11, "freq");
    const int n = 100000;
    for (int s = 0; s < 2; ++s) {
        std::map<int, int> counts;
        for (int i = 0; i < n; ++i) ++counts[sample_jump(k, s, rng.uniform())[0]];
        for (std::size_t j = 0; j < k.atoms().size(); ++j) {
            const double p = k.rates(s)[j] / k.gamma();
            const double se = std::sqrt(p * (1 - p) / n);
            EXPECT_NEAR(double(counts[k.atoms()[j][0]]) / n, p, 4 * se + 1e-12) << "state " << s << " atom " << j;
        }
    }
}

TEST(Kernel, EllipticRequiresAllNearestNeighbours) {
    EXPECT_FALSE(check_properties(fixtures::drift_kernel()).elliptic);
    std::vector<RateEntry> r{{1, {1}, 1.0}, {1, {-1}, 1.0}, {0, {1}, 1.0}, {0, {-1}, 2.0}};
    EXPECT_TRUE(check_properties(build_kernel(r, 1)).elliptic);
}
