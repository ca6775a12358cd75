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

#include "cpwalk/errors.hpp"
#include "cpwalk/graphical.hpp"
#include "cpwalk/stats.hpp"
#include "test_util.hpp"

using namespace cpwalk;

namespace {

Point at1(int x) { return Point{x, 0, 0, 0}; }

GraphicalRep hand_rep(const Box& box, std::vector<Event> ev, double horizon = 1.0) {
    return GraphicalRep(box, 1.0, horizon, std::move(ev));
}

Configuration single(const Box& box, const Point& p) {
    Configuration c(box);
    c.set(p, true);
    return c;
}

Configuration random_config(const Box& box, Rng& rng) { return sample_bernoulli_config(box, rng.uniform(), rng); }

// Rep with random lambda and horizon on a random small box.
GraphicalRep random_rep(Rng& rng, int d, int R, Boundary bc = Boundary::truncate) {
    const Box box = Box::cube(d, R, bc);
    const double lambda = 0.3 + 2.5 * rng.uniform();
    const double horizon = 0.5 + 2.5 * rng.uniform();
    return sample_rep(box, lambda, horizon, Rng(rng.next_u64()));
}

} // namespace

TEST(Evolve, HandTracedTwoEvents) {
    const Box box = Box::cube(1, 2);
    const std::uint32_t o = box.index(at1(0));
    const Configuration A = single(box, at1(0));
    // arrow o -> +1 at 0.3, then a cross at o at 0.5: {+1} survives.
    auto rep = hand_rep(box, {Event::arrow(0.3, o, 0), Event::cross(0.5, o)});
    EXPECT_EQ(evolve(rep, A, 0.0, 1.0), single(box, at1(1)));
    // with the arrow after the cross nothing is left.
    rep = hand_rep(box, {Event::cross(0.5, o), Event::arrow(0.7, o, 0)});
    EXPECT_TRUE(evolve(rep, A, 0.0, 1.0).empty());
}

TEST(Evolve, EmptyIsAbsorbingAndNoEventsIsConstant) {
    Rng rng = fixtures::stream(1, "evolve");
    for (int i = 0; i < 50; ++i) {
        const GraphicalRep rep = random_rep(rng, 1 + i % 2, 4);
        const Configuration zero(rep.box());
        EXPECT_TRUE(evolve(rep, zero, 0.0, rep.horizon()).empty());
        const Configuration A = random_config(rep.box(), rng);
        const GraphicalRep still(rep.box(), rep.lambda(), rep.horizon(), {});
        EXPECT_EQ(evolve(still, A, 0.0, rep.horizon()), A);
        EXPECT_EQ(dual_evolve(still, A, rep.horizon(), rep.horizon()), A);
    }
}

TEST(Evolve, TraceReplaysStates) {
    Rng rng = fixtures::stream(2, "trace");
    const GraphicalRep rep = random_rep(rng, 1, 6);
    const Configuration A = Configuration::ones(rep.box());
    EvolveTrace trace;
    const Configuration end = evolve(rep, A, 0.0, rep.horizon(), &trace);
    EXPECT_EQ(trace.state_at(rep.horizon()), end);
    for (double f : {0.1, 0.4, 0.77}) EXPECT_EQ(trace.state_at(f * rep.horizon()), evolve(rep, A, 0.0, f * rep.horizon()));
}

TEST(Evolve, TimeOutOfRange) {
    const Box box = Box::cube(1, 2);
    const auto rep = hand_rep(box, {});
    try {
        evolve(rep, Configuration(box), 0.5, 2.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::time_out_of_range);
    }
}

TEST(Duality, IdentityOnRandomReps) {
    Rng rng = fixtures::stream(3, "duality");
    for (int i = 0; i < 500; ++i) {
        const GraphicalRep rep = random_rep(rng, 1 + i % 2, 4);
        const Configuration A = random_config(rep.box(), rng), B = random_config(rep.box(), rng);
        const double t = rep.horizon() * rng.uniform();
        const bool fwd = evolve(rep, A, 0.0, t).intersects(B);
        const bool bwd = A.intersects(dual_evolve(rep, B, t, t));
        ASSERT_EQ(fwd, bwd) << "instance " << i;
    }
}

TEST(Coupled, AttractiveAndOrderPreserving) {
    Rng rng = fixtures::stream(4, "coupled");
    for (int i = 0; i < 100; ++i) {
        const GraphicalRep rep = random_rep(rng, 1 + i % 2, 5);
        Configuration omega = random_config(rep.box(), rng);
        Configuration eta = omega;
        for (std::uint32_t x = 0; x < eta.size(); ++x)
            if (rng.bernoulli(0.5)) eta.set(x, false);
        const std::vector<Configuration> init{eta, omega, Configuration(rep.box()), omega};
        const auto out = coupled_evolve(rep, init, 0.0, rep.horizon());
        ASSERT_EQ(out.size(), 4u);
        EXPECT_TRUE(out[0].leq(out[1]));
        EXPECT_TRUE(out[2].empty());
        EXPECT_EQ(out[1], out[3]);
        EXPECT_EQ(out[0], evolve(rep, eta, 0.0, rep.horizon()));
    }
}

TEST(SampleRep, DeterministicAndPoissonCounts) {
    const Box box = Box::cube(1, 50);
    const auto a = sample_rep(box, 1.0, 10.0, fixtures::stream(5, "rep"));
    const auto b = sample_rep(box, 1.0, 10.0, fixtures::stream(5, "rep"));
    ASSERT_EQ(a.events().size(), b.events().size());
    for (std::size_t i = 0; i < a.events().size(); ++i) {
        ASSERT_EQ(a.events()[i].time, b.events()[i].time);
        ASSERT_EQ(a.events()[i].site, b.events()[i].site);
        ASSERT_EQ(a.events()[i].tag, b.events()[i].tag);
    }
    // 100 directed nearest-neighbour edges each way inside the truncated box.
    EXPECT_EQ(box.edge_count(), 200u);
    const double mean_arrows = 200.0 * 10.0;
    EXPECT_NEAR(double(a.arrow_count()), mean_arrows, 4.0 * std::sqrt(mean_arrows));
    const double mean_cross = 101.0 * 10.0;
    EXPECT_NEAR(double(a.cross_count()), mean_cross, 4.0 * std::sqrt(mean_cross));
    for (std::size_t i = 1; i < a.events().size(); ++i) ASSERT_LE(a.events()[i - 1].time, a.events()[i].time);
}

TEST(SampleRep, PeriodicEdgeCount) {
    const Box box = Box::cube(2, 3, Boundary::periodic);
    EXPECT_EQ(box.edge_count(), 49u * 4u);
    const auto rep = sample_rep(box, 2.0, 20.0, fixtures::stream(6, "rep"));
    const double mean = 2.0 * 49 * 4 * 20.0;
    EXPECT_NEAR(double(rep.arrow_count()), mean, 4.0 * std::sqrt(mean));
}

TEST(SampleRep, TinyLambdaReducesToDeaths) {
    const Box box = Box::cube(1, 5);
    const auto rep = sample_rep(box, 1e-9, 1.0, fixtures::stream(7, "rep"));
    EXPECT_EQ(rep.arrow_count(), 0u);
    const Configuration ones = Configuration::ones(box);
    const Configuration end = evolve(rep, ones, 0.0, 1.0);
    for (std::uint32_t x = 0; x < box.size(); ++x) EXPECT_EQ(end[x], rep.cross_times(x).empty());
}

TEST(SampleRep, ResourceLimit) {
    try {
        sample_rep(Box::cube(2, 200), 5.0, 1000.0, fixtures::stream(8, "rep"), RepBudget{1e6});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::resource_limit);
    }
}

TEST(Thinning, MonotoneInLambda) {
    Rng rng = fixtures::stream(9, "thin");
    for (int i = 0; i < 60; ++i) {
        const Box box = Box::cube(1 + i % 2, 5);
        const auto rep = sample_rep(box, 4.0, 3.0, Rng(rng.next_u64()));
        const auto mid = thin_rep(rep, 2.0), low = thin_rep(rep, 0.5);
        EXPECT_LE(low.arrow_count(), mid.arrow_count());
        EXPECT_LE(mid.arrow_count(), rep.arrow_count());
        EXPECT_EQ(low.cross_count(), rep.cross_count());
        const Configuration A = random_config(box, rng);
        const auto a = evolve(low, A, 0.0, 3.0), b = evolve(mid, A, 0.0, 3.0), c = evolve(rep, A, 0.0, 3.0);
        EXPECT_TRUE(a.leq(b));
        EXPECT_TRUE(b.leq(c));
        // A thinned sweeper lane agrees with the materialized thinned rep.
        Sweeper sw(box, EventCursor(rep.events()));
        const int lane = sw.add_lane(A, 0.5 / 4.0);
        sw.advance_to(3.0);
        EXPECT_EQ(sw.configuration(lane), a);
    }
    const Box box = Box::cube(1, 30);
    const auto rep = sample_rep(box, 4.0, 10.0, fixtures::stream(10, "thin"));
    const double n = double(rep.arrow_count()), p = 0.25;
    EXPECT_NEAR(double(thin_rep(rep, 1.0).arrow_count()), n * p, 4.0 * std::sqrt(n * p * (1 - p)));
}

TEST(Translation, PeriodicShiftCommutes) {
    Rng rng = fixtures::stream(11, "shift");
    for (int i = 0; i < 60; ++i) {
        const int d = 1 + i % 2;
        const GraphicalRep rep = random_rep(rng, d, 4, Boundary::periodic);
        const Configuration A = random_config(rep.box(), rng);
        Point off{};
        for (int a = 0; a < d; ++a) off[a] = int(rng.below(9)) - 4;
        const auto lhs = evolve(shift_rep(rep, off), shift_configuration(A, off), 0.0, rep.horizon());
        const auto rhs = shift_configuration(evolve(rep, A, 0.0, rep.horizon()), off);
        EXPECT_EQ(lhs, rhs);
    }
}

TEST(Truncated, WideSlabMatchesEvolveAndMonotoneInK) {
    Rng rng = fixtures::stream(12, "slab");
    for (int i = 0; i < 80; ++i) {
        const GraphicalRep rep = random_rep(rng, 1 + i % 2, 5);
        const Box& box = rep.box();
        const Configuration A = random_config(box, rng);
        EXPECT_EQ(truncated_evolve(rep, SlabSpec{5, 0.0, 0}, A, rep.horizon()), evolve(rep, A, 0.0, rep.horizon()));
        const double L = (rng.uniform() - 0.5);
        Configuration init = A;
        for (std::uint32_t x = 0; x < init.size(); ++x)
            if (std::abs(box.coord(x, 0)) > 1) init.set(x, false);
        Configuration prev;
        for (int K = 1; K <= 4; ++K) {
            const auto c = truncated_evolve(rep, SlabSpec{K, L, 0}, init, rep.horizon());
            if (K > 1) {
                EXPECT_TRUE(prev.leq(c)) << "K=" << K;
            }
            EXPECT_TRUE(c.leq(evolve(rep, init, 0.0, rep.horizon())));
            prev = c;
        }
    }
}

TEST(Truncated, ArrowAcrossMovingFace) {
    const Box box = Box::cube(1, 6);
    const SlabSpec slab{1, 1.0, 0};
    const Configuration A = single(box, at1(1));
    // At t = 0.5 the slab is [-0.5, 1.5]: 1 -> 2 leaves it.
    auto rep = hand_rep(box, {Event::arrow(0.5, box.index(at1(1)), 0)}, 2.0);
    EXPECT_TRUE(truncated_evolve(rep, slab, A, 0.6).leq(single(box, at1(1))));
    EXPECT_FALSE(truncated_evolve(rep, slab, A, 0.6)[box.index(at1(2))]);
    // At t = 1.2 the slab is [0.2, 2.2]: the same arrow is used.
    rep = hand_rep(box, {Event::arrow(1.2, box.index(at1(1)), 0)}, 2.0);
    EXPECT_TRUE(truncated_evolve(rep, slab, A, 1.3)[box.index(at1(2))]);
    // Site 0 leaves the slab once t > 1.
    const Configuration B = single(box, at1(0));
    rep = hand_rep(box, {}, 2.0);
    EXPECT_TRUE(truncated_evolve(rep, slab, B, 0.9)[box.index(at1(0))]);
    EXPECT_TRUE(truncated_evolve(rep, slab, B, 1.1).empty());
}

TEST(Rightmost, NoEventsAndOracle) {
    const Box box = Box::cube(1, 5);
    const auto still = hand_rep(box, {}, 1.0);
    const Configuration ones = Configuration::ones(box);
    for (int z = -5; z <= 5; ++z) EXPECT_EQ(rightmost(still, ones, z, 0.2, 0.9), z);
    EXPECT_FALSE(rightmost(still, Configuration(box), 0, 0.0, 1.0).has_value());
}

TEST(Rightmost, TrackerMatchesRecomputation) {
    Rng rng = fixtures::stream(13, "rm");
    for (int i = 0; i < 40; ++i) {
        const Box box = Box::cube(1, 20);
        const auto rep = sample_rep(box, 2.0, 4.0, Rng(rng.next_u64()));
        const Configuration A = mask_left_of(Configuration::ones(box), 1);
        Sweeper sw(box, EventCursor(rep.events()));
        sw.add_lane(A);
        RightmostTracker tr(sw, 0);
        sw.set_listener(&tr);
        const double s = 1.0 + rng.uniform();
        sw.advance_to(s);
        const int z = int(rng.below(7)) - 3;
        tr.restart(z);
        EXPECT_EQ(tr.value(), rightmost_occupied(sw, 0, z));
        for (double t : {s + 0.5, s + 1.0, 4.0}) {
            sw.advance_to(t);
            EXPECT_EQ(tr.value(), rightmost(rep, A, z, s, t)) << "i=" << i << " t=" << t;
        }
    }
}

TEST(Bernoulli, DensityLimits) {
    const Box box = Box::cube(2, 49);
    Rng rng = fixtures::stream(14, "bern");
    EXPECT_TRUE(sample_bernoulli_config(box, 0.0, rng).empty());
    EXPECT_EQ(sample_bernoulli_config(box, 1.0, rng).count(), box.size());
    const double n = double(box.size());
    EXPECT_NEAR(double(sample_bernoulli_config(box, 0.5, rng).count()) / n, 0.5, 4.0 * 0.5 / std::sqrt(n));
}

TEST(UpperInvariant, SubcriticalDiesAndSupercriticalStable) {
    const Box box = Box::cube(1, 100);
    EXPECT_TRUE(sample_upper_invariant(box, 0.5, 60.0, fixtures::stream(15, "ui")).empty());
    std::vector<double> d1, d2;
    for (int i = 0; i < 20; ++i) {
        d1.push_back(double(sample_upper_invariant(box, 2.0, 50.0, fixtures::stream(16, "ui", std::uint64_t(i))).count()) /
                     double(box.size()));
        d2.push_back(double(sample_upper_invariant(box, 2.0, 100.0, fixtures::stream(17, "ui", std::uint64_t(i))).count()) /
                     double(box.size()));
    }
    const auto a = mean_estimate(d1, 0.95), b = mean_estimate(d2, 0.95);
    EXPECT_GT(a.ci_low, 0.0);
    EXPECT_TRUE(agree_within(a, b, 4.0)) << a.estimate << " vs " << b.estimate;
    // Disjoint streams give different samples.
    EXPECT_NE(sample_upper_invariant(box, 2.0, 20.0, fixtures::stream(18, "ui", 0)),
              sample_upper_invariant(box, 2.0, 20.0, fixtures::stream(18, "ui", 1)));
}
