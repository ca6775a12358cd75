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
#include "cpwalk/estimators.hpp"
#include "test_util.hpp"

using namespace cpwalk;

namespace {

RunSpec small_run(std::size_t replicas, std::uint64_t seed, unsigned threads = 1) {
    RunSpec r;
    r.experiment = "unit";
    r.seed = seed;
    r.replicas = replicas;
    r.threads = threads;
    return r;
}

bool passed(const EstimatorOutput& o, std::string_view name) {
    const Check* c = o.check(name);
    EXPECT_NE(c, nullptr) << "missing check " << name;
    return c && c->passed;
}

double est(const EstimatorOutput& o, std::string_view label) {
    const auto* e = o.estimate(label);
    EXPECT_NE(e, nullptr) << "missing estimate " << label;
    return e ? e->estimate : std::nan("");
}

} // namespace

TEST(Speed, OnesStartIdentityAndColumns) {
    SpeedParams p{fixtures::drift_kernel(), 2.0, InitialSpec{}, {10.0, 20.0}};
    const auto o = estimate_speed(p, small_run(60, 1));
    EXPECT_EQ(o.replicas, 60u);
    EXPECT_TRUE(o.aborted.empty());
    EXPECT_EQ(o.table.columns.front(), "rho[t=10]");
    EXPECT_TRUE(passed(o, "identity0[t=20]"));
    const double rho = est(o, "rho[t=20]");
    EXPECT_GT(rho, 0.0);
    EXPECT_LE(rho, 1.5);
    // Every per-replica residual is an identity up to rounding.
    for (double r : o.table.values("res0[t=20]")) EXPECT_LT(std::abs(r), 1.0);
}

TEST(Speed, ZerosStartIsTheStateZeroWalk) {
    InitialSpec zeros;
    zeros.law = InitialLaw::zeros;
    SpeedParams p{fixtures::drift_kernel(), 2.0, zeros, {10.0}};
    const auto o = estimate_speed(p, small_run(200, 2));
    for (double r : o.table.values("rho[t=10]")) EXPECT_EQ(r, 0.0);
    // u_0 = -1 in the example kernel.
    const auto* v = o.estimate("v0[t=10]");
    ASSERT_NE(v, nullptr);
    EXPECT_NEAR(v->estimate, -1.0, 4.0 * v->std_error + 1e-12);
}

TEST(Speed, ThreadCountDoesNotChangeResults) {
    SpeedParams p{fixtures::drift_kernel(), 2.0, InitialSpec{}, {5.0, 10.0}};
    const auto a = estimate_speed(p, small_run(16, 3, 1));
    const auto b = estimate_speed(p, small_run(16, 3, 4));
    EXPECT_EQ(a.table.rows, b.table.rows);
}

TEST(Subadd, SharedRepIsPathwiseSubadditive) {
    SubaddParams p{fixtures::drift_kernel(), 2.0, 3.0, 3.0, true, 3, 0.01};
    const auto o = subadditive_X(p, small_run(100, 4));
    EXPECT_TRUE(passed(o, "subadditivity_pathwise"));
    EXPECT_TRUE(passed(o, "bounds_0_le_X_le_N"));
    EXPECT_EQ(o.value("subadditivity_violations"), 0.0);
}

TEST(Subadd, FreshModeRuns) {
    SubaddParams p{fixtures::drift_kernel(), 2.0, 3.0, 3.0, false, 2, 0.01};
    const auto o = subadditive_X(p, small_run(60, 5));
    EXPECT_TRUE(passed(o, "bounds_0_le_X_le_N"));
    EXPECT_NE(o.value("ks_p[k=1]"), std::nullopt);
}

TEST(Ldp, RhoTailFitShape) {
    LdpRhoParams p{fixtures::drift_kernel(), 2.0, InitialLaw::ones, 0.1, {5, 10, 15, 20}, std::nullopt};
    const auto o = ldp_tail_rho(p, small_run(400, 6));
    const TailFit* f = o.fit("rho_tail");
    ASSERT_NE(f, nullptr);
    EXPECT_EQ(f->t.size(), 4u);
    for (std::size_t i = 0; i < f->t.size(); ++i) {
        EXPECT_LE(f->hits[i], f->trials[i]);
        EXPECT_EQ(f->used[i], f->probability[i] > 0.0);
    }
    ASSERT_NE(o.check("rho_tail_slope_negative"), nullptr);
}

TEST(Ldp, WalkerTailFromOnes) {
    LdpWalkParams p{fixtures::drift_kernel(), 2.0, 0.2, {5, 10, 15, 20}, InitialSpec{}, std::nullopt, 50};
    const auto o = ldp_tail_walker(p, small_run(300, 7));
    ASSERT_NE(o.fit("walk_tail"), nullptr);
    EXPECT_NE(o.value("center0"), std::nullopt);
}

TEST(Coupling, FullDensityNeverDisagrees) {
    CouplingParams p{2.0, 1.0, {1.0, 2.0, 3.0}, 1, 1.0, false};
    const auto o = coupling_discrepancy(p, small_run(100, 8));
    EXPECT_TRUE(passed(o, "order_pathwise"));
    for (double T : {1.0, 2.0, 3.0}) EXPECT_EQ(est(o, "p_disc[T=" + std::to_string(int(T)) + "]"), 0.0);
    p.dual = true;
    const auto d = coupling_discrepancy(p, small_run(100, 8));
    for (const auto& row : d.table.rows)
        for (double x : row) EXPECT_EQ(x, 0.0);
}

TEST(Coupling, DualAgreesWithForward) {
    CouplingParams p{2.0, 0.5, {1.0, 2.5, 4.0}, 1, 1.0, false};
    const auto fwd = coupling_discrepancy(p, small_run(6000, 9));
    p.dual = true;
    const auto dual = coupling_discrepancy(p, small_run(6000, 10));
    for (const char* label : {"p_disc[T=1]", "p_disc[T=2.5]", "p_disc[T=4]"}) {
        const auto *a = fwd.estimate(label), *b = dual.estimate(label);
        ASSERT_TRUE(a && b) << label;
        EXPECT_TRUE(agree_within(*a, *b, 4.0)) << label << ": " << a->estimate << " vs " << b->estimate;
    }
    // Conditioning on the origin's events can only shrink the variance.
    EXPECT_LE(dual.estimate("p_disc[T=4]")->std_error, fwd.estimate("p_disc[T=4]")->std_error * 1.05);
}

TEST(Coupling, OverlappingWindowsRejected) {
    CouplingParams p{2.0, 0.5, {1.0, 1.5}, 1, 1.0, true};
    EXPECT_THROW(coupling_discrepancy(p, small_run(10, 1)), Error);
}

TEST(Cone, OnesAgainstOnesIsZero) {
    ConeParams p{2.0, 1.0, {1.0, 2.0, 4.0}, InitialSpec{}, 1, 1, 2.0, 1.0, false};
    const auto o = cone_mixing_phi(p, small_run(50, 11));
    for (const char* label : {"phi[T=1]", "phi[T=2]", "phi[T=4]"}) EXPECT_EQ(est(o, label), 0.0) << label;
    EXPECT_TRUE(passed(o, "phi_nonincreasing"));
}

TEST(Cone, ZerosStayFarFromOnes) {
    InitialSpec zeros;
    zeros.law = InitialLaw::zeros;
    ConeParams p{2.0, 1.0, {1.0, 3.0}, zeros, 1, 1, 2.0, 1.0, false};
    const auto o = cone_mixing_phi(p, small_run(100, 12));
    EXPECT_GT(est(o, "phi[T=3]"), 0.5);
    EXPECT_TRUE(passed(o, "phi_nonincreasing"));
    p.exact = true;
    const auto e = cone_mixing_phi(p, small_run(100, 12));
    EXPECT_GE(est(e, "phi[T=3]"), est(o, "phi[T=3]"));
}

TEST(Slab, SubcriticalDiesWideSurvives) {
    SlabSurvivalParams p{{0.1, 3.0}, {3}, {0.0}, 2, 10.0};
    const auto o = slab_survival(p, small_run(60, 13));
    EXPECT_LT(est(o, "survival[lambda=0.1,K=3,L=0]"), 0.05);
    EXPECT_GT(est(o, "survival[lambda=3,K=3,L=0]"), 0.5);
    EXPECT_TRUE(passed(o, "nondecreasing_in_lambda[K=3,L=0]"));
}

TEST(Edge, FrontsOrderedAcrossLambda) {
    EdgeParams p{{1.5, 2.0, 3.0}, {10.0, 20.0}, InitialSpec{}};
    const auto o = edge_speed(p, small_run(40, 14));
    EXPECT_TRUE(passed(o, "front_order_pathwise"));
    EXPECT_GT(est(o, "alpha[lambda=3,t=20]"), est(o, "alpha[lambda=1.5,t=20]"));
}

TEST(RhoCurve, ThinningCoupledMonotone) {
    RhoCurveParams p{fixtures::drift_kernel(), {1.8, 2.5, 6.0}, 10.0};
    const auto o = rho_curve(p, small_run(40, 15));
    EXPECT_TRUE(passed(o, "monotone_pathwise"));
    const auto a = o.table.values("rho[lambda=1.8]"), b = o.table.values("rho[lambda=6]");
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LE(a[i], b[i]);
}

TEST(Density, RightmostObserverBelowRho) {
    DensityParams p{fixtures::drift_kernel(), 2.0, ObserverKind::d1_rightmost, 10.0,
                    InitialSpec{InitialLaw::upper_invariant, 0.5, 10.0}};
    const auto o = positive_density_lower_bound(p, small_run(40, 16));
    EXPECT_TRUE(passed(o, "observer_le_rho_pathwise"));
    ASSERT_NE(o.check("density_positive"), nullptr);
}

TEST(Density, SharedSlabObserverBelowRho) {
    DensityParams p{fixtures::symmetric_kernel_2d(), 1.0, ObserverKind::slab, 3.0, InitialSpec{}, 3, 0.0, 0.0, true};
    const auto o = positive_density_lower_bound(p, small_run(10, 17));
    EXPECT_TRUE(passed(o, "observer_le_rho_pathwise"));
    EXPECT_TRUE(passed(o, "zeta_le_xi_pathwise"));
}

TEST(Density, ObserverNeedsMatchingDimension) {
    DensityParams p{fixtures::symmetric_kernel_2d(), 1.0, ObserverKind::d1_rightmost, 3.0};
    try {
        positive_density_lower_bound(p, small_run(2, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
    }
}

TEST(Aborts, BudgetIsReported) {
    // pad_factor tiny: the environment box is far too small and walkers leave it.
    SpeedParams p{fixtures::drift_kernel(), 2.0, InitialSpec{}, {40.0}};
    RunSpec r = small_run(20, 18);
    r.pad_factor = 1e-3;
    const auto o = estimate_speed(p, r);
    // walk_reach guarantees the walker itself stays inside; the run must not throw.
    EXPECT_EQ(o.replicas, 20u);
    EXPECT_EQ(o.abort_budget_exceeded, double(o.aborted.size()) / 20.0 > r.abort_budget);
}
