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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cpwalk/configuration.hpp"
#include "cpwalk/kernel.hpp"
#include "cpwalk/parallel.hpp"
#include "cpwalk/rng.hpp"
#include "cpwalk/stats.hpp"

namespace cpwalk {

/// Replica ensemble settings shared by every estimator.
struct RunSpec {
    std::string experiment = "exp";
    std::uint64_t seed = 1;
    std::size_t replicas = 100;
    unsigned threads = 1;
    double level = 0.95;
    /// Largest tolerated fraction of aborted replicas.
    double abort_budget = 0.01;
    double pad_factor = 4.0;

    Rng stream(std::size_t replica, std::string_view role, std::uint64_t aux = 0) const;
    StreamLabel label(std::size_t replica, std::string_view role, std::uint64_t aux = 0) const;
};

enum class InitialLaw { ones, zeros, bernoulli, upper_invariant };

struct InitialSpec {
    InitialLaw law = InitialLaw::ones;
    double density = 0.5;
    /// Burn-in time for the upper-invariant approximation.
    double burn_in = 50.0;

    std::string to_string() const;
};

/// "ones", "zeros", "bernoulli(p)", "upper-invariant".
InitialSpec parse_initial(std::string_view text);

/// Extra time the environment runs before the walker starts.
double initial_lead(const InitialSpec& spec);
Configuration sample_initial(const Box& box, const InitialSpec& spec, double lambda, Rng rng);

/// Bound on |W_t|_1 over [0, horizon] that fails with probability < 1e-12.
int walk_reach(const KernelSpec& kernel, double horizon);

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Per-replica observables in a frozen column order.
struct ReplicaTable {
    std::vector<std::string> columns;
    std::vector<std::size_t> replica;
    std::vector<std::vector<double>> rows;

    std::size_t column(std::string_view name) const;
    std::vector<double> values(std::string_view name) const;
};

struct EstimatorOutput {
    std::string estimator;
    std::size_t replicas = 0;
    std::vector<EstimateReport> estimates;
    std::vector<std::pair<std::string, TailFit>> fits;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, double>> values;
    ReplicaTable table;
    std::vector<ReplicaAbort> aborted;
    /// Stream roles drawn per replica, for the manifest.
    std::vector<std::string> stream_roles;
    std::vector<std::string> warnings;
    bool abort_budget_exceeded = false;

    const EstimateReport* estimate(std::string_view label) const;
    const TailFit* fit(std::string_view label) const;
    const Check* check(std::string_view name) const;
    std::optional<double> value(std::string_view name) const;
    bool inconclusive() const;
};

struct SpeedParams {
    KernelSpec kernel;
    double lambda = 2.0;
    InitialSpec initial;
    std::vector<double> t_grid;
};

/// Walker speed v(t) = W_t / t and rho(t) = rho_t / t on a t grid, with the
/// per-replica identity residual W_t/t - (rho u1 + (1 - rho) u0).
EstimatorOutput estimate_speed(const SpeedParams& p, const RunSpec& run);

struct SubaddParams {
    KernelSpec kernel;
    double lambda = 2.0;
    double t = 5.0;
    double s = 5.0;
    /// Share one rep between the original and the restarted environment.
    bool shared = false;
    /// Distributional comparison at k = 1..k_max (k_max <= s).
    int k_max = 5;
    double ks_alpha = 0.01;
};

EstimatorOutput subadditive_X(const SubaddParams& p, const RunSpec& run);

struct LdpRhoParams {
    KernelSpec kernel;
    double lambda = 2.0;
    InitialLaw initial = InitialLaw::ones;
    double epsilon = 0.1;
    std::vector<double> t_grid;
    /// Defaults to the ensemble mean of rho_t / t at the largest t.
    std::optional<double> center;
};

EstimatorOutput ldp_tail_rho(const LdpRhoParams& p, const RunSpec& run);

struct LdpWalkParams {
    KernelSpec kernel;
    double lambda = 2.0;
    double epsilon = 0.2;
    std::vector<double> t_grid;
    InitialSpec initial;
    /// Defaults to the ensemble mean of W_t / t at the largest t.
    std::optional<Vector> center;
    /// Replicas of the 1-bar reference ensemble when initial is not 1-bar.
    std::size_t reference_replicas = 200;
};

EstimatorOutput ldp_tail_walker(const LdpWalkParams& p, const RunSpec& run);

struct CouplingParams {
    double lambda = 2.0;
    double density = 0.5;
    std::vector<double> T_grid;
    int dimension = 1;
    double window = 1.0;
    /// Integrate the initial law out on a backward dual per window
    /// (variance reduction); otherwise evolve both initials forward.
    bool dual = false;
};

EstimatorOutput coupling_discrepancy(const CouplingParams& p, const RunSpec& run);

struct ConeParams {
    double lambda = 2.0;
    double m = 1.0;
    std::vector<double> T_grid;
    InitialSpec eta;
    int reference = 1;
    int dimension = 1;
    /// The cone is followed up to max(T) + extra_horizon.
    double extra_horizon = 10.0;
    /// Spacing of the time grid; ignored in exact mode.
    double grid_step = 1.0;
    bool exact = false;
};

EstimatorOutput cone_mixing_phi(const ConeParams& p, const RunSpec& run);

struct SlabSurvivalParams {
    std::vector<double> lambdas;
    std::vector<int> Ks;
    std::vector<double> Ls;
    int dimension = 2;
    double t_end = 50.0;
};

EstimatorOutput slab_survival(const SlabSurvivalParams& p, const RunSpec& run);

struct EdgeParams {
    /// Coupled by thinning on one rep; fronts are ordered pathwise.
    std::vector<double> lambdas{2.0};
    std::vector<double> t_grid;
    /// ones: all-ones-left; upper_invariant: burnt-in sample masked to x < 0.
    InitialSpec initial;
};

EstimatorOutput edge_speed(const EdgeParams& p, const RunSpec& run);

struct RhoCurveParams {
    KernelSpec kernel;
    std::vector<double> lambdas;
    double t = 40.0;
};

EstimatorOutput rho_curve(const RhoCurveParams& p, const RunSpec& run);

enum class ObserverKind { d1_rightmost, slab };

struct DensityParams {
    KernelSpec kernel;
    double lambda = 2.0;
    ObserverKind observer = ObserverKind::d1_rightmost;
    /// tau statistics are compared between horizon and 2 * horizon.
    double horizon = 100.0;
    InitialSpec initial{InitialLaw::upper_invariant, 0.5, 50.0};
    int K = 5;
    double L = 0.0;
    double delta = 0.0;
    /// Slab processes on sweeps of the walker's own rep (pathwise comparison).
    bool shared = false;
};

EstimatorOutput positive_density_lower_bound(const DensityParams& p, const RunSpec& run);

} // namespace cpwalk
