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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cpwalk/configuration.hpp"
#include "cpwalk/events.hpp"
#include "cpwalk/kernel.hpp"
#include "cpwalk/sweeper.hpp"
#include "cpwalk/walker.hpp"

/// Brute-force references for the event-sweep code: every answer is found by
/// enumerating directed paths through the event diagram, one path at a time.
namespace cpwalk::oracle {

/// True iff a path runs from (x, s) to (y, t): it waits at a site while no
/// cross hits it and moves along arrows, forward in time. With a slab, sites
/// must stay inside it and arrows must have both ends inside.
bool connected(const GraphicalRep& rep, std::uint32_t x, double s, std::uint32_t y, double t,
               const SlabSpec* slab = nullptr);

/// Every site reachable at time t from (x, s).
std::vector<std::uint32_t> reachable(const GraphicalRep& rep, std::uint32_t x, double s, double t,
                                     const SlabSpec* slab = nullptr);

Configuration evolve(const GraphicalRep& rep, const Configuration& initial, double t0, double t1);
Configuration dual_evolve(const GraphicalRep& rep, const Configuration& targets, double t, double s);
Configuration truncated_evolve(const GraphicalRep& rep, const SlabSpec& slab, const Configuration& initial,
                               double t1);
std::optional<int> rightmost(const GraphicalRep& rep, const Configuration& initial, int z, double s, double t);

/// Walk per the O/V recursion with each read answered by path search from
/// `initial` at time 0. Empty when the walk leaves the box.
std::optional<WalkResult> walk(const KernelSpec& kernel, const GraphicalRep& rep, const Configuration& initial,
                               const WalkDriver& driver);

struct Instance {
    GraphicalRep rep;
    Configuration a;
    Configuration b;
    double t0 = 0.0;
    double t1 = 0.0;
    int z = 0;
};

struct InstanceLimits {
    int max_events = 12;
    int max_radius = 3;
    double max_horizon = 2.0;
    /// Dimensions drawn uniformly from {1, ..., max_dim}.
    int max_dim = 2;
    bool allow_periodic = true;
};

/// Random diagram with at most max_events hand-placed events.
Instance random_instance(Rng& rng, const InstanceLimits& limits = {});

struct SuiteResult {
    std::string name;
    std::size_t passed = 0;
    std::size_t total = 0;
    std::vector<std::string> failures;

    bool ok() const { return passed == total; }
};

/// evolve, dual_evolve, rightmost, truncated_evolve and walk against the
/// brute-force references on `instances` random instances each.
std::vector<SuiteResult> run_suites(std::uint64_t seed, std::size_t instances, const InstanceLimits& limits = {});

/// Prints one pass-count line per suite; 0 when every suite passes.
int oracle_check(std::uint64_t seed, std::size_t instances, std::ostream& log);

} // namespace cpwalk::oracle
