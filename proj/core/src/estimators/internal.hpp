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

#include <cstdio>
#include <string>
#include <vector>

#include "cpwalk/estimators.hpp"

namespace cpwalk::detail {

/// Fills table rows and abort bookkeeping from a finished batch.
template <class Row, class ToRow>
void collect(EstimatorOutput& out, const ReplicaBatch<Row>& batch, const RunSpec& run, ToRow&& to_row) {
    out.replicas = batch.rows.size();
    out.aborted = batch.aborted;
    for (std::size_t i = 0; i < batch.rows.size(); ++i) {
        if (!batch.rows[i]) continue;
        out.table.replica.push_back(i);
        out.table.rows.push_back(to_row(*batch.rows[i]));
    }
    const double frac = out.replicas ? double(out.aborted.size()) / double(out.replicas) : 0.0;
    if (frac > run.abort_budget) {
        out.abort_budget_exceeded = true;
        out.warnings.push_back("aborted replicas " + std::to_string(out.aborted.size()) + " of " +
                               std::to_string(out.replicas) + " exceed the budget");
    }
}

/// Formats grid values in labels: 200 -> "200", 0.5 -> "0.5".
inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

inline std::string at(const std::string& name, const std::string& key, double v) {
    return name + "[" + key + "=" + fmt(v) + "]";
}

std::vector<double> sorted_grid(std::vector<double> grid, const char* name);

} // namespace cpwalk::detail

namespace cpwalk::detail {

/// One walker run: rho_t / t and W_t / t at every grid time.
struct WalkSample {
    std::vector<double> rho;
    std::vector<Vector> velocity;
};

/// Samples a walk in the environment started from `initial`. A 0-bar start
/// reads a constant environment (0-bar is absorbing). Stream roles carry
/// `aux` so several ensembles of one replica stay independent.
WalkSample sample_walk(const KernelSpec& kernel, double lambda, const InitialSpec& initial,
                       const std::vector<double>& grid, const RunSpec& run, std::size_t replica,
                       std::uint64_t aux = 0);

} // namespace cpwalk::detail

#include "cpwalk/walker.hpp"

namespace cpwalk::detail {

inline DriverStreams driver_streams(const RunSpec& run, std::size_t replica, std::uint64_t aux = 0) {
    return DriverStreams{run.stream(replica, "jumps", aux), run.stream(replica, "O", aux),
                         run.stream(replica, "V", aux), std::nullopt};
}

} // namespace cpwalk::detail
