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

#include <charconv>
#include <cmath>

#include "cpwalk/errors.hpp"
#include "cpwalk/estimators.hpp"
#include "cpwalk/graphical.hpp"

namespace cpwalk {

StreamLabel RunSpec::label(std::size_t replica, std::string_view role, std::uint64_t aux) const {
    return StreamLabel{experiment, std::uint64_t(replica), std::string(role), aux};
}

Rng RunSpec::stream(std::size_t replica, std::string_view role, std::uint64_t aux) const {
    return RngPolicy(seed).stream(label(replica, role, aux));
}

std::string InitialSpec::to_string() const {
    switch (law) {
    case InitialLaw::ones: return "ones";
    case InitialLaw::zeros: return "zeros";
    case InitialLaw::bernoulli: {
        char buf[64];
        auto r = std::to_chars(buf, buf + sizeof buf, density);
        return "bernoulli(" + std::string(buf, r.ptr) + ")";
    }
    case InitialLaw::upper_invariant: return "upper-invariant";
    }
    return "unknown";
}

InitialSpec parse_initial(std::string_view text) {
    InitialSpec s;
    if (text == "ones" || text == "1") {
        s.law = InitialLaw::ones;
    } else if (text == "zeros" || text == "0") {
        s.law = InitialLaw::zeros;
    } else if (text == "upper-invariant" || text == "upper_invariant") {
        s.law = InitialLaw::upper_invariant;
    } else if (text.starts_with("bernoulli(") && text.ends_with(")")) {
        auto inner = text.substr(10, text.size() - 11);
        double p = 0.0;
        auto r = std::from_chars(inner.data(), inner.data() + inner.size(), p);
        if (r.ec != std::errc() || r.ptr != inner.data() + inner.size() || !(p >= 0.0 && p <= 1.0))
            fail(ErrorCode::validation_error, "initial: bad bernoulli density in '" + std::string(text) + "'");
        s.law = InitialLaw::bernoulli;
        s.density = p;
    } else {
        fail(ErrorCode::validation_error, "initial: unknown law '" + std::string(text) + "'");
    }
    return s;
}

double initial_lead(const InitialSpec& spec) {
    return spec.law == InitialLaw::upper_invariant ? spec.burn_in : 0.0;
}

Configuration sample_initial(const Box& box, const InitialSpec& spec, double lambda, Rng rng) {
    switch (spec.law) {
    case InitialLaw::ones: return Configuration(box, true);
    case InitialLaw::zeros: return Configuration(box, false);
    case InitialLaw::bernoulli: return sample_bernoulli_config(box, spec.density, rng);
    case InitialLaw::upper_invariant: return sample_upper_invariant(box, lambda, spec.burn_in, std::move(rng));
    }
    return Configuration(box, true);
}

int walk_reach(const KernelSpec& kernel, double horizon) {
    const double mean = kernel.gamma() * horizon;
    // Poisson upper tail beyond mean + 8 sqrt(mean) + 10 is far below 1e-12.
    const double jumps = std::ceil(mean + 8.0 * std::sqrt(mean) + 10.0);
    return int(jumps) * std::max(1, check_properties(kernel).max_range);
}

std::size_t ReplicaTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    fail(ErrorCode::invalid_argument, "no column " + std::string(name));
}

std::vector<double> ReplicaTable::values(std::string_view name) const {
    const std::size_t c = column(name);
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(r[c]);
    return v;
}

const EstimateReport* EstimatorOutput::estimate(std::string_view label) const {
    for (const auto& e : estimates)
        if (e.label == label) return &e;
    return nullptr;
}

const TailFit* EstimatorOutput::fit(std::string_view label) const {
    for (const auto& [name, f] : fits)
        if (name == label) return &f;
    return nullptr;
}

const Check* EstimatorOutput::check(std::string_view name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::optional<double> EstimatorOutput::value(std::string_view name) const {
    for (const auto& [k, v] : values)
        if (k == name) return v;
    return std::nullopt;
}

bool EstimatorOutput::inconclusive() const {
    for (const auto& [name, f] : fits)
        if (f.status == FitStatus::inconclusive) return true;
    return false;
}

} // namespace cpwalk
