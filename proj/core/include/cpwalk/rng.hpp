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
#include <string>
#include <string_view>

#include "cpwalk/xoshiro.hpp"

namespace cpwalk {

/// One labeled random stream: xoshiro256++ seeded from a derived 64-bit key.
class Rng {
public:
    explicit Rng(std::uint64_t key);

    std::uint64_t next_u64() { return engine_(); }
    /// 53-bit uniform on [0,1).
    double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform on (0,1].
    double uniform_open0() { return double((engine_() >> 11) + 1) * 0x1.0p-53; }
    double exponential(double rate);
    Xoshiro256pp& engine() { return engine_; }
    /// Uniform integer on [0, n), n > 0.
    std::uint64_t below(std::uint64_t n);
    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t key() const { return key_; }

private:
    Xoshiro256pp engine_;
    std::uint64_t key_;
};

struct StreamLabel {
    std::string experiment;
    std::uint64_t replica = 0;
    std::string role;
    std::uint64_t aux = 0;

    std::string to_string() const;
};

class RngPolicy {
public:
    explicit RngPolicy(std::uint64_t master_seed) : master_(master_seed) {}

    std::uint64_t master_seed() const { return master_; }
    std::uint64_t key(const StreamLabel& label) const;
    Rng stream(const StreamLabel& label) const { return Rng(key(label)); }

private:
    std::uint64_t master_;
};

Rng derive_stream(const RngPolicy& policy, const StreamLabel& label);

std::uint64_t fnv1a(std::string_view s);
std::uint64_t splitmix64(std::uint64_t x);

} // namespace cpwalk
