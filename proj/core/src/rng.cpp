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

#include "cpwalk/rng.hpp"

#include <cmath>

#include "cpwalk/ziggurat.hpp"

namespace cpwalk {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

const ExpZiggurat& ExpZiggurat::get() {
    static const ExpZiggurat table = [] {
        ExpZiggurat z;
        z.x[0] = v / std::exp(-r);
        z.x[1] = r;
        for (std::size_t i = 2; i < 256; ++i) z.x[i] = -std::log(v / z.x[i - 1] + std::exp(-z.x[i - 1]));
        z.x[256] = 0.0;
        for (std::size_t i = 0; i < 257; ++i) z.f[i] = std::exp(-z.x[i]);
        return z;
    }();
    return table;
}

Rng::Rng(std::uint64_t key) : engine_(key), key_(key) {}

double Rng::exponential(double rate) {
    return exp_ziggurat(engine_) / rate;
}

std::uint64_t Rng::below(std::uint64_t n) {
    // Lemire's multiply-shift with rejection.
    unsigned __int128 m = (unsigned __int128)engine_() * n;
    auto low = std::uint64_t(m);
    if (low < n) {
        std::uint64_t t = (0 - n) % n;
        while (low < t) {
            m = (unsigned __int128)engine_() * n;
            low = std::uint64_t(m);
        }
    }
    return std::uint64_t(m >> 64);
}

std::string StreamLabel::to_string() const {
    std::string s = experiment + "/" + std::to_string(replica) + "/" + role;
    if (aux != 0) s += "/" + std::to_string(aux);
    return s;
}

std::uint64_t RngPolicy::key(const StreamLabel& label) const {
    std::uint64_t h = splitmix64(master_ ^ fnv1a(label.experiment));
    h = splitmix64(h ^ splitmix64(label.replica));
    h = splitmix64(h ^ fnv1a(label.role));
    h = splitmix64(h ^ splitmix64(label.aux + 0x632be59bd9b4e019ull));
    return h;
}

Rng derive_stream(const RngPolicy& policy, const StreamLabel& label) {
    return policy.stream(label);
}

} // namespace cpwalk
