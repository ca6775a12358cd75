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

#include <benchmark/benchmark.h>

#include "cpwalk/configuration.hpp"
#include "cpwalk/estimators.hpp"
#include "cpwalk/events.hpp"
#include "cpwalk/sparse.hpp"
#include "cpwalk/sweeper.hpp"
#include "cpwalk/walker.hpp"

using namespace cpwalk;

namespace {

Rng stream(const char* role, std::uint64_t aux = 0) { return RngPolicy(42).stream({"bench", 0, role, aux}); }

void BM_EventGenerator(benchmark::State& state) {
    const Box box = Box::cube(int(state.range(0)), int(state.range(1)));
    Event buf[256];
    std::uint64_t n = 0;
    for (auto _ : state) {
        EventGenerator g(box, 2.0, 1.0, stream("gen", n));
        while (std::size_t k = g.fill(buf, 256)) {
            benchmark::DoNotOptimize(buf[k - 1]);
            n += k;
        }
    }
    state.SetItemsProcessed(std::int64_t(n));
}
BENCHMARK(BM_EventGenerator)->Args({1, 1000})->Args({2, 30});

void BM_SweepOnes(benchmark::State& state) {
    const Box box = Box::cube(int(state.range(0)), int(state.range(1)));
    const int lanes = int(state.range(2));
    std::uint64_t events = 0, rep = 0;
    for (auto _ : state) {
        Sweeper sw(box, EventCursor(EventGenerator(box, 2.0, 5.0, stream("sweep", rep++), lanes > 1)));
        for (int l = 0; l < lanes; ++l) sw.add_lane(Configuration::ones(box), 1.0 - 0.1 * l);
        sw.advance_to(5.0);
        events += sw.applied_events();
    }
    state.SetItemsProcessed(std::int64_t(events));
}
BENCHMARK(BM_SweepOnes)->Args({1, 1000, 1})->Args({1, 1000, 6})->Args({2, 30, 1});

void BM_WalkOnSweep(benchmark::State& state) {
    const KernelSpec k = build_kernel(nearest_neighbour_drift_kernel(2.0, 1.0), 1);
    const double horizon = double(state.range(0));
    const int reach = walk_reach(k, horizon);
    const int radius = safety_radius(reach, 2.0, horizon, 2.0);
    const Box box = Box::cube(1, radius);
    std::uint64_t rep = 0;
    for (auto _ : state) {
        Sweeper sw(box, EventCursor(EventGenerator(box, 2.0, horizon, stream("walk", rep))));
        sw.add_lane(Configuration::ones(box));
        SweepEnvironment env(sw, 0, radius - reach);
        const WalkDriver d = sample_driver(k.gamma(), horizon,
                                           DriverStreams{stream("jumps", rep), stream("O", rep), stream("V", rep), std::nullopt});
        benchmark::DoNotOptimize(run_walk(k, env, d).rho.back());
        ++rep;
    }
    state.SetItemsProcessed(std::int64_t(rep));
}
BENCHMARK(BM_WalkOnSweep)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SparseSlab(benchmark::State& state) {
    const Box box = Box::cube(2, 40);
    const SlabSpec slab{10, 0.0, 0};
    std::uint64_t events = 0, rep = 0;
    for (auto _ : state) {
        SparseContact sc(box, 1.0, stream("sparse", rep++), slab);
        sc.occupy(Point{});
        sc.advance_to(20.0);
        events += sc.events();
    }
    state.SetItemsProcessed(std::int64_t(events));
}
BENCHMARK(BM_SparseSlab);

} // namespace

BENCHMARK_MAIN();
