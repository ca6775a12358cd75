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

#include <sstream>

#include "cpwalk/graphical.hpp"
#include "cpwalk/oracles.hpp"
#include "test_util.hpp"

using namespace cpwalk;

TEST(Oracles, AllSuitesAgree) {
    const auto results = oracle::run_suites(20260101, 1500);
    ASSERT_EQ(results.size(), 5u);
    for (const auto& r : results) {
        EXPECT_GT(r.total, 0u) << r.name;
        EXPECT_EQ(r.passed, r.total) << r.name << (r.failures.empty() ? "" : ": " + r.failures.front());
    }
}

TEST(Oracles, HandDiagram) {
    const Box box = Box::cube(1, 2);
    const auto o = box.index(Point{0, 0, 0, 0});
    const GraphicalRep rep(box, 1.0, 1.0, {Event::arrow(0.3, o, 0), Event::cross(0.5, o)});
    // From (o, 0): o dies at 0.5 but +1 was infected at 0.3.
    EXPECT_EQ(oracle::reachable(rep, o, 0.0, 1.0), std::vector<std::uint32_t>{o + 1});
    EXPECT_TRUE(oracle::connected(rep, o, 0.0, o, 0.4));
    EXPECT_FALSE(oracle::connected(rep, o, 0.0, o, 0.6));
    EXPECT_FALSE(oracle::connected(rep, o, 0.35, o + 1, 1.0));
}

TEST(Oracles, TruncatedOracleRespectsSlab) {
    const Box box = Box::cube(1, 3);
    const auto o = box.index(Point{0, 0, 0, 0});
    const GraphicalRep rep(box, 1.0, 1.0, {Event::arrow(0.2, o, 0), Event::arrow(0.4, o + 1, 0)});
    const SlabSpec slab{1, 0.0, 0};
    EXPECT_EQ(oracle::reachable(rep, o, 0.0, 1.0), (std::vector<std::uint32_t>{o, o + 1, o + 2}));
    EXPECT_EQ(oracle::reachable(rep, o, 0.0, 1.0, &slab), (std::vector<std::uint32_t>{o, o + 1}));
}

TEST(Oracles, CheckReportsCounts) {
    std::ostringstream log;
    EXPECT_EQ(oracle::oracle_check(3, 200, log), 0);
    EXPECT_NE(log.str().find("all suites pass"), std::string::npos);
    EXPECT_NE(log.str().find("evolve: 200/200"), std::string::npos);
}
