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

#include <iostream>

#include "cpwalk/harness.hpp"
#include "cpwalk/oracles.hpp"

int main(int argc, char** argv) {
    cpwalk::CliHooks hooks;
    hooks.oracle_check = [](std::uint64_t seed, std::size_t instances, std::ostream& log) {
        return cpwalk::oracle::oracle_check(seed, instances, log);
    };
    return cpwalk::run_cli(argc, argv, hooks, std::cout, std::cerr);
}
