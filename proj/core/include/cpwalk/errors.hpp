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

#include <stdexcept>
#include <string>
#include <string_view>

namespace cpwalk {

enum class ErrorCode {
    negative_rate,
    empty_row,
    dimension_mismatch,
    resource_limit,
    time_out_of_range,
    walker_left_safe_region,
    observer_contract_violation,
    inconclusive_fit,
    abort_budget_exceeded,
    parse_error,
    validation_error,
    invalid_argument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

/// Errors that abort a single replica instead of the whole run.
inline bool is_replica_error(ErrorCode code) {
    return code == ErrorCode::walker_left_safe_region;
}

} // namespace cpwalk
