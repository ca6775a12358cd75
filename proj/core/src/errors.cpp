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

#include "cpwalk/errors.hpp"

namespace cpwalk {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::negative_rate: return "NegativeRate";
    case ErrorCode::empty_row: return "EmptyRow";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::resource_limit: return "ResourceLimit";
    case ErrorCode::time_out_of_range: return "TimeOutOfRange";
    case ErrorCode::walker_left_safe_region: return "WalkerLeftSafeRegion";
    case ErrorCode::observer_contract_violation: return "ObserverContractViolation";
    case ErrorCode::inconclusive_fit: return "InconclusiveFit";
    case ErrorCode::abort_budget_exceeded: return "AbortBudgetExceeded";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::validation_error: return "ValidationError";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

void fail(ErrorCode code, const std::string& what) {
    throw Error(code, std::string(to_string(code)) + ": " + what);
}

} // namespace cpwalk
