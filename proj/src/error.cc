// Copyright 2026 The QRNA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qrna/error.h"

namespace qrna {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::ResourceLimit:
            return "ResourceLimit";
        case ErrorCode::AddressError:
            return "AddressError";
        case ErrorCode::ShapeError:
            return "ShapeError";
        case ErrorCode::ImpossibleBranch:
            return "ImpossibleBranch";
        case ErrorCode::ParseError:
            return "ParseError";
        case ErrorCode::DoubleBind:
            return "DoubleBind";
        case ErrorCode::UnknownAddress:
            return "UnknownAddress";
        case ErrorCode::SlotBusy:
            return "SlotBusy";
        case ErrorCode::UnsupportedEncoding:
            return "UnsupportedEncoding";
        case ErrorCode::Unreachable:
            return "Unreachable";
        case ErrorCode::UnknownDestination:
            return "UnknownDestination";
        case ErrorCode::GenerationFailed:
            return "GenerationFailed";
        case ErrorCode::PurificationFailed:
            return "PurificationFailed";
        case ErrorCode::MismatchedEndpoints:
            return "MismatchedEndpoints";
        case ErrorCode::NoCommonNode:
            return "NoCommonNode";
        case ErrorCode::LoccViolation:
            return "LoccViolation";
        case ErrorCode::RecursionLimit:
            return "RecursionLimit";
        case ErrorCode::UnsupportedStrategy:
            return "UnsupportedStrategy";
        case ErrorCode::NoEligibleMember:
            return "NoEligibleMember";
        case ErrorCode::BudgetInfeasible:
            return "BudgetInfeasible";
        case ErrorCode::CycleDetected:
            return "CycleDetected";
        case ErrorCode::InvalidArgument:
            return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
}

ParseError::ParseError(const std::string &message, size_t offset, size_t line)
    : Error(ErrorCode::ParseError,
            (line ? "line " + std::to_string(line) + ", " : std::string()) + "offset " + std::to_string(offset) +
                ": " + message),
      offset_(offset),
      line_(line) {
}

}  // namespace qrna
