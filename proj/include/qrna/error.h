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

#ifndef QRNA_ERROR_H
#define QRNA_ERROR_H

#include <stdexcept>
#include <string>
#include <string_view>

namespace qrna {

enum class ErrorCode {
    ResourceLimit,
    AddressError,
    ShapeError,
    ImpossibleBranch,
    ParseError,
    DoubleBind,
    UnknownAddress,
    SlotBusy,
    UnsupportedEncoding,
    Unreachable,
    UnknownDestination,
    GenerationFailed,
    PurificationFailed,
    MismatchedEndpoints,
    NoCommonNode,
    LoccViolation,
    RecursionLimit,
    UnsupportedStrategy,
    NoEligibleMember,
    BudgetInfeasible,
    CycleDetected,
    InvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that callers
/// (and the harness report) can classify it without string matching.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message);
    ErrorCode code() const noexcept {
        return code_;
    }

   private:
    ErrorCode code_;
};

/// Parse failures remember where in the input they happened.
class ParseError : public Error {
   public:
    ParseError(const std::string &message, size_t offset, size_t line = 0);
    size_t offset() const noexcept {
        return offset_;
    }
    size_t line() const noexcept {
        return line_;
    }

   private:
    size_t offset_;
    size_t line_;
};

}  // namespace qrna

#endif
