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


#ifndef QRNA_WIRE_H
#define QRNA_WIRE_H

#include <string>
#include <string_view>
#include <variant>

#include "qrna/request.h"

namespace qrna {

/// Canonical single-line text form. Floats use 17 significant digits so the text
/// round-trips bit-exactly.
std::string encode(const Request &request);
std::string encode(const StateRequest &request);
std::string encode(const ActionRequest &request);
std::string encode(const Response &response);
std::string encode_spec(const StateSpec &spec);
std::string encode_op(const CircuitOp &op);

using Message = std::variant<StateRequest, ActionRequest, Response>;

/// Inverse of encode. Throws ParseError (with byte offset) on malformed input.
Message decode(std::string_view text);
Request decode_request(std::string_view text);
Response decode_response(std::string_view text);

std::string format_real(double value);
/// Parses a whole token produced by format_real.
double parse_real(std::string_view text, size_t offset = 0);

}  // namespace qrna

#endif
