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


#ifndef QRNA_TRACE_H
#define QRNA_TRACE_H

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qrna {

enum class TraceKind { ReqRecv, Decompose, PairGen, Purify, Swap, Teleport, Msg, Rsp, Op };

std::string_view trace_kind_name(TraceKind kind);
std::optional<TraceKind> parse_trace_kind(std::string_view name);

/// One line of a trace: `seq<TAB>node<TAB>kind<TAB>request<TAB>detail`.
struct TraceEvent {
    uint64_t seq = 0;
    std::string node;
    TraceKind kind = TraceKind::Op;
    /// "<requester>#<id>", or "-" outside any request.
    std::string request;
    std::string detail;
    bool operator==(const TraceEvent &) const = default;
};

class Trace {
   public:
    const TraceEvent &append(std::string node, TraceKind kind, std::string request, std::string detail);
    const std::vector<TraceEvent> &events() const {
        return events_;
    }
    size_t size() const {
        return events_.size();
    }
    std::string to_text() const;
    /// Throws ParseError naming the line.
    static Trace parse(std::string_view text);

   private:
    std::vector<TraceEvent> events_;
};

std::string format_event(const TraceEvent &event);

/// Splits `key=value key=value` detail text. Words without '=' are stored under
/// "_0", "_1", ... in order.
std::map<std::string, std::string> parse_detail(std::string_view detail);

}  // namespace qrna

#endif
