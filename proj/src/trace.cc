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


#include "qrna/trace.h"

#include "qrna/error.h"

namespace qrna {

namespace {

constexpr std::pair<TraceKind, std::string_view> kKindNames[] = {
    {TraceKind::ReqRecv, "REQ_RECV"}, {TraceKind::Decompose, "DECOMPOSE"}, {TraceKind::PairGen, "PAIR_GEN"},
    {TraceKind::Purify, "PURIFY"},    {TraceKind::Swap, "SWAP"},           {TraceKind::Teleport, "TELEPORT"},
    {TraceKind::Msg, "MSG"},          {TraceKind::Rsp, "RSP"},             {TraceKind::Op, "OP"},
};

}  // namespace

std::string_view trace_kind_name(TraceKind kind) {
    for (const auto &[k, name] : kKindNames) {
        if (k == kind) {
            return name;
        }
    }
    return "?";
}

std::optional<TraceKind> parse_trace_kind(std::string_view name) {
    for (const auto &[k, n] : kKindNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

const TraceEvent &Trace::append(std::string node, TraceKind kind, std::string request, std::string detail) {
    uint64_t seq = events_.empty() ? 1 : events_.back().seq + 1;
    events_.push_back({seq, std::move(node), kind, request.empty() ? "-" : std::move(request), std::move(detail)});
    return events_.back();
}

std::string format_event(const TraceEvent &event) {
    std::string out = std::to_string(event.seq);
    out += '\t';
    out += event.node;
    out += '\t';
    out += trace_kind_name(event.kind);
    out += '\t';
    out += event.request;
    out += '\t';
    out += event.detail;
    return out;
}

std::string Trace::to_text() const {
    std::string out;
    for (const auto &event : events_) {
        out += format_event(event);
        out += '\n';
    }
    return out;
}

Trace Trace::parse(std::string_view text) {
    Trace trace;
    size_t start = 0;
    size_t line = 0;
    while (start < text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        line++;
        std::string_view row = text.substr(start, end - start);
        if (!row.empty()) {
            std::vector<std::string_view> fields;
            size_t f = 0;
            while (fields.size() < 4) {
                size_t tab = row.find('\t', f);
                if (tab == std::string_view::npos) {
                    throw ParseError("trace line needs five tab-separated fields", start, line);
                }
                fields.push_back(row.substr(f, tab - f));
                f = tab + 1;
            }
            fields.push_back(row.substr(f));
            TraceEvent event;
            try {
                event.seq = std::stoull(std::string(fields[0]));
            } catch (const std::exception &) {
                throw ParseError("bad sequence number", start, line);
            }
            event.node = std::string(fields[1]);
            auto kind = parse_trace_kind(fields[2]);
            if (!kind) {
                throw ParseError("unknown event kind '" + std::string(fields[2]) + "'", start, line);
            }
            event.kind = *kind;
            event.request = std::string(fields[3]);
            event.detail = std::string(fields[4]);
            if (!trace.events_.empty() && event.seq <= trace.events_.back().seq) {
                throw ParseError("sequence numbers must increase", start, line);
            }
            trace.events_.push_back(std::move(event));
        }
        start = end + 1;
    }
    return trace;
}

std::map<std::string, std::string> parse_detail(std::string_view detail) {
    std::map<std::string, std::string> out;
    size_t positional = 0;
    size_t k = 0;
    while (k < detail.size()) {
        while (k < detail.size() && detail[k] == ' ') {
            k++;
        }
        size_t start = k;
        while (k < detail.size() && detail[k] != ' ') {
            k++;
        }
        if (k == start) {
            break;
        }
        std::string_view word = detail.substr(start, k - start);
        auto eq = word.find('=');
        if (eq == std::string_view::npos) {
            out["_" + std::to_string(positional++)] = std::string(word);
        } else {
            out[std::string(word.substr(0, eq))] = std::string(word.substr(eq + 1));
        }
    }
    return out;
}

}  // namespace qrna
