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


#include "qrna/harness.h"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qrna/error.h"
#include "qrna/wire.h"

namespace qrna {

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> out;
    size_t k = 0;
    while (k < line.size()) {
        while (k < line.size() && (line[k] == ' ' || line[k] == '\t')) {
            k++;
        }
        size_t start = k;
        while (k < line.size() && line[k] != ' ' && line[k] != '\t') {
            k++;
        }
        if (k > start) {
            out.push_back(line.substr(start, k - start));
        }
    }
    return out;
}

uint64_t parse_count(std::string_view text, size_t line) {
    uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError("expected an unsigned integer, got '" + std::string(text) + "'", 0, line);
    }
    return value;
}

double parse_unit(std::string_view text, size_t line, double lo, double hi, bool open_lo = false) {
    double value;
    try {
        value = parse_real(text);
    } catch (const ParseError &) {
        throw ParseError("expected a number, got '" + std::string(text) + "'", 0, line);
    }
    if (!(value <= hi && (open_lo ? value > lo : value >= lo))) {
        throw ParseError("value " + std::string(text) + " is out of range", 0, line);
    }
    return value;
}

}  // namespace

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Scenario Scenario::parse(std::string_view text, const std::string &base_dir) {
    Scenario s;
    std::set<std::pair<std::string, uint64_t>> ids;
    size_t line_no = 0;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        line_no++;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        auto words = split_words(line);
        if (words.empty()) {
            continue;
        }
        auto need = [&](size_t n) {
            if (words.size() != n) {
                throw ParseError("'" + std::string(words[0]) + "' takes " + std::to_string(n - 1) + " argument(s)", 0,
                                 line_no);
            }
        };
        if (words[0] == "topology") {
            need(2);
            std::filesystem::path p(words[1]);
            s.topology = p.is_absolute() || base_dir.empty() ? p.string() : (std::filesystem::path(base_dir) / p).string();
        } else if (words[0] == "mode") {
            need(2);
            s.mode = parse_mode(words[1]);
            if (!s.mode) {
                throw ParseError("unknown mode '" + std::string(words[1]) + "'", 0, line_no);
            }
        } else if (words[0] == "seed") {
            need(2);
            s.seed = parse_count(words[1], line_no);
        } else if (words[0] == "knob") {
            need(3);
            std::string_view name = words[1];
            std::string_view value = words[2];
            if (name == "p_gate") {
                s.knobs.p_gate = parse_unit(value, line_no, 0, 1);
            } else if (name == "purify_rounds") {
                s.knobs.purify_rounds = parse_count(value, line_no);
            } else if (name == "retry_cap") {
                s.knobs.retry_cap = parse_count(value, line_no);
            } else if (name == "pair_cap") {
                s.knobs.pair_cap = parse_count(value, line_no);
            } else if (name == "recursion_limit") {
                s.knobs.recursion_limit = parse_count(value, line_no);
            } else if (name == "register_capacity") {
                s.register_capacity = parse_count(value, line_no);
            } else if (name == "shuffle_seed") {
                s.knobs.shuffle_seed = parse_count(value, line_no);
            } else if (name == "flink") {
                s.f_link = parse_unit(value, line_no, 0.25, 1, true);
            } else if (name == "pgen") {
                s.p_gen = parse_unit(value, line_no, 0, 1);
            } else {
                throw ParseError("unknown knob '" + std::string(name) + "'", 0, line_no);
            }
        } else if (words[0] == "request") {
            if (words.size() < 3) {
                throw ParseError("request needs an origin and a REQ line", 0, line_no);
            }
            ScenarioRequest r;
            r.origin = std::string(words[1]);
            r.line = line_no;
            std::string_view rest = line.substr(static_cast<size_t>(words[2].data() - line.data()));
            while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\t')) {
                rest.remove_suffix(1);
            }
            try {
                r.request = decode_request(rest);
            } catch (const ParseError &e) {
                throw ParseError(std::string(e.what()), e.offset(), line_no);
            }
            if (!ids.insert({r.origin, request_id(r.request)}).second) {
                throw ParseError("request id " + std::to_string(request_id(r.request)) + " reused by " + r.origin, 0,
                                 line_no);
            }
            s.requests.push_back(std::move(r));
        } else {
            throw ParseError("unknown directive '" + std::string(words[0]) + "'", 0, line_no);
        }
    }
    return s;
}

Scenario Scenario::load(const std::string &path) {
    std::string text = read_text_file(path);
    try {
        return parse(text, std::filesystem::path(path).parent_path().string());
    } catch (const ParseError &e) {
        throw ParseError(path + ":" + std::to_string(e.line()) + ": " + e.what(), e.offset(), e.line());
    }
}

bool RunResult::all_ok() const {
    for (const auto &o : outcomes) {
        if (o.response.status != ResponseStatus::Ok) {
            return false;
        }
    }
    return true;
}

RunResult run(const Scenario &scenario, const Topology &base, const RunOptions &options) {
    Topology topology = base;
    for (auto &link : topology.mutable_links()) {
        if (scenario.f_link) {
            link.f_link = *scenario.f_link;
        }
        if (scenario.p_gen) {
            link.p_gen = *scenario.p_gen;
        }
    }
    Routing routing = Routing::build(topology);

    RunResult result;
    result.seed = options.seed.value_or(scenario.seed.value_or(1));
    result.mode = options.mode.value_or(scenario.mode.value_or(GenerationMode::Deterministic));
    StoreConfig config{options.limits, scenario.register_capacity, scenario.knobs.p_gate};
    StateStore store(topology.nodes(), config, &result.trace, result.seed);
    if (options.observer) {
        store.set_observer(options.observer);
    }
    Engine engine(routing, store, scenario.knobs, result.mode);
    for (const auto &r : scenario.requests) {
        engine.reserve_id(r.origin, request_id(r.request));
    }
    for (const auto &r : scenario.requests) {
        result.outcomes.push_back(engine.submit(r.origin, r.request));
        result.largest_group = std::max(result.largest_group, store.largest_group());
    }
    result.report = format_report(result);
    return result;
}

RunResult run(const Scenario &scenario, const RunOptions &options) {
    if (scenario.topology.empty()) {
        throw Error(ErrorCode::InvalidArgument, "scenario names no topology");
    }
    return run(scenario, Topology::load(scenario.topology), options);
}

std::string format_report(const RunResult &result) {
    std::string out = "mode=" + std::string(mode_name(result.mode)) + " seed=" + std::to_string(result.seed) + "\n";
    out += "id\torigin\tstatus\tf\ts\terr\tpairs\tgen_failures\tpurify_attempts\tpurify_successes\tswaps\tteleports\t"
           "leaked\n";
    size_t ok = 0, cv = 0, fail = 0;
    for (const auto &o : result.outcomes) {
        const auto &r = o.response;
        ok += r.status == ResponseStatus::Ok;
        cv += r.status == ResponseStatus::ConstraintViolation;
        fail += r.status == ResponseStatus::Fail;
        out += std::to_string(r.id) + "\t" + o.origin + "\t" + std::string(status_name(r.status)) + "\t" +
               format_real(r.measured_f) + "\t" + format_real(r.measured_s) + "\t" +
               (r.error ? std::string(error_code_name(*r.error)) : "-") + "\t" +
               std::to_string(o.counts.pairs_generated) + "\t" + std::to_string(o.counts.generation_failures) + "\t" +
               std::to_string(o.counts.purify_attempts) + "\t" + std::to_string(o.counts.purify_successes) + "\t" +
               std::to_string(o.counts.swaps) + "\t" + std::to_string(o.counts.teleports) + "\t" +
               std::to_string(o.leaked) + "\n";
    }
    out += "total=" + std::to_string(result.outcomes.size()) + " ok=" + std::to_string(ok) +
           " constraint_violation=" + std::to_string(cv) + " fail=" + std::to_string(fail) + "\n";
    return out;
}

}  // namespace qrna
