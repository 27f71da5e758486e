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


#ifndef QRNA_HARNESS_H
#define QRNA_HARNESS_H

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrna/engine.h"
#include "qrna/trace.h"

namespace qrna {

struct ScenarioRequest {
    std::string origin;
    Request request;
    size_t line = 0;
};

/// A batch of application requests plus the knobs they run under.
///
/// File format, one directive per line ('#' starts a comment):
///     topology <path>            relative to the scenario file
///     mode deterministic|stochastic
///     seed <n>
///     knob <name> <value>        p_gate, purify_rounds, retry_cap, pair_cap, recursion_limit,
///                                register_capacity, shuffle_seed, flink, pgen
///     request <origin> <REQ line>
struct Scenario {
    std::string topology;
    std::optional<GenerationMode> mode;
    std::optional<uint64_t> seed;
    Knobs knobs;
    size_t register_capacity = 16;
    std::optional<double> f_link;
    std::optional<double> p_gen;
    std::vector<ScenarioRequest> requests;

    static Scenario parse(std::string_view text, const std::string &base_dir = "");
    static Scenario load(const std::string &path);
};

struct RunOptions {
    std::optional<uint64_t> seed;
    std::optional<GenerationMode> mode;
    EngineLimits limits;
    /// Sees every density matrix the state store produces.
    std::function<void(const DensityMatrix &)> observer;
};

struct RunResult {
    uint64_t seed = 0;
    GenerationMode mode = GenerationMode::Deterministic;
    Trace trace;
    std::vector<Outcome> outcomes;
    std::string report;
    size_t largest_group = 0;

    bool all_ok() const;
};

/// Link overrides from the scenario are applied to a copy of the topology.
RunResult run(const Scenario &scenario, const Topology &topology, const RunOptions &options = {});
RunResult run(const Scenario &scenario, const RunOptions &options = {});

std::string format_report(const RunResult &result);

std::string read_text_file(const std::string &path);

}  // namespace qrna

#endif
