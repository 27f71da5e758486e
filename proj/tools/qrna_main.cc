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


#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "qrna/error.h"
#include "qrna/harness.h"
#include "qrna/oracle.h"
#include "qrna/topology.h"

namespace {

void write_or_print(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw qrna::Error(qrna::ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    }
    out << text;
}

std::vector<std::string> golden_files(const std::string &path) {
    std::vector<std::string> out;
    if (std::filesystem::is_directory(path)) {
        for (const auto &entry : std::filesystem::directory_iterator(path)) {
            if (entry.is_regular_file() && entry.path().extension() == ".txt") {
                out.push_back(entry.path().string());
            }
        }
        std::sort(out.begin(), out.end());
    } else {
        out.push_back(path);
    }
    return out;
}

int check_tables(const std::string &topology_path, const std::string &golden_path) {
    auto topology = qrna::Topology::load(topology_path);
    auto routing = qrna::Routing::build(topology);
    int failures = 0;
    for (const auto &file : golden_files(golden_path)) {
        std::string golden = qrna::read_text_file(file);
        const std::string prefix = "Routing table at ";
        std::string owner = golden.substr(0, golden.find('\n'));
        if (owner.rfind(prefix, 0) != 0) {
            std::cout << "FAIL " << file << ": first line must name the table owner\n";
            failures++;
            continue;
        }
        owner = owner.substr(prefix.size());
        if (!topology.has(owner) || topology.is_network(owner)) {
            std::cout << "FAIL " << file << ": no node named " << owner << "\n";
            failures++;
            continue;
        }
        std::string diff = qrna::diff_tables(qrna::format_table(routing, routing.table(owner)), golden);
        if (diff.empty()) {
            std::cout << "PASS " << owner << " (" << file << ")\n";
        } else {
            std::cout << "FAIL " << owner << " (" << file << ")\n" << diff;
            failures++;
        }
    }
    return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum recursive network architecture simulator"};
    app.require_subcommand(1);

    std::string topology_path, scenario_path, trace_path, report_path, mode_text, golden_path;
    uint64_t seed = 0;

    auto *run = app.add_subcommand("run", "run a scenario and write its trace and report");
    run->add_option("--topology", topology_path, "topology file (overrides the scenario's)");
    run->add_option("--scenario", scenario_path, "scenario file")->required();
    auto *seed_opt = run->add_option("--seed", seed, "RNG seed (overrides the scenario's)");
    run->add_option("--mode", mode_text, "deterministic or stochastic")
        ->check(CLI::IsMember({"deterministic", "stochastic"}));
    run->add_option("--trace", trace_path, "trace output file ('-' for stdout)");
    run->add_option("--report", report_path, "report output file (default stdout)");

    auto *routes = app.add_subcommand("routes", "print every node's routing table");
    routes->add_option("--topology", topology_path, "topology file")->required();

    auto *oracle = app.add_subcommand("oracle", "replay a trace on a flat density matrix and compare");
    oracle->add_option("--trace", trace_path, "trace file")->required();

    auto *check = app.add_subcommand("check-tables", "compare routing tables with golden files");
    check->add_option("--topology", topology_path, "topology file")->required();
    check->add_option("--golden", golden_path, "golden table file or directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto scenario = qrna::Scenario::load(scenario_path);
            if (!topology_path.empty()) {
                scenario.topology = topology_path;
            }
            qrna::RunOptions options;
            if (*seed_opt) {
                options.seed = seed;
            }
            if (!mode_text.empty()) {
                options.mode = qrna::parse_mode(mode_text);
            }
            auto result = qrna::run(scenario, options);
            if (!trace_path.empty()) {
                write_or_print(trace_path, result.trace.to_text());
            }
            write_or_print(report_path, result.report);
            return result.all_ok() ? 0 : 1;
        }
        if (*routes) {
            auto topology = qrna::Topology::load(topology_path);
            std::cout << qrna::format_tables(qrna::Routing::build(topology));
            return 0;
        }
        if (*oracle) {
            auto report = qrna::replay_trace(qrna::Trace::parse(qrna::read_text_file(trace_path)));
            std::cout << qrna::format_oracle_report(report);
            return report.consistent(1e-9) ? 0 : 1;
        }
        if (*check) {
            return check_tables(topology_path, golden_path);
        }
    } catch (const qrna::Error &e) {
        std::cerr << "error (" << qrna::error_code_name(e.code()) << "): " << e.what() << "\n";
        return 2;
    }
    return 0;
}
