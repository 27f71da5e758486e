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


// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and time limits are fixed
// here; the process exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "flat_oracle.h"
#include "qrna/engine.h"
#include "qrna/error.h"
#include "qrna/harness.h"
#include "qrna/link_layer.h"
#include "qrna/oracle.h"
#include "qrna/virtual_map.h"
#include "qrna/wire.h"
#include "random_requests.h"

using namespace qrna;

namespace {

const std::string kData = QRNA_DATA_DIR;

constexpr double kStateTol = 1e-9;
constexpr double kPureEntropyTol = 1e-9;
constexpr double kMixedEntropyTol = 1e-12;

const char *kRa =
    "REQ 1 STATE spec=CIRCUIT[H(Node11:1000);H(Node55:1000);H(Node77:1000);CZ(Node11:1000,Node55:1000);"
    "CZ(Node55:1000,Node77:1000)] fmin=0.98999999999999999 smax=0.10000000000000001 "
    "targets=(Node11:1000,Node55:1000,Node77:1000) enc=RAW";

/// Worst invariant violations over every state produced in criteria 3-7.
struct InvariantWatch {
    size_t states = 0;
    double trace_error = 0;
    double hermiticity_error = 0;
    double min_eigenvalue = 1;

    void operator()(const DensityMatrix &rho) {
        auto r = check_invariants(rho);
        states++;
        trace_error = std::max(trace_error, r.trace_error);
        hermiticity_error = std::max(hermiticity_error, r.hermiticity_error);
        min_eigenvalue = std::min(min_eigenvalue, r.min_eigenvalue);
    }
};

InvariantWatch watch;

std::function<void(const DensityMatrix &)> observer() {
    return [](const DensityMatrix &rho) { watch(rho); };
}

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string num(double x) {
    std::ostringstream out;
    out.precision(3);
    out << x;
    return out.str();
}

int failures = 0;

void criterion(int number, const std::string &title, double limit_seconds, const std::function<Verdict()> &body) {
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception &e) {
        v.pass = false;
        v.detail = std::string("exception: ") + e.what();
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_seconds > 0) {
        v.require(elapsed < limit_seconds, "took " + num(elapsed) + " s, limit " + num(limit_seconds) + " s");
    }
    failures += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << number << " " << title << " (" << num(elapsed) << " s)";
    if (!v.detail.empty()) {
        std::cout << ": " << v.detail;
    }
    std::cout << std::endl;
}

std::vector<std::string> scenario_files() {
    std::vector<std::string> out;
    for (const auto &entry : std::filesystem::directory_iterator(kData + "/scenarios")) {
        if (entry.path().extension() == ".scn") {
            out.push_back(entry.path().string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Scenario ra_scenario(double f_link, size_t purify_rounds) {
    std::string text = "topology example.topo\nmode deterministic\nseed 1\n";
    text += "knob flink " + format_real(f_link) + "\n";
    text += "knob purify_rounds " + std::to_string(purify_rounds) + "\n";
    text += "request Node11 " + std::string(kRa) + "\n";
    return Scenario::parse(text, kData);
}

RunResult run_watched(const Scenario &scenario) {
    RunOptions options;
    options.observer = observer();
    return run(scenario, options);
}

struct LinkFixture {
    Trace trace;
    StateStore store;
    LinkFixture(uint64_t seed, double p_gate)
        : store({"A", "B", "C"}, StoreConfig{EngineLimits{}, 16, p_gate}, &trace, seed) {
        store.set_observer(observer());
    }
    EntangledPairHandle pair(const std::string &a, const std::string &b, uint64_t v, double f) {
        Link link{a, b, 1, f, 1};
        auto handle = generate_pair(store, link, {a, FullVirtualId{"T", 1, v}}, {b, FullVirtualId{"T", 1, v}},
                                    GenerationMode::Deterministic);
        if (!handle) {
            throw Error(ErrorCode::GenerationFailed, "deterministic generation failed");
        }
        return *handle;
    }
};

Verdict golden_tables() {
    Verdict v;
    auto topology = Topology::load(kData + "/example.topo");
    auto routing = Routing::build(topology);
    for (const auto &[owner, file] : {std::pair{"Node11", "table_node11.txt"}, {"Node51", "table_node51.txt"}}) {
        std::string golden = read_text_file(kData + "/golden/" + file);
        std::string generated = format_table(routing, routing.table(owner));
        v.require(generated == golden, std::string(owner) + " differs:\n" + diff_tables(generated, golden));
    }
    return v;
}

Verdict seven_sub_requests() {
    Verdict v;
    auto topology = Topology::load(kData + "/example.topo");
    auto routing = Routing::build(topology);
    Trace trace;
    StateStore store(topology.nodes(), StoreConfig{}, &trace, 1);
    Engine engine(routing, store, Knobs{}, GenerationMode::Deterministic);
    engine.reserve_id("Node11", 1);
    auto dag = engine.decompose("Node11", {"Node11", 1}, std::get<StateRequest>(decode_request(kRa)));
    v.require(dag.center == "Net5", "center is " + dag.center);
    v.require(dag.nodes.size() == 7, std::to_string(dag.nodes.size()) + " sub-requests");
    std::map<uint64_t, const SubRequest *> by_id;
    size_t creates = 0, pairs = 0, teleports = 0;
    for (const auto &n : dag.nodes) {
        v.require(by_id.emplace(n.id, &n).second, "duplicate sub-request id");
        creates += n.role == SubRole::Create;
        pairs += n.role == SubRole::Pair;
        teleports += n.role == SubRole::Teleport;
        if (n.role == SubRole::Create) {
            v.require(n.executor == "Net5" || topology.contains("Net5", n.executor),
                      "creation runs at " + n.executor);
            v.require(request_targets(n.request).size() == 3, "creation does not hold three qubits");
        }
    }
    v.require(creates == 1 && pairs == 3 && teleports == 3, "wrong role mix");
    std::set<uint64_t> pairs_used;
    for (const auto &n : dag.nodes) {
        if (n.role != SubRole::Teleport) {
            v.require(n.after.empty(), "non-teleport sub-request has prerequisites");
            continue;
        }
        size_t on_create = 0, on_pair = 0;
        for (auto p : n.after) {
            auto it = by_id.find(p);
            if (it == by_id.end()) {
                v.require(false, "dependency on unknown id");
                continue;
            }
            on_create += it->second->role == SubRole::Create;
            if (it->second->role == SubRole::Pair) {
                on_pair++;
                pairs_used.insert(p);
            }
        }
        v.require(n.after.size() == 2 && on_create == 1 && on_pair == 1,
                  "teleport " + std::to_string(n.id) + " must depend on the creation and one pair");
    }
    v.require(pairs_used.size() == 3, "teleports do not use three distinct pairs");
    return v;
}

Verdict noiseless_cluster() {
    Verdict v;
    auto result = run_watched(ra_scenario(1, 3));
    const auto &r = result.outcomes.at(0).response;
    v.require(r.status == ResponseStatus::Ok, "status " + std::string(status_name(r.status)));
    v.require(std::abs(r.measured_f - 1) <= kStateTol, "f=" + format_real(r.measured_f));
    v.require(std::abs(r.measured_s) <= kStateTol, "s=" + format_real(r.measured_s));
    if (r.rho) {
        // Independent check of the delivered state against a cluster built from full matrices.
        double f = oracle::fid(r.rho->entries(), oracle::linear_cluster(3));
        v.require(std::abs(f - 1) <= kStateTol, "flat cluster fidelity " + format_real(f));
    } else {
        v.require(false, "no delivered state");
    }
    return v;
}

Verdict oracle_equivalence() {
    Verdict v;
    size_t compared = 0;
    double worst = 0;
    for (const auto &path : scenario_files()) {
        auto result = run_watched(Scenario::load(path));
        auto replay = replay_trace(Trace::parse(result.trace.to_text()), 12);
        std::string name = std::filesystem::path(path).filename().string();
        v.require(replay.peak_qubits <= 12, name + " needs " + std::to_string(replay.peak_qubits) + " qubits");
        v.require(replay.consistent(kStateTol), name + " replay inconsistent");
        for (const auto &o : result.outcomes) {
            if (!o.response.rho) {
                continue;
            }
            std::string label = o.origin + "#" + std::to_string(o.response.id);
            const OracleCheck *root = nullptr;
            for (const auto &c : replay.checks) {
                if (c.request == label && c.node == o.origin && c.state_request) {
                    root = &c;
                }
            }
            if (!root) {
                v.require(false, name + " has no replayed response for " + label);
                continue;
            }
            double d = trace_distance(*o.response.rho, root->state);
            worst = std::max(worst, d);
            compared++;
            v.require(d <= kStateTol, name + " " + label + " trace distance " + format_real(d));
            v.require(root->reported_f == o.response.measured_f, name + " " + label + " reported f differs");
        }
    }
    v.require(compared >= 6, "only " + std::to_string(compared) + " delivered states compared");
    if (v.pass) {
        v.detail = std::to_string(compared) + " states, worst trace distance " + num(worst);
    }
    return v;
}

Verdict purification_sweep() {
    Verdict v;
    for (int k = 0; k <= 8; k++) {
        double f = 0.55 + 0.05 * k;
        auto expected = oracle::purify_werner(f, f);
        v.require(std::abs(expected.branch_sum - 1) <= kStateTol, "oracle branches do not sum to one");
        bool succeeded = false;
        for (uint64_t seed = 0; seed < 32 && !succeeded; seed++) {
            LinkFixture fx(seed, 0);
            auto keep = fx.pair("A", "B", 0, f);
            auto sac = fx.pair("A", "B", 1, f);
            auto result = purify(fx.store, keep, sac);
            v.require(std::abs(result.success_probability - expected.success_probability) <= kStateTol,
                      "F=" + num(f) + " success probability " + format_real(result.success_probability));
            if (result.pair) {
                succeeded = true;
                double got = fx.store.bell_fidelity(result.pair->a, result.pair->b);
                v.require(std::abs(got - expected.fidelity) <= kStateTol,
                          "F=" + num(f) + " output fidelity " + format_real(got));
                v.require(got > f, "F=" + num(f) + " did not improve");
            }
        }
        v.require(succeeded, "F=" + num(f) + " never succeeded");
    }
    return v;
}

Verdict swap_degradation() {
    Verdict v;
    auto swapped = [](double p_gate) {
        LinkFixture fx(1, p_gate);
        auto out = swap(fx.store, fx.pair("A", "B", 0, 0.95), fx.pair("B", "C", 1, 0.90));
        return fx.store.bell_fidelity(out.a, out.b);
    };
    double ideal = swapped(0);
    double expected = oracle::swap_werner(0.95, 0.90);
    v.require(std::abs(ideal - expected) <= kStateTol, "ideal swap " + format_real(ideal));
    for (double p : {0.01, 0.05}) {
        double noisy = swapped(p);
        v.require(noisy < ideal, "p_gate=" + num(p) + " gave " + format_real(noisy));
        v.require(std::abs(noisy - oracle::swap_werner(0.95, 0.90, p)) <= kStateTol,
                  "p_gate=" + num(p) + " differs from the oracle");
    }
    return v;
}

/// Closed-form flat model of R_A over uniform Werner links without purification: every
/// cluster qubit is prepared at Node51 and teleported over a two-link swapped pair
/// (Node51-Node19-Node11, Node51-Node52-Node55, Node51-Node71-Node77). Teleporting through a
/// Werner(F) pair is a depolarizing channel with p = 1 - F on that qubit.
double ra_flat_fidelity(double f_link) {
    double f_pair = oracle::swap_werner(f_link, f_link);
    oracle::V psi = oracle::linear_cluster(3);
    oracle::M rho = psi * psi.adjoint();
    for (size_t q = 0; q < 3; q++) {
        rho = oracle::depolarize(rho, q, 3, 1 - f_pair);
    }
    return oracle::fid(rho, psi);
}

Verdict constraint_enforcement() {
    Verdict v;
    auto result = run_watched(ra_scenario(0.9, 0));
    const auto &r = result.outcomes.at(0).response;
    double expected = ra_flat_fidelity(0.9);
    v.require(r.status == ResponseStatus::ConstraintViolation, "status " + std::string(status_name(r.status)));
    v.require(std::abs(r.measured_f - expected) <= kStateTol,
              "f=" + format_real(r.measured_f) + " flat=" + format_real(expected));
    v.require(r.measured_f < 0.99, "f is not below f_min");
    auto replay = replay_trace(result.trace);
    v.require(replay.consistent(kStateTol), "trace replay inconsistent");
    if (v.pass) {
        v.detail = "f=" + format_real(r.measured_f);
    }
    return v;
}

Verdict protocol_invariants() {
    Verdict v;
    std::mt19937_64 rng(8);
    size_t tuples = 0;
    for (int k = 0; k < 1500; k++) {
        auto request = qrna_testing::random_request(rng);
        auto text = encode(request);
        v.require(decode_request(text) == request, "request round trip: " + text);
        auto response = qrna_testing::random_response(rng);
        auto rtext = encode(response);
        v.require(same_wire_fields(decode_response(rtext), response), "response round trip: " + rtext);
        tuples += 2;
        if (!v.pass) {
            return v;
        }
    }

    for (int round = 0; round < 50; round++) {
        VirtualMap map("N");
        std::map<FullVirtualId, QubitSlot> model;
        std::set<QubitSlot> used;
        for (int step = 0; step < 300; step++) {
            FullVirtualId id{"R" + std::to_string(rng() % 3), rng() % 4, rng() % 8};
            QubitSlot slot{"N", static_cast<uint32_t>(rng() % 16)};
            bool bound = model.count(id) != 0;
            bool busy = used.count(slot) != 0;
            switch (rng() % 3) {
                case 0:
                    try {
                        map.bind(id, slot);
                        v.require(!bound && !busy, "bind accepted a collision");
                        model[id] = slot;
                        used.insert(slot);
                    } catch (const Error &e) {
                        v.require(bound || busy, "bind refused a free slot");
                    }
                    break;
                case 1:
                    if (bound && !busy) {
                        map.rebind(id, slot);
                        used.erase(model[id]);
                        used.insert(slot);
                        model[id] = slot;
                    }
                    break;
                default:
                    if (bound) {
                        v.require(map.release(id) == model[id], "release returned the wrong slot");
                        used.erase(model[id]);
                        model.erase(id);
                    }
            }
            v.require(map.consistent() && map.bindings() == model, "map diverged from the model");
            if (!v.pass) {
                return v;
            }
        }
        for (const auto &[id, slot] : model) {
            map.release(id);
        }
        v.require(map.size() == 0, "bindings leaked after releasing everything");
    }

    for (const auto &path : scenario_files()) {
        auto scenario = Scenario::load(path);
        std::string name = std::filesystem::path(path).filename().string();
        auto a = run(scenario);
        auto b = run(scenario);
        v.require(a.trace.to_text() == b.trace.to_text() && a.report == b.report, name + " is not reproducible");
        uint64_t previous = 0;
        bool first = true;
        for (const auto &e : a.trace.events()) {
            v.require(first || e.seq == previous + 1, name + " sequence numbers are not monotone");
            previous = e.seq;
            first = false;
        }
        for (const auto &o : a.outcomes) {
            v.require(o.leaked == 0, name + " leaked bindings");
        }
    }
    if (v.pass) {
        v.detail = std::to_string(tuples) + " wire tuples";
    }
    return v;
}

Verdict density_numerics() {
    Verdict v;
    v.require(watch.states > 0, "no states observed");
    v.require(watch.trace_error <= 1e-12, "trace error " + num(watch.trace_error));
    v.require(watch.hermiticity_error <= 1e-12, "hermiticity error " + num(watch.hermiticity_error));
    v.require(watch.min_eigenvalue >= -1e-10, "min eigenvalue " + num(watch.min_eigenvalue));

    std::mt19937_64 rng(9);
    std::normal_distribution<double> normal;
    double worst_pure = 0;
    for (size_t n = 1; n <= 6; n++) {
        for (int k = 0; k < 10; k++) {
            StateVector psi(Eigen::Index{1} << n);
            for (Eigen::Index i = 0; i < psi.size(); i++) {
                psi(i) = Complex(normal(rng), normal(rng));
            }
            psi.normalize();
            std::vector<QubitId> order;
            for (size_t q = 0; q < n; q++) {
                order.push_back(QubitId{q});
            }
            worst_pure = std::max(worst_pure, std::abs(entropy(DensityMatrix::from_pure(psi, order))));
        }
    }
    v.require(worst_pure < kPureEntropyTol, "pure-state entropy " + num(worst_pure));
    DensityMatrix mixed(Matrix::Identity(2, 2) / 2.0, {QubitId{0}});
    double s = entropy(mixed);
    v.require(std::abs(s - 1) <= kMixedEntropyTol, "entropy(I/2) = " + format_real(s));
    if (v.pass) {
        v.detail = std::to_string(watch.states) + " states checked";
    }
    return v;
}

}  // namespace

int main() {
    criterion(1, "routing tables match the golden files", 1, golden_tables);
    criterion(2, "cluster request decomposes into seven sub-requests", 1, seven_sub_requests);
    criterion(3, "noiseless cluster is delivered exactly", 10, noiseless_cluster);
    criterion(4, "engine states agree with the flat oracle", 60, oracle_equivalence);
    criterion(5, "purification sweep matches the branch oracle", 30, purification_sweep);
    criterion(6, "swapping degrades with gate noise", 10, swap_degradation);
    criterion(7, "noisy cluster is reported as a constraint violation", 10, constraint_enforcement);
    criterion(8, "protocol invariants", 30, protocol_invariants);
    criterion(9, "density-matrix numerics", 0, density_numerics);
    return failures ? 1 : 0;
}
