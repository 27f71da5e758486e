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


#ifndef QRNA_STATE_STORE_H
#define QRNA_STATE_STORE_H

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qrna/density.h"
#include "qrna/request.h"
#include "qrna/trace.h"
#include "qrna/virtual_map.h"

namespace qrna {

/// A virtual qubit together with the node holding it.
struct NodeQubit {
    std::string node;
    FullVirtualId id;
    auto operator<=>(const NodeQubit &) const = default;
};
std::string to_string(const NodeQubit &q);

struct StoreConfig {
    EngineLimits limits;
    /// Physical qubits per node register.
    size_t register_capacity = 16;
    /// Depolarizing probability applied to both qubits after every local two-qubit gate.
    double p_gate = 0;
};

struct ResourceCounts {
    uint64_t pairs_generated = 0;
    uint64_t generation_failures = 0;
    uint64_t purify_attempts = 0;
    uint64_t purify_successes = 0;
    uint64_t swaps = 0;
    uint64_t teleports = 0;

    ResourceCounts operator-(const ResourceCounts &o) const {
        return {pairs_generated - o.pairs_generated, generation_failures - o.generation_failures,
                purify_attempts - o.purify_attempts,  purify_successes - o.purify_successes,
                swaps - o.swaps,                      teleports - o.teleports};
    }
};

/// Global quantum state of the simulated network. Qubits that have never interacted live in
/// separate density matrices; groups merge when a gate spans them. Every physical operation is
/// written to the trace as an OP event so the run can be replayed.
class StateStore {
   public:
    StateStore(const std::vector<std::string> &nodes, StoreConfig config, Trace *trace, uint64_t seed);

    const StoreConfig &config() const {
        return config_;
    }
    /// Trace label ("<requester>#<id>") attached to subsequent events.
    void set_context(std::string request_label) {
        context_ = std::move(request_label);
    }
    const std::string &context() const {
        return context_;
    }
    void emit(const std::string &node, TraceKind kind, std::string detail);

    /// Fresh |0> qubit in a free slot of `q.node`, bound to q.id.
    QubitId allocate(const NodeQubit &q);
    /// Local gate; every target must sit at the same node.
    void gate(GateKind kind, const std::vector<NodeQubit> &targets);
    /// Entangling operation performed by link hardware between two nodes. Exempt from the
    /// locality check and from gate noise.
    void link_gate(GateKind kind, const NodeQubit &a, const NodeQubit &b);
    /// Applies [[alpha, -conj(beta)], [beta, conj(alpha)]], taking |0> to alpha|0> + beta|1>.
    void rotate(const NodeQubit &q, Complex alpha, Complex beta);
    void noise(const NoiseChannel &channel, const std::vector<NodeQubit> &targets);
    /// Born-rule outcome drawn from the store's generator.
    int measure(const NodeQubit &q);
    /// Probability that measuring q yields 0 in the current state.
    double probability_of_zero(const NodeQubit &q) const;
    /// Traces the qubit out, frees its slot and drops its binding.
    void discard(const NodeQubit &q);

    bool is_bound(const NodeQubit &q) const;
    QubitId qubit_of(const NodeQubit &q) const;
    /// Reduced state over `qubits`, factors in the given order.
    DensityMatrix reduced_state(const std::vector<NodeQubit> &qubits) const;
    double bell_fidelity(const NodeQubit &a, const NodeQubit &b) const;

    const VirtualMap &virtual_map(const std::string &node) const;
    const std::map<std::string, VirtualMap> &virtual_maps() const {
        return maps_;
    }
    size_t live_qubits() const {
        return qubit_group_.size();
    }
    /// Largest single density matrix currently held.
    size_t largest_group() const;

    std::mt19937_64 &rng() {
        return rng_;
    }
    ResourceCounts &counts() {
        return counts_;
    }
    const ResourceCounts &counts() const {
        return counts_;
    }

    /// Called with every density matrix the store produces.
    void set_observer(std::function<void(const DensityMatrix &)> observer) {
        observer_ = std::move(observer);
    }

   private:
    uint64_t group_of(QubitId q) const;
    /// Merges the groups of the given qubits into one and returns its key.
    uint64_t merge(const std::vector<QubitId> &qubits);
    void store_group(uint64_t key, DensityMatrix state);
    std::string qubit_list(const std::vector<QubitId> &qubits) const;
    void apply_gate_noise(const std::vector<NodeQubit> &targets);

    StoreConfig config_;
    Trace *trace_;
    std::mt19937_64 rng_;
    std::string context_;
    std::map<std::string, VirtualMap> maps_;
    std::map<std::string, std::vector<std::optional<QubitId>>> registers_;
    std::map<QubitSlot, QubitId> slot_qubit_;
    std::map<uint64_t, DensityMatrix> groups_;
    std::map<QubitId, uint64_t> qubit_group_;
    uint64_t next_qubit_ = 0;
    uint64_t next_group_ = 0;
    ResourceCounts counts_;
    std::function<void(const DensityMatrix &)> observer_;
};

}  // namespace qrna

#endif
