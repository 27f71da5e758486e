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


#include "qrna/state_store.h"

#include <algorithm>
#include <set>

#include "qrna/wire.h"

namespace qrna {

std::string to_string(const NodeQubit &q) {
    return q.node + ":" + to_string(q.id);
}

StateStore::StateStore(const std::vector<std::string> &nodes, StoreConfig config, Trace *trace, uint64_t seed)
    : config_(config), trace_(trace), rng_(seed) {
    for (const auto &node : nodes) {
        maps_.emplace(node, VirtualMap(node));
        registers_[node].assign(config_.register_capacity, std::nullopt);
    }
}

void StateStore::emit(const std::string &node, TraceKind kind, std::string detail) {
    if (trace_) {
        trace_->append(node, kind, context_, std::move(detail));
    }
}

std::string StateStore::qubit_list(const std::vector<QubitId> &qubits) const {
    std::string out;
    for (size_t k = 0; k < qubits.size(); k++) {
        out += (k ? "," : "") + to_string(qubits[k]);
    }
    return out;
}

uint64_t StateStore::group_of(QubitId q) const {
    auto it = qubit_group_.find(q);
    if (it == qubit_group_.end()) {
        throw Error(ErrorCode::AddressError, to_string(q) + " is not alive");
    }
    return it->second;
}

void StateStore::store_group(uint64_t key, DensityMatrix state) {
    if (observer_) {
        observer_(state);
    }
    groups_.insert_or_assign(key, std::move(state));
}

uint64_t StateStore::merge(const std::vector<QubitId> &qubits) {
    std::vector<uint64_t> keys;
    for (QubitId q : qubits) {
        uint64_t g = group_of(q);
        if (std::find(keys.begin(), keys.end(), g) == keys.end()) {
            keys.push_back(g);
        }
    }
    uint64_t target = keys.front();
    if (keys.size() == 1) {
        return target;
    }
    DensityMatrix combined = groups_.at(target);
    for (size_t k = 1; k < keys.size(); k++) {
        combined = tensor(combined, groups_.at(keys[k]), config_.limits);
    }
    for (size_t k = 1; k < keys.size(); k++) {
        groups_.erase(keys[k]);
    }
    for (QubitId q : combined.qubit_order()) {
        qubit_group_[q] = target;
    }
    store_group(target, std::move(combined));
    return target;
}

QubitId StateStore::allocate(const NodeQubit &q) {
    auto reg = registers_.find(q.node);
    if (reg == registers_.end()) {
        throw Error(ErrorCode::AddressError, "unknown node '" + q.node + "'");
    }
    auto &slots = reg->second;
    auto free = std::find(slots.begin(), slots.end(), std::nullopt);
    if (free == slots.end()) {
        throw Error(ErrorCode::SlotBusy, "no free qubit slot at " + q.node);
    }
    QubitSlot slot{q.node, static_cast<uint32_t>(free - slots.begin())};
    maps_.at(q.node).bind(q.id, slot);
    QubitId id{next_qubit_++};
    *free = id;
    slot_qubit_[slot] = id;
    uint64_t key = next_group_++;
    qubit_group_[id] = key;
    store_group(key, new_register({id}, config_.limits));
    emit(q.node, TraceKind::Op, "ALLOC q=" + to_string(id) + " slot=" + to_string(slot) + " id=" + to_string(q.id));
    return id;
}

bool StateStore::is_bound(const NodeQubit &q) const {
    auto it = maps_.find(q.node);
    return it != maps_.end() && it->second.is_bound(q.id);
}

QubitId StateStore::qubit_of(const NodeQubit &q) const {
    return slot_qubit_.at(virtual_map(q.node).resolve(q.id));
}

const VirtualMap &StateStore::virtual_map(const std::string &node) const {
    auto it = maps_.find(node);
    if (it == maps_.end()) {
        throw Error(ErrorCode::AddressError, "unknown node '" + node + "'");
    }
    return it->second;
}

void StateStore::gate(GateKind kind, const std::vector<NodeQubit> &targets) {
    for (const auto &t : targets) {
        if (t.node != targets.front().node) {
            throw Error(
                ErrorCode::LoccViolation,
                std::string(gate_name(kind)) + " spans " + targets.front().node + " and " + t.node);
        }
    }
    std::vector<QubitId> qubits;
    for (const auto &t : targets) {
        qubits.push_back(qubit_of(t));
    }
    uint64_t key = merge(qubits);
    store_group(key, apply_gate(groups_.at(key), GateOp{kind, qubits}));
    emit(targets.front().node, TraceKind::Op, "GATE " + std::string(gate_name(kind)) + " q=" + qubit_list(qubits));
    if (gate_arity(kind) == 2) {
        apply_gate_noise(targets);
    }
}

void StateStore::apply_gate_noise(const std::vector<NodeQubit> &targets) {
    if (config_.p_gate <= 0) {
        return;
    }
    for (const auto &t : targets) {
        noise(NoiseChannel::depolarizing(config_.p_gate), {t});
    }
}

void StateStore::link_gate(GateKind kind, const NodeQubit &a, const NodeQubit &b) {
    std::vector<QubitId> qubits{qubit_of(a), qubit_of(b)};
    uint64_t key = merge(qubits);
    store_group(key, apply_gate(groups_.at(key), GateOp{kind, qubits}));
    emit(a.node, TraceKind::Op, "GATE " + std::string(gate_name(kind)) + " q=" + qubit_list(qubits) + " link=" + b.node);
}

void StateStore::rotate(const NodeQubit &q, Complex alpha, Complex beta) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "rotation amplitudes are not normalized");
    }
    Matrix u(2, 2);
    u << alpha, -std::conj(beta), beta, std::conj(alpha);
    QubitId id = qubit_of(q);
    uint64_t key = group_of(id);
    const QubitId target[] = {id};
    store_group(key, apply_unitary(groups_.at(key), u, target));
    emit(q.node, TraceKind::Op,
         "ROTATE q=" + to_string(id) + " alpha=" + format_real(alpha.real()) + "," + format_real(alpha.imag()) +
             " beta=" + format_real(beta.real()) + "," + format_real(beta.imag()));
}

void StateStore::noise(const NoiseChannel &channel, const std::vector<NodeQubit> &targets) {
    std::vector<QubitId> qubits;
    for (const auto &t : targets) {
        qubits.push_back(qubit_of(t));
    }
    uint64_t key = merge(qubits);
    store_group(key, apply_channel(groups_.at(key), channel, qubits));
    emit(targets.front().node, TraceKind::Op,
         "NOISE " + std::string(channel_name(channel.kind)) + " p=" + format_real(channel.parameter) +
             " q=" + qubit_list(qubits));
}

double StateStore::probability_of_zero(const NodeQubit &q) const {
    QubitId id = qubit_of(q);
    return qrna::probability_of_zero(groups_.at(group_of(id)), id);
}

int StateStore::measure(const NodeQubit &q) {
    QubitId id = qubit_of(q);
    uint64_t key = group_of(id);
    MeasureResult result = measure_z(groups_.at(key), id, rng_);
    store_group(key, std::move(result.state));
    emit(q.node, TraceKind::Op,
         "MEASURE q=" + to_string(id) + " outcome=" + std::to_string(result.outcome) +
             " p=" + format_real(result.probability));
    return result.outcome;
}

void StateStore::discard(const NodeQubit &q) {
    QubitId id = qubit_of(q);
    uint64_t key = group_of(id);
    DensityMatrix rest = qrna::discard(groups_.at(key), id);
    qubit_group_.erase(id);
    if (rest.n_qubits() == 0) {
        groups_.erase(key);
    } else {
        store_group(key, std::move(rest));
    }
    QubitSlot slot = maps_.at(q.node).release(q.id);
    slot_qubit_.erase(slot);
    registers_.at(q.node)[slot.index] = std::nullopt;
    emit(q.node, TraceKind::Op, "DISCARD q=" + to_string(id));
}

DensityMatrix StateStore::reduced_state(const std::vector<NodeQubit> &qubits) const {
    std::vector<QubitId> ids;
    for (const auto &q : qubits) {
        ids.push_back(qubit_of(q));
    }
    std::vector<uint64_t> keys;
    for (QubitId q : ids) {
        uint64_t g = group_of(q);
        if (std::find(keys.begin(), keys.end(), g) == keys.end()) {
            keys.push_back(g);
        }
    }
    std::optional<DensityMatrix> combined;
    for (uint64_t key : keys) {
        const DensityMatrix &group = groups_.at(key);
        std::vector<QubitId> keep;
        for (QubitId q : ids) {
            if (group.contains(q)) {
                keep.push_back(q);
            }
        }
        DensityMatrix part = partial_trace(group, keep);
        combined = combined ? tensor(*combined, part, config_.limits) : part;
    }
    return reorder(*combined, ids);
}

double StateStore::bell_fidelity(const NodeQubit &a, const NodeQubit &b) const {
    return fidelity(reduced_state({a, b}), bell_phi_plus());
}

size_t StateStore::largest_group() const {
    size_t best = 0;
    for (const auto &[key, group] : groups_) {
        best = std::max(best, group.n_qubits());
    }
    return best;
}

}  // namespace qrna
