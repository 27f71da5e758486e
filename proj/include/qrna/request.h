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


#ifndef QRNA_REQUEST_H
#define QRNA_REQUEST_H

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qrna/density.h"
#include "qrna/error.h"

namespace qrna {

/// A qubit named by the node (or network) that should hold it and a requester-chosen
/// virtual address.
struct QubitAddress {
    std::string node;
    uint64_t vaddr = 0;
    auto operator<=>(const QubitAddress &) const = default;
};
std::string to_string(const QubitAddress &address);

/// Globally unique virtual qubit name: the requester and its request id scope the address.
struct FullVirtualId {
    std::string requester;
    uint64_t request_id = 0;
    uint64_t vaddr = 0;
    auto operator<=>(const FullVirtualId &) const = default;
};
std::string to_string(const FullVirtualId &id);

bool is_valid_name(std::string_view name);

enum class NamedState { BellPhiPlus, Ghz, Fanout, LinearCluster };

struct NamedSpec {
    NamedState kind = NamedState::BellPhiPlus;
    size_t n = 2;
    /// Only meaningful for Fanout.
    Complex alpha = 0;
    Complex beta = 0;
    bool operator==(const NamedSpec &) const = default;

    static NamedSpec bell_phi_plus() {
        return {NamedState::BellPhiPlus, 2, 0, 0};
    }
    static NamedSpec ghz(size_t n) {
        return {NamedState::Ghz, n, 0, 0};
    }
    static NamedSpec fanout(Complex alpha, Complex beta, size_t n) {
        return {NamedState::Fanout, n, alpha, beta};
    }
    static NamedSpec linear_cluster(size_t n) {
        return {NamedState::LinearCluster, n, 0, 0};
    }
};

enum class OpKind {
    Gate,
    /// Z-basis measurement of one qubit.
    Measure,
    /// TELEPORT(data, near, far): Bell measurement of (data, near) at their node followed by
    /// Pauli corrections on far, which must share a pair with near.
    Teleport,
};

struct CircuitOp {
    OpKind kind = OpKind::Gate;
    GateKind gate = GateKind::H;
    std::vector<QubitAddress> targets;
    bool operator==(const CircuitOp &) const = default;

    static CircuitOp make_gate(GateKind gate, std::vector<QubitAddress> targets) {
        return {OpKind::Gate, gate, std::move(targets)};
    }
    static CircuitOp measure(QubitAddress target) {
        return {OpKind::Measure, GateKind::H, {std::move(target)}};
    }
    static CircuitOp teleport(QubitAddress data, QubitAddress near, QubitAddress far) {
        return {OpKind::Teleport, GateKind::H, {std::move(data), std::move(near), std::move(far)}};
    }
};

/// Circuit applied to all-|0> qubits, one per request target.
struct CircuitSpec {
    std::vector<CircuitOp> ops;
    bool operator==(const CircuitSpec &) const = default;
};

struct StateSpec {
    std::variant<CircuitSpec, NamedSpec> form;
    bool operator==(const StateSpec &) const = default;
};

struct StateRequest {
    uint64_t id = 0;
    StateSpec spec;
    double f_min = 0;
    double s_max = 0;
    std::vector<QubitAddress> targets;
    std::string encoding = "RAW";
    bool operator==(const StateRequest &) const = default;
};

struct ActionRequest {
    uint64_t id = 0;
    std::vector<CircuitOp> circuit;
    double f_min = 0;
    double s_max = 0;
    std::vector<QubitAddress> targets;
    std::string encoding = "RAW";
    bool operator==(const ActionRequest &) const = default;
};

using Request = std::variant<StateRequest, ActionRequest>;

uint64_t request_id(const Request &request);
const std::vector<QubitAddress> &request_targets(const Request &request);
std::vector<QubitAddress> &request_targets(Request &request);

enum class ResponseStatus { Ok, ConstraintViolation, Fail };
std::string_view status_name(ResponseStatus status);

struct Response {
    uint64_t id = 0;
    ResponseStatus status = ResponseStatus::Fail;
    double measured_f = 0;
    double measured_s = 0;
    /// Delivered state over the request targets, in target order. Not carried on the wire.
    std::optional<DensityMatrix> rho;
    /// Set for FAIL responses.
    std::optional<ErrorCode> error;
};

/// Compares the fields that travel on the wire (NaN compares equal to NaN).
bool same_wire_fields(const Response &a, const Response &b);

struct Violation {
    ErrorCode code;
    std::string message;
};

/// Empty when the request satisfies every tuple invariant.
std::vector<Violation> validate(const Request &request);

/// Number of qubits the spec describes given its targets.
size_t spec_qubit_count(const StateSpec &spec, size_t target_count);

/// Pure state the spec asks for, factors in `targets` order.
StateVector target_state(const StateSpec &spec, const std::vector<QubitAddress> &targets,
                         const EngineLimits &limits = {});

/// Measures rho against the request's constraints. rho's factors must follow the target order.
Response check_response(const DensityMatrix &rho, const StateRequest &request, const EngineLimits &limits = {});

}  // namespace qrna

#endif
