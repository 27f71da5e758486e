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


#include "qrna/request.h"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <set>

namespace qrna {

namespace {

/// Applies a gate matrix to a state vector; the first target is the most significant factor.
void apply_to_vector(StateVector &psi, const Matrix &u, const std::vector<size_t> &positions, size_t n) {
    size_t k = positions.size();
    size_t sub = size_t{1} << k;
    std::vector<size_t> offsets(sub, 0);
    size_t mask = 0;
    for (size_t j = 0; j < k; j++) {
        mask |= size_t{1} << (n - 1 - positions[j]);
    }
    for (size_t s = 0; s < sub; s++) {
        for (size_t j = 0; j < k; j++) {
            if ((s >> (k - 1 - j)) & 1) {
                offsets[s] |= size_t{1} << (n - 1 - positions[j]);
            }
        }
    }
    std::vector<Complex> in(sub);
    for (size_t base = 0; base < static_cast<size_t>(psi.size()); base++) {
        if (base & mask) {
            continue;
        }
        for (size_t s = 0; s < sub; s++) {
            in[s] = psi(base + offsets[s]);
        }
        for (size_t r = 0; r < sub; r++) {
            Complex acc = 0;
            for (size_t s = 0; s < sub; s++) {
                acc += u(r, s) * in[s];
            }
            psi(base + offsets[r]) = acc;
        }
    }
}

StateVector zero_state(size_t n) {
    StateVector psi = StateVector::Zero(Eigen::Index{1} << n);
    psi(0) = 1;
    return psi;
}

void check_ops(const std::vector<CircuitOp> &ops, const std::vector<QubitAddress> &targets, bool gates_only,
               std::vector<Violation> &out) {
    for (const auto &op : ops) {
        size_t want = op.kind == OpKind::Gate ? gate_arity(op.gate) : op.kind == OpKind::Measure ? 1 : 3;
        if (gates_only && op.kind != OpKind::Gate) {
            out.push_back({ErrorCode::InvalidArgument, "state circuits may only contain unitary gates"});
        }
        if (op.targets.size() != want) {
            out.push_back({ErrorCode::InvalidArgument, "circuit operation has the wrong number of targets"});
        }
        std::set<QubitAddress> distinct(op.targets.begin(), op.targets.end());
        if (distinct.size() != op.targets.size()) {
            out.push_back({ErrorCode::AddressError, "circuit operation repeats a qubit"});
        }
        for (const auto &t : op.targets) {
            if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
                out.push_back({ErrorCode::AddressError, "circuit references undeclared address " + to_string(t)});
            }
        }
    }
}

void check_common(double f_min, double s_max, const std::vector<QubitAddress> &targets, const std::string &encoding,
                  std::vector<Violation> &out) {
    if (!(f_min >= 0 && f_min <= 1)) {
        out.push_back({ErrorCode::InvalidArgument, "f_min must lie in [0,1]"});
    }
    if (!(s_max >= 0) || std::isinf(s_max)) {
        out.push_back({ErrorCode::InvalidArgument, "s_max must be a non-negative real"});
    }
    if (targets.empty()) {
        out.push_back({ErrorCode::AddressError, "request has no targets"});
    }
    std::set<QubitAddress> distinct;
    for (const auto &t : targets) {
        if (!is_valid_name(t.node)) {
            out.push_back({ErrorCode::AddressError, "invalid node name '" + t.node + "'"});
        }
        if (!distinct.insert(t).second) {
            out.push_back({ErrorCode::AddressError, "duplicate target " + to_string(t)});
        }
    }
    if (encoding != "RAW") {
        out.push_back({ErrorCode::UnsupportedEncoding, "encoding '" + encoding + "' is not supported"});
    }
}

}  // namespace

std::string to_string(const QubitAddress &address) {
    return address.node + ":" + std::to_string(address.vaddr);
}

std::string to_string(const FullVirtualId &id) {
    return id.requester + "/" + std::to_string(id.request_id) + "/" + std::to_string(id.vaddr);
}

bool is_valid_name(std::string_view name) {
    if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) {
        return false;
    }
    return std::all_of(name.begin(), name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
}

uint64_t request_id(const Request &request) {
    return std::visit([](const auto &r) { return r.id; }, request);
}

const std::vector<QubitAddress> &request_targets(const Request &request) {
    return std::visit([](const auto &r) -> const std::vector<QubitAddress> & { return r.targets; }, request);
}

std::vector<QubitAddress> &request_targets(Request &request) {
    return std::visit([](auto &r) -> std::vector<QubitAddress> & { return r.targets; }, request);
}

std::string_view status_name(ResponseStatus status) {
    switch (status) {
        case ResponseStatus::Ok:
            return "OK";
        case ResponseStatus::ConstraintViolation:
            return "CONSTRAINT_VIOLATION";
        case ResponseStatus::Fail:
            return "FAIL";
    }
    return "?";
}

bool same_wire_fields(const Response &a, const Response &b) {
    auto same = [](double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; };
    return a.id == b.id && a.status == b.status && same(a.measured_f, b.measured_f) &&
           same(a.measured_s, b.measured_s) && a.error == b.error;
}

size_t spec_qubit_count(const StateSpec &spec, size_t target_count) {
    if (std::holds_alternative<CircuitSpec>(spec.form)) {
        return target_count;
    }
    return std::get<NamedSpec>(spec.form).n;
}

std::vector<Violation> validate(const Request &request) {
    std::vector<Violation> out;
    if (const auto *state = std::get_if<StateRequest>(&request)) {
        check_common(state->f_min, state->s_max, state->targets, state->encoding, out);
        if (const auto *circuit = std::get_if<CircuitSpec>(&state->spec.form)) {
            check_ops(circuit->ops, state->targets, true, out);
        } else {
            const auto &named = std::get<NamedSpec>(state->spec.form);
            if (named.n < 1) {
                out.push_back({ErrorCode::InvalidArgument, "named state needs at least one qubit"});
            }
            if (named.kind == NamedState::BellPhiPlus && named.n != 2) {
                out.push_back({ErrorCode::InvalidArgument, "a Bell pair has two qubits"});
            }
            if (named.kind == NamedState::Fanout &&
                std::abs(std::norm(named.alpha) + std::norm(named.beta) - 1) > 1e-12) {
                out.push_back({ErrorCode::InvalidArgument, "FANOUT amplitudes are not normalized"});
            }
            if (named.n != state->targets.size()) {
                out.push_back({ErrorCode::ShapeError, "spec qubit count differs from the number of targets"});
            }
        }
    } else {
        const auto &action = std::get<ActionRequest>(request);
        check_common(action.f_min, action.s_max, action.targets, action.encoding, out);
        check_ops(action.circuit, action.targets, false, out);
    }
    return out;
}

StateVector target_state(const StateSpec &spec, const std::vector<QubitAddress> &targets,
                         const EngineLimits &limits) {
    size_t n = spec_qubit_count(spec, targets.size());
    if (n > limits.max_qubits) {
        throw Error(ErrorCode::ResourceLimit, "target state exceeds the qubit cap");
    }
    if (n == 0) {
        throw Error(ErrorCode::InvalidArgument, "target state has no qubits");
    }
    if (const auto *circuit = std::get_if<CircuitSpec>(&spec.form)) {
        StateVector psi = zero_state(n);
        for (const auto &op : circuit->ops) {
            if (op.kind != OpKind::Gate) {
                throw Error(ErrorCode::InvalidArgument, "state circuits may only contain unitary gates");
            }
            std::vector<size_t> positions;
            for (const auto &t : op.targets) {
                auto it = std::find(targets.begin(), targets.end(), t);
                if (it == targets.end()) {
                    throw Error(ErrorCode::AddressError, "circuit references undeclared address " + to_string(t));
                }
                positions.push_back(static_cast<size_t>(it - targets.begin()));
            }
            apply_to_vector(psi, gate_matrix(op.gate), positions, n);
        }
        return psi;
    }
    const auto &named = std::get<NamedSpec>(spec.form);
    StateVector psi = StateVector::Zero(Eigen::Index{1} << n);
    const double r = 1 / std::sqrt(2.0);
    switch (named.kind) {
        case NamedState::BellPhiPlus:
        case NamedState::Ghz:
            psi(0) = r;
            psi(psi.size() - 1) = r;
            return psi;
        case NamedState::Fanout:
            psi(0) = named.alpha;
            psi(psi.size() - 1) += named.beta;
            return psi;
        case NamedState::LinearCluster: {
            psi = zero_state(n);
            for (size_t k = 0; k < n; k++) {
                apply_to_vector(psi, gate_matrix(GateKind::H), {k}, n);
            }
            for (size_t k = 0; k + 1 < n; k++) {
                apply_to_vector(psi, gate_matrix(GateKind::CZ), {k, k + 1}, n);
            }
            return psi;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown named state");
}

Response check_response(const DensityMatrix &rho, const StateRequest &request, const EngineLimits &limits) {
    if (rho.n_qubits() != request.targets.size()) {
        throw Error(ErrorCode::ShapeError, "delivered state does not match the request's target count");
    }
    Response response;
    response.id = request.id;
    response.measured_f = fidelity(rho, target_state(request.spec, request.targets, limits));
    response.measured_s = entropy(rho);
    response.status = response.measured_f >= request.f_min && response.measured_s <= request.s_max
                          ? ResponseStatus::Ok
                          : ResponseStatus::ConstraintViolation;
    response.rho = rho;
    return response;
}

}  // namespace qrna
