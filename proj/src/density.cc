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


#include "qrna/density.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "qrna/error.h"

namespace qrna {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

Matrix make_matrix(size_t dim, std::initializer_list<Complex> values) {
    Matrix m(dim, dim);
    auto it = values.begin();
    for (size_t r = 0; r < dim; r++) {
        for (size_t c = 0; c < dim; c++) {
            m(r, c) = *it++;
        }
    }
    return m;
}

void check_distinct(std::span<const QubitId> qubits) {
    std::set<QubitId> seen(qubits.begin(), qubits.end());
    if (seen.size() != qubits.size()) {
        throw Error(ErrorCode::AddressError, "duplicate qubit identifier");
    }
}

void check_cap(size_t n, const EngineLimits &limits) {
    if (n > limits.max_qubits) {
        throw Error(
            ErrorCode::ResourceLimit,
            std::to_string(n) + " qubits exceeds the cap of " + std::to_string(limits.max_qubits));
    }
}

/// Bit of the basis index holding the factor at `position`.
size_t bit_of(size_t position, size_t n) {
    return n - 1 - position;
}

/// Multiplies the row space of m by `op`, which acts on the listed basis bits (first bit most
/// significant inside op).
void apply_rows(Matrix &m, const Matrix &op, std::span<const size_t> bits) {
    size_t k = bits.size();
    size_t sub = size_t{1} << k;
    std::vector<size_t> offsets(sub, 0);
    size_t mask = 0;
    for (size_t s = 0; s < sub; s++) {
        for (size_t j = 0; j < k; j++) {
            if ((s >> (k - 1 - j)) & 1) {
                offsets[s] |= size_t{1} << bits[j];
            }
        }
    }
    for (size_t b : bits) {
        mask |= size_t{1} << b;
    }
    std::vector<Complex> in(sub);
    auto dim = static_cast<size_t>(m.rows());
    for (Eigen::Index col = 0; col < m.cols(); col++) {
        for (size_t base = 0; base < dim; base++) {
            if (base & mask) {
                continue;
            }
            for (size_t s = 0; s < sub; s++) {
                in[s] = m(base + offsets[s], col);
            }
            for (size_t r = 0; r < sub; r++) {
                Complex acc = 0;
                for (size_t s = 0; s < sub; s++) {
                    acc += op(r, s) * in[s];
                }
                m(base + offsets[r], col) = acc;
            }
        }
    }
}

Matrix hermitian_part(const Matrix &m) {
    return (m + m.adjoint()) * 0.5;
}

std::vector<size_t> bits_for(const DensityMatrix &rho, std::span<const QubitId> targets) {
    std::vector<size_t> bits;
    bits.reserve(targets.size());
    for (QubitId q : targets) {
        bits.push_back(bit_of(rho.position_of(q), rho.n_qubits()));
    }
    return bits;
}

/// Basis indices of the full space obtained by spreading a sub-index over the given bits.
std::vector<size_t> spread_table(std::span<const size_t> bits) {
    size_t k = bits.size();
    std::vector<size_t> table(size_t{1} << k, 0);
    for (size_t s = 0; s < table.size(); s++) {
        for (size_t j = 0; j < k; j++) {
            if ((s >> (k - 1 - j)) & 1) {
                table[s] |= size_t{1} << bits[j];
            }
        }
    }
    return table;
}

DensityMatrix project(const DensityMatrix &rho, QubitId qubit, int outcome, double probability) {
    size_t bit = bit_of(rho.position_of(qubit), rho.n_qubits());
    Matrix m = rho.entries();
    auto dim = static_cast<size_t>(m.rows());
    for (size_t r = 0; r < dim; r++) {
        for (size_t c = 0; c < dim; c++) {
            bool keep = static_cast<int>((r >> bit) & 1) == outcome && static_cast<int>((c >> bit) & 1) == outcome;
            m(r, c) = keep ? m(r, c) / probability : Complex{0};
        }
    }
    return DensityMatrix(std::move(m), std::vector<QubitId>(rho.qubit_order().begin(), rho.qubit_order().end()));
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

}  // namespace

std::string to_string(QubitId q) {
    return "q" + std::to_string(q.value);
}

std::string to_string(const QubitSlot &slot) {
    return slot.register_id + "[" + std::to_string(slot.index) + "]";
}

size_t gate_arity(GateKind kind) {
    return kind == GateKind::CNOT || kind == GateKind::CZ ? 2 : 1;
}

std::string_view gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::H:
            return "H";
        case GateKind::X:
            return "X";
        case GateKind::Y:
            return "Y";
        case GateKind::Z:
            return "Z";
        case GateKind::S:
            return "S";
        case GateKind::T:
            return "T";
        case GateKind::CNOT:
            return "CNOT";
        case GateKind::CZ:
            return "CZ";
    }
    return "?";
}

std::optional<GateKind> parse_gate_kind(std::string_view name) {
    for (auto kind : {GateKind::H, GateKind::X, GateKind::Y, GateKind::Z, GateKind::S, GateKind::T, GateKind::CNOT,
                      GateKind::CZ}) {
        if (gate_name(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

std::string_view channel_name(ChannelKind kind) {
    return kind == ChannelKind::Depolarizing ? "DEPOLARIZING" : "WERNER_SOURCE";
}

const Matrix &gate_matrix(GateKind kind) {
    const Complex i{0, 1};
    static const Matrix h = make_matrix(2, {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2});
    static const Matrix x = make_matrix(2, {0, 1, 1, 0});
    static const Matrix y = make_matrix(2, {0, -i, i, 0});
    static const Matrix z = make_matrix(2, {1, 0, 0, -1});
    static const Matrix s = make_matrix(2, {1, 0, 0, i});
    static const Matrix t = make_matrix(2, {1, 0, 0, std::polar(1.0, M_PI / 4)});
    static const Matrix cnot = make_matrix(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0});
    static const Matrix cz = make_matrix(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1});
    switch (kind) {
        case GateKind::H:
            return h;
        case GateKind::X:
            return x;
        case GateKind::Y:
            return y;
        case GateKind::Z:
            return z;
        case GateKind::S:
            return s;
        case GateKind::T:
            return t;
        case GateKind::CNOT:
            return cnot;
        case GateKind::CZ:
            return cz;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown gate");
}

DensityMatrix::DensityMatrix() : entries_(Matrix::Ones(1, 1)) {
}

DensityMatrix::DensityMatrix(Matrix entries, std::vector<QubitId> qubit_order)
    : entries_(std::move(entries)), order_(std::move(qubit_order)) {
    check_distinct(order_);
    auto dim = Eigen::Index{1} << order_.size();
    if (entries_.rows() != dim || entries_.cols() != dim) {
        throw Error(ErrorCode::ShapeError, "matrix dimension does not match qubit count");
    }
}

DensityMatrix DensityMatrix::from_pure(const StateVector &psi, std::vector<QubitId> qubit_order) {
    if (psi.size() != (Eigen::Index{1} << qubit_order.size())) {
        throw Error(ErrorCode::ShapeError, "state vector dimension does not match qubit count");
    }
    return DensityMatrix(psi * psi.adjoint(), std::move(qubit_order));
}

bool DensityMatrix::contains(QubitId q) const {
    return std::find(order_.begin(), order_.end(), q) != order_.end();
}

size_t DensityMatrix::position_of(QubitId q) const {
    auto it = std::find(order_.begin(), order_.end(), q);
    if (it == order_.end()) {
        throw Error(ErrorCode::AddressError, "qubit " + to_string(q) + " is not part of this state");
    }
    return static_cast<size_t>(it - order_.begin());
}

DensityMatrix new_register(size_t n, const EngineLimits &limits) {
    std::vector<QubitId> ids;
    for (size_t k = 0; k < n; k++) {
        ids.push_back(QubitId{k});
    }
    return new_register(std::move(ids), limits);
}

DensityMatrix new_register(std::vector<QubitId> qubits, const EngineLimits &limits) {
    if (qubits.empty()) {
        throw Error(ErrorCode::InvalidArgument, "a register needs at least one qubit");
    }
    check_cap(qubits.size(), limits);
    auto dim = Eigen::Index{1} << qubits.size();
    Matrix m = Matrix::Zero(dim, dim);
    m(0, 0) = 1;
    return DensityMatrix(std::move(m), std::move(qubits));
}

StateVector bell_phi_plus() {
    StateVector v = StateVector::Zero(4);
    v(0) = kInvSqrt2;
    v(3) = kInvSqrt2;
    return v;
}

DensityMatrix werner_pair(double fidelity_value, QubitId a, QubitId b) {
    if (!(fidelity_value >= 0 && fidelity_value <= 1)) {
        throw Error(ErrorCode::InvalidArgument, "Werner fidelity must lie in [0,1]");
    }
    StateVector phi_minus = StateVector::Zero(4);
    StateVector psi_plus = StateVector::Zero(4);
    StateVector psi_minus = StateVector::Zero(4);
    phi_minus << kInvSqrt2, 0, 0, -kInvSqrt2;
    psi_plus << 0, kInvSqrt2, kInvSqrt2, 0;
    psi_minus << 0, kInvSqrt2, -kInvSqrt2, 0;
    StateVector phi_plus = bell_phi_plus();
    double rest = (1 - fidelity_value) / 3;
    Matrix m = fidelity_value * (phi_plus * phi_plus.adjoint()) +
               rest * (phi_minus * phi_minus.adjoint() + psi_plus * psi_plus.adjoint() +
                       psi_minus * psi_minus.adjoint());
    return DensityMatrix(std::move(m), {a, b});
}

DensityMatrix apply_unitary(const DensityMatrix &rho, const Matrix &u, std::span<const QubitId> targets) {
    check_distinct(targets);
    if (u.rows() != (Eigen::Index{1} << targets.size()) || u.cols() != u.rows()) {
        throw Error(ErrorCode::ShapeError, "operator size does not match target count");
    }
    auto bits = bits_for(rho, targets);
    Matrix m = rho.entries();
    apply_rows(m, u, bits);
    m.adjointInPlace();
    apply_rows(m, u, bits);
    m.adjointInPlace();
    return DensityMatrix(
        hermitian_part(m), std::vector<QubitId>(rho.qubit_order().begin(), rho.qubit_order().end()));
}

DensityMatrix apply_gate(const DensityMatrix &rho, const GateOp &gate) {
    if (gate.targets.size() != gate_arity(gate.kind)) {
        throw Error(ErrorCode::InvalidArgument, std::string(gate_name(gate.kind)) + " has the wrong number of targets");
    }
    return apply_unitary(rho, gate_matrix(gate.kind), gate.targets);
}

DensityMatrix apply_channel(const DensityMatrix &rho, const NoiseChannel &channel, std::span<const QubitId> targets) {
    if (targets.size() != channel.arity()) {
        throw Error(ErrorCode::InvalidArgument, std::string(channel_name(channel.kind)) + " has the wrong arity");
    }
    double weight;  // total probability of a non-identity Pauli on the affected qubit
    QubitId affected;
    if (channel.kind == ChannelKind::Depolarizing) {
        if (!(channel.parameter >= 0 && channel.parameter <= 1)) {
            throw Error(ErrorCode::InvalidArgument, "depolarizing probability must lie in [0,1]");
        }
        weight = channel.parameter;
        affected = targets[0];
    } else {
        if (!(channel.parameter >= 0.25 && channel.parameter <= 1)) {
            throw Error(ErrorCode::InvalidArgument, "Werner source fidelity must lie in [1/4,1]");
        }
        check_distinct(targets);
        rho.position_of(targets[0]);
        weight = 1 - channel.parameter;
        affected = targets[1];
    }
    const QubitId one[] = {affected};
    Matrix out = (1 - weight) * rho.entries();
    for (auto pauli : {GateKind::X, GateKind::Y, GateKind::Z}) {
        out += (weight / 3) * apply_unitary(rho, gate_matrix(pauli), one).entries();
    }
    return DensityMatrix(
        hermitian_part(out), std::vector<QubitId>(rho.qubit_order().begin(), rho.qubit_order().end()));
}

double probability_of_zero(const DensityMatrix &rho, QubitId qubit) {
    size_t bit = bit_of(rho.position_of(qubit), rho.n_qubits());
    double p = 0;
    for (Eigen::Index r = 0; r < rho.entries().rows(); r++) {
        if (((static_cast<size_t>(r) >> bit) & 1) == 0) {
            p += rho.entries()(r, r).real();
        }
    }
    return std::clamp(p, 0.0, 1.0);
}

MeasureResult measure_z(const DensityMatrix &rho, QubitId qubit, int forced_outcome) {
    if (forced_outcome != 0 && forced_outcome != 1) {
        throw Error(ErrorCode::InvalidArgument, "measurement outcome must be 0 or 1");
    }
    double p0 = probability_of_zero(rho, qubit);
    double p = forced_outcome == 0 ? p0 : 1 - p0;
    if (p < 1e-15) {
        throw Error(
            ErrorCode::ImpossibleBranch,
            "outcome " + std::to_string(forced_outcome) + " of " + to_string(qubit) + " has probability " +
                std::to_string(p));
    }
    return {forced_outcome, p, project(rho, qubit, forced_outcome, p)};
}

MeasureResult measure_z(const DensityMatrix &rho, QubitId qubit, std::mt19937_64 &rng) {
    double p0 = probability_of_zero(rho, qubit);
    double u = uniform_unit(rng);
    int outcome;
    if (p0 < 1e-15) {
        outcome = 1;
    } else if (1 - p0 < 1e-15) {
        outcome = 0;
    } else {
        outcome = u < p0 ? 0 : 1;
    }
    return measure_z(rho, qubit, outcome);
}

DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const QubitId> keep) {
    if (keep.empty()) {
        throw Error(ErrorCode::AddressError, "partial trace must keep at least one qubit");
    }
    check_distinct(keep);
    std::vector<QubitId> kept_order;
    std::vector<size_t> kept_bits;
    std::vector<size_t> traced_bits;
    size_t n = rho.n_qubits();
    for (QubitId q : keep) {
        rho.position_of(q);
    }
    for (size_t pos = 0; pos < n; pos++) {
        QubitId q = rho.qubit_order()[pos];
        if (std::find(keep.begin(), keep.end(), q) != keep.end()) {
            kept_order.push_back(q);
            kept_bits.push_back(bit_of(pos, n));
        } else {
            traced_bits.push_back(bit_of(pos, n));
        }
    }
    auto kept = spread_table(kept_bits);
    auto traced = spread_table(traced_bits);
    auto dim = static_cast<Eigen::Index>(kept.size());
    Matrix out = Matrix::Zero(dim, dim);
    const Matrix &m = rho.entries();
    for (Eigen::Index c = 0; c < dim; c++) {
        for (Eigen::Index r = 0; r < dim; r++) {
            Complex acc = 0;
            for (size_t t : traced) {
                acc += m(kept[r] | t, kept[c] | t);
            }
            out(r, c) = acc;
        }
    }
    return DensityMatrix(std::move(out), std::move(kept_order));
}

DensityMatrix discard(const DensityMatrix &rho, QubitId qubit) {
    rho.position_of(qubit);
    std::vector<QubitId> keep;
    for (QubitId q : rho.qubit_order()) {
        if (q != qubit) {
            keep.push_back(q);
        }
    }
    if (keep.empty()) {
        return DensityMatrix();
    }
    return partial_trace(rho, keep);
}

DensityMatrix tensor(const DensityMatrix &a, const DensityMatrix &b, const EngineLimits &limits) {
    std::vector<QubitId> order(a.qubit_order().begin(), a.qubit_order().end());
    order.insert(order.end(), b.qubit_order().begin(), b.qubit_order().end());
    check_distinct(order);
    check_cap(order.size(), limits);
    const Matrix &x = a.entries();
    const Matrix &y = b.entries();
    Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); i++) {
        for (Eigen::Index j = 0; j < x.cols(); j++) {
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        }
    }
    return DensityMatrix(std::move(out), std::move(order));
}

DensityMatrix reorder(const DensityMatrix &rho, std::span<const QubitId> order) {
    size_t n = rho.n_qubits();
    if (order.size() != n) {
        throw Error(ErrorCode::ShapeError, "reorder needs a permutation of the qubit order");
    }
    check_distinct(order);
    std::vector<size_t> old_bits;
    for (QubitId q : order) {
        old_bits.push_back(bit_of(rho.position_of(q), n));
    }
    // new index i has its position-k bit at bit_of(k); it maps onto old_bits[k].
    auto map = spread_table(old_bits);
    auto dim = static_cast<Eigen::Index>(map.size());
    Matrix out(dim, dim);
    const Matrix &m = rho.entries();
    for (Eigen::Index c = 0; c < dim; c++) {
        for (Eigen::Index r = 0; r < dim; r++) {
            out(r, c) = m(map[r], map[c]);
        }
    }
    return DensityMatrix(std::move(out), std::vector<QubitId>(order.begin(), order.end()));
}

double fidelity(const DensityMatrix &rho, const StateVector &target) {
    if (target.size() != rho.entries().rows()) {
        throw Error(ErrorCode::ShapeError, "target dimension does not match the state");
    }
    if (std::abs(target.squaredNorm() - 1) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "target state is not normalized");
    }
    Complex f = target.adjoint() * rho.entries() * target;
    return std::clamp(f.real(), 0.0, 1.0);
}

double entropy(const DensityMatrix &rho) {
    double s = 0;
    for (double lambda : hermitian_eigenvalues(rho.entries())) {
        if (lambda > 0) {
            s -= lambda * std::log2(lambda);
        }
    }
    return std::max(s, 0.0);
}

double trace_distance(const DensityMatrix &a, const DensityMatrix &b) {
    DensityMatrix aligned = reorder(b, a.qubit_order());
    double total = 0;
    for (double lambda : hermitian_eigenvalues(a.entries() - aligned.entries())) {
        total += std::abs(lambda);
    }
    return total / 2;
}

InvariantReport check_invariants(const DensityMatrix &rho) {
    const Matrix &m = rho.entries();
    InvariantReport report;
    report.trace_error = std::abs(m.trace() - Complex{1});
    report.hermiticity_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
    report.min_eigenvalue = hermitian_eigenvalues(hermitian_part(m)).minCoeff();
    return report;
}

double uniform_unit(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace qrna
