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


#include "qrna/oracle.h"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>

#include "qrna/error.h"
#include "qrna/request.h"
#include "qrna/wire.h"

namespace qrna {

namespace {

Matrix single(GateKind kind) {
    const Complex i{0, 1};
    const double r = 1 / std::sqrt(2.0);
    Matrix m(2, 2);
    switch (kind) {
        case GateKind::H:
            m << r, r, r, -r;
            break;
        case GateKind::X:
            m << 0, 1, 1, 0;
            break;
        case GateKind::Y:
            m << 0, -i, i, 0;
            break;
        case GateKind::Z:
            m << 1, 0, 0, -1;
            break;
        case GateKind::S:
            m << 1, 0, 0, i;
            break;
        case GateKind::T:
            m << 1, 0, 0, std::exp(i * (M_PI / 4));
            break;
        default:
            throw Error(ErrorCode::InvalidArgument, "not a one-qubit gate");
    }
    return m;
}

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); r++) {
        for (Eigen::Index c = 0; c < a.cols(); c++) {
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        }
    }
    return out;
}

using Sparse = Eigen::SparseMatrix<Complex>;

Sparse sparse_kron(const Sparse &a, const Matrix &b) {
    std::vector<Eigen::Triplet<Complex>> entries;
    for (int k = 0; k < a.outerSize(); k++) {
        for (Sparse::InnerIterator it(a, k); it; ++it) {
            for (Eigen::Index r = 0; r < b.rows(); r++) {
                for (Eigen::Index c = 0; c < b.cols(); c++) {
                    if (b(r, c) != Complex{0}) {
                        entries.emplace_back(it.row() * b.rows() + r, it.col() * b.cols() + c, it.value() * b(r, c));
                    }
                }
            }
        }
    }
    Sparse out(a.rows() * b.rows(), a.cols() * b.cols());
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
}

Matrix unit(int r, int c) {
    Matrix m = Matrix::Zero(2, 2);
    m(r, c) = 1;
    return m;
}

/// Full 2^n operator that acts with `ops[k]` on qubit position k (identity elsewhere).
Sparse embed(size_t n, const std::vector<std::pair<size_t, Matrix>> &ops) {
    Sparse out(1, 1);
    out.insert(0, 0) = 1;
    for (size_t k = 0; k < n; k++) {
        Matrix factor = Matrix::Identity(2, 2);
        for (const auto &[pos, op] : ops) {
            if (pos == k) {
                factor = op;
            }
        }
        out = sparse_kron(out, factor);
    }
    return out;
}

class FlatRegister {
   public:
    explicit FlatRegister(size_t cap) : cap_(cap), rho_(Matrix::Identity(1, 1)) {
    }

    size_t size() const {
        return order_.size();
    }

    size_t position(QubitId q) const {
        auto it = std::find(order_.begin(), order_.end(), q);
        if (it == order_.end()) {
            throw Error(ErrorCode::AddressError, to_string(q) + " is not in the replay register");
        }
        return static_cast<size_t>(it - order_.begin());
    }

    void allocate(QubitId q) {
        if (std::find(order_.begin(), order_.end(), q) != order_.end()) {
            throw Error(ErrorCode::AddressError, to_string(q) + " allocated twice");
        }
        if (order_.size() + 1 > cap_) {
            throw Error(ErrorCode::ResourceLimit, "replay needs more than " + std::to_string(cap_) + " live qubits");
        }
        rho_ = kron(rho_, unit(0, 0));
        order_.push_back(q);
    }

    void conjugate(const Sparse &u) {
        Matrix left = u * rho_;
        rho_ = left * Sparse(u.adjoint());
    }

    void one(QubitId q, const Matrix &u) {
        conjugate(embed(size(), {{position(q), u}}));
    }

    void two(QubitId a, QubitId b, const Matrix &u4) {
        size_t pa = position(a);
        size_t pb = position(b);
        Sparse full(rho_.rows(), rho_.cols());
        for (int r = 0; r < 4; r++) {
            for (int c = 0; c < 4; c++) {
                if (u4(r, c) != Complex{0}) {
                    full += u4(r, c) * embed(size(), {{pa, unit(r >> 1, c >> 1)}, {pb, unit(r & 1, c & 1)}});
                }
            }
        }
        conjugate(full);
    }

    void pauli_channel(QubitId q, double identity_weight) {
        size_t p = position(q);
        Matrix out = identity_weight * rho_;
        for (GateKind k : {GateKind::X, GateKind::Y, GateKind::Z}) {
            Sparse u = embed(size(), {{p, single(k)}});
            Matrix left = u * rho_;
            out += ((1 - identity_weight) / 3) * (left * Sparse(u.adjoint()));
        }
        rho_ = out;
    }

    std::pair<double, double> branch_probabilities(QubitId q) const {
        size_t p = position(q);
        Matrix zero = embed(size(), {{p, unit(0, 0)}}) * rho_;
        Matrix one = embed(size(), {{p, unit(1, 1)}}) * rho_;
        double p0 = zero.trace().real();
        double p1 = one.trace().real();
        return {p0, p1};
    }

    void project(QubitId q, int outcome, double probability) {
        Sparse proj = embed(size(), {{position(q), unit(outcome, outcome)}});
        Matrix left = proj * rho_;
        rho_ = left * proj / probability;
    }

    /// Reduced state over `keep`, in that order.
    Matrix reduced(const std::vector<QubitId> &keep) const {
        size_t n = size();
        std::vector<size_t> pos;
        for (QubitId q : keep) {
            pos.push_back(position(q));
        }
        std::vector<size_t> rest;
        for (size_t k = 0; k < n; k++) {
            if (std::find(pos.begin(), pos.end(), k) == pos.end()) {
                rest.push_back(k);
            }
        }
        auto index = [&](size_t kept, size_t other) {
            size_t full = 0;
            for (size_t j = 0; j < pos.size(); j++) {
                if ((kept >> (pos.size() - 1 - j)) & 1) {
                    full |= size_t{1} << (n - 1 - pos[j]);
                }
            }
            for (size_t j = 0; j < rest.size(); j++) {
                if ((other >> (rest.size() - 1 - j)) & 1) {
                    full |= size_t{1} << (n - 1 - rest[j]);
                }
            }
            return static_cast<Eigen::Index>(full);
        };
        size_t dim = size_t{1} << pos.size();
        size_t others = size_t{1} << rest.size();
        Matrix out = Matrix::Zero(dim, dim);
        for (size_t r = 0; r < dim; r++) {
            for (size_t c = 0; c < dim; c++) {
                for (size_t o = 0; o < others; o++) {
                    out(r, c) += rho_(index(r, o), index(c, o));
                }
            }
        }
        return out;
    }

    void remove(QubitId q) {
        size_t p = position(q);
        std::vector<QubitId> keep = order_;
        keep.erase(keep.begin() + static_cast<long>(p));
        rho_ = reduced(keep);
        order_ = keep;
    }

   private:
    size_t cap_;
    Matrix rho_;
    std::vector<QubitId> order_;
};

QubitId parse_qubit(std::string_view text) {
    if (text.size() < 2 || text[0] != 'q') {
        throw Error(ErrorCode::ParseError, "bad qubit name '" + std::string(text) + "'");
    }
    return QubitId{std::stoull(std::string(text.substr(1)))};
}

std::vector<QubitId> parse_qubits(const std::string &text) {
    std::vector<QubitId> out;
    size_t start = 0;
    while (start < text.size()) {
        size_t comma = text.find(',', start);
        if (comma == std::string::npos) {
            comma = text.size();
        }
        out.push_back(parse_qubit(std::string_view(text).substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

std::pair<double, double> parse_pair(const std::string &text) {
    size_t comma = text.find(',');
    if (comma == std::string::npos) {
        throw Error(ErrorCode::ParseError, "expected two comma-separated reals, got '" + text + "'");
    }
    return {parse_real(text.substr(0, comma)), parse_real(text.substr(comma + 1))};
}

const std::string &field(const std::map<std::string, std::string> &fields, const std::string &key) {
    auto it = fields.find(key);
    if (it == fields.end()) {
        throw Error(ErrorCode::ParseError, "trace detail lacks '" + key + "'");
    }
    return it->second;
}

double von_neumann(const Matrix &rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
    double s = 0;
    for (double lambda : solver.eigenvalues()) {
        if (lambda > 1e-300) {
            s -= lambda * std::log2(lambda);
        }
    }
    return s;
}

double error_of(double reported, double replayed) {
    if (std::isnan(reported) && std::isnan(replayed)) {
        return 0;
    }
    return std::abs(reported - replayed);
}

}  // namespace

double OracleReport::max_fidelity_error() const {
    double worst = 0;
    for (const auto &c : checks) {
        double e = error_of(c.reported_f, c.oracle_f);
        worst = std::isnan(e) ? INFINITY : std::max(worst, e);
    }
    return worst;
}

double OracleReport::max_entropy_error() const {
    double worst = 0;
    for (const auto &c : checks) {
        double e = error_of(c.reported_s, c.oracle_s);
        worst = std::isnan(e) ? INFINITY : std::max(worst, e);
    }
    return worst;
}

bool OracleReport::consistent(double tolerance) const {
    return max_fidelity_error() <= tolerance && max_entropy_error() <= tolerance &&
           max_probability_error <= tolerance && max_branch_sum_error <= tolerance;
}

OracleReport replay_trace(const Trace &trace, size_t max_qubits) {
    OracleReport report;
    FlatRegister reg(max_qubits);
    std::map<std::string, std::string> received;
    for (const auto &event : trace.events()) {
        if (event.kind == TraceKind::ReqRecv) {
            received[event.request] = event.detail;
            continue;
        }
        if (event.kind == TraceKind::Rsp) {
            auto fields = parse_detail(event.detail);
            auto qubits = fields.find("qubits");
            if (qubits == fields.end()) {
                continue;
            }
            auto req = received.find(event.request);
            if (req == received.end()) {
                throw Error(ErrorCode::ParseError, "RSP for " + event.request + " has no prior REQ_RECV");
            }
            Request request = decode_request(req->second);
            std::vector<QubitId> ids = parse_qubits(qubits->second);
            OracleCheck check;
            check.seq = event.seq;
            check.node = event.node;
            check.request = event.request;
            check.reported_f = parse_real(field(fields, "f"));
            check.reported_s = parse_real(field(fields, "s"));
            Matrix rho = reg.reduced(ids);
            check.oracle_s = von_neumann(rho);
            check.oracle_f = std::numeric_limits<double>::quiet_NaN();
            if (const auto *state = std::get_if<StateRequest>(&request)) {
                check.state_request = true;
                StateVector psi = target_state(state->spec, state->targets);
                check.oracle_f = std::clamp((psi.adjoint() * rho * psi)(0, 0).real(), 0.0, 1.0);
            }
            check.state = DensityMatrix(rho, ids);
            report.checks.push_back(std::move(check));
            continue;
        }
        if (event.kind != TraceKind::Op) {
            continue;
        }
        report.operations++;
        auto fields = parse_detail(event.detail);
        const std::string &op = field(fields, "_0");
        if (op == "ALLOC") {
            reg.allocate(parse_qubit(field(fields, "q")));
            report.peak_qubits = std::max(report.peak_qubits, reg.size());
        } else if (op == "GATE") {
            auto kind = parse_gate_kind(field(fields, "_1"));
            if (!kind) {
                throw Error(ErrorCode::ParseError, "unknown gate in trace: " + event.detail);
            }
            auto qs = parse_qubits(field(fields, "q"));
            if (*kind == GateKind::CNOT || *kind == GateKind::CZ) {
                Matrix u = Matrix::Identity(4, 4);
                if (*kind == GateKind::CNOT) {
                    u.block(2, 2, 2, 2) = single(GateKind::X);
                } else {
                    u(3, 3) = -1;
                }
                reg.two(qs.at(0), qs.at(1), u);
            } else {
                reg.one(qs.at(0), single(*kind));
            }
        } else if (op == "ROTATE") {
            auto [ar, ai] = parse_pair(field(fields, "alpha"));
            auto [br, bi] = parse_pair(field(fields, "beta"));
            Complex alpha(ar, ai), beta(br, bi);
            Matrix u(2, 2);
            u << alpha, -std::conj(beta), beta, std::conj(alpha);
            reg.one(parse_qubit(field(fields, "q")), u);
        } else if (op == "NOISE") {
            const std::string &kind = field(fields, "_1");
            double p = parse_real(field(fields, "p"));
            auto qs = parse_qubits(field(fields, "q"));
            if (kind == "DEPOLARIZING") {
                for (QubitId q : qs) {
                    reg.pauli_channel(q, 1 - p);
                }
            } else if (kind == "WERNER_SOURCE") {
                reg.pauli_channel(qs.at(1), p);
            } else {
                throw Error(ErrorCode::ParseError, "unknown channel in trace: " + kind);
            }
        } else if (op == "MEASURE") {
            QubitId q = parse_qubit(field(fields, "q"));
            int outcome = std::stoi(field(fields, "outcome"));
            double recorded = parse_real(field(fields, "p"));
            auto [p0, p1] = reg.branch_probabilities(q);
            double p = outcome ? p1 : p0;
            if (p < 1e-15) {
                throw Error(ErrorCode::ImpossibleBranch, "trace takes a branch of probability " + format_real(p));
            }
            report.measurements++;
            report.max_branch_sum_error = std::max(report.max_branch_sum_error, std::abs(p0 + p1 - 1));
            report.max_probability_error = std::max(report.max_probability_error, std::abs(p - recorded));
            reg.project(q, outcome, p);
        } else if (op == "DISCARD") {
            reg.remove(parse_qubit(field(fields, "q")));
        } else {
            throw Error(ErrorCode::ParseError, "unknown operation in trace: " + event.detail);
        }
    }
    return report;
}

std::string format_oracle_report(const OracleReport &report) {
    std::string out = "operations=" + std::to_string(report.operations) +
                      " measurements=" + std::to_string(report.measurements) +
                      " peak_qubits=" + std::to_string(report.peak_qubits) +
                      " max_probability_error=" + format_real(report.max_probability_error) +
                      " max_branch_sum_error=" + format_real(report.max_branch_sum_error) + "\n";
    out += "seq\tnode\trequest\treported_f\toracle_f\treported_s\toracle_s\n";
    for (const auto &c : report.checks) {
        out += std::to_string(c.seq) + "\t" + c.node + "\t" + c.request + "\t" + format_real(c.reported_f) + "\t" +
               format_real(c.oracle_f) + "\t" + format_real(c.reported_s) + "\t" + format_real(c.oracle_s) + "\n";
    }
    out += "max_fidelity_error=" + format_real(report.max_fidelity_error()) +
           " max_entropy_error=" + format_real(report.max_entropy_error()) + "\n";
    return out;
}

}  // namespace qrna
