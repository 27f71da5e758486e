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


#ifndef QRNA_DENSITY_H
#define QRNA_DENSITY_H

#include <Eigen/Dense>
#include <complex>
#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qrna {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Identifies one simulated physical qubit for as long as it is alive.
struct QubitId {
    uint64_t value = 0;
    auto operator<=>(const QubitId &) const = default;
};
std::string to_string(QubitId q);

/// A physical qubit position inside a node's register.
struct QubitSlot {
    std::string register_id;
    uint32_t index = 0;
    auto operator<=>(const QubitSlot &) const = default;
};
std::string to_string(const QubitSlot &slot);

enum class GateKind { H, X, Y, Z, S, T, CNOT, CZ };

size_t gate_arity(GateKind kind);
std::string_view gate_name(GateKind kind);
std::optional<GateKind> parse_gate_kind(std::string_view name);
/// Unitary of the gate; for two-qubit gates the first target is the most significant factor.
const Matrix &gate_matrix(GateKind kind);

struct GateOp {
    GateKind kind;
    std::vector<QubitId> targets;
};

enum class ChannelKind { Depolarizing, WernerSource };

struct NoiseChannel {
    ChannelKind kind;
    double parameter;

    static NoiseChannel depolarizing(double p) {
        return {ChannelKind::Depolarizing, p};
    }
    /// Two-qubit channel turning |Phi+> into the Werner state of fidelity f_link.
    static NoiseChannel werner_source(double f_link) {
        return {ChannelKind::WernerSource, f_link};
    }
    size_t arity() const {
        return kind == ChannelKind::Depolarizing ? 1 : 2;
    }
};
std::string_view channel_name(ChannelKind kind);

struct EngineLimits {
    size_t max_qubits = 12;
};

/// Mixed state over an ordered list of logical qubits. qubit_order()[0] is the most
/// significant tensor factor of entries().
class DensityMatrix {
   public:
    /// The zero-qubit state (scalar 1).
    DensityMatrix();
    DensityMatrix(Matrix entries, std::vector<QubitId> qubit_order);

    static DensityMatrix from_pure(const StateVector &psi, std::vector<QubitId> qubit_order);

    size_t n_qubits() const {
        return order_.size();
    }
    const Matrix &entries() const {
        return entries_;
    }
    std::span<const QubitId> qubit_order() const {
        return order_;
    }
    bool contains(QubitId q) const;
    /// Index of q in qubit_order(); throws AddressError when absent.
    size_t position_of(QubitId q) const;

   private:
    Matrix entries_;
    std::vector<QubitId> order_;
};

DensityMatrix new_register(size_t n, const EngineLimits &limits = {});
DensityMatrix new_register(std::vector<QubitId> qubits, const EngineLimits &limits = {});

StateVector bell_phi_plus();
/// F|Phi+><Phi+| + (1-F)/3 (|Phi-><Phi-| + |Psi+><Psi+| + |Psi-><Psi-|).
DensityMatrix werner_pair(double fidelity, QubitId a, QubitId b);

DensityMatrix apply_unitary(const DensityMatrix &rho, const Matrix &u, std::span<const QubitId> targets);
DensityMatrix apply_gate(const DensityMatrix &rho, const GateOp &gate);
DensityMatrix apply_channel(const DensityMatrix &rho, const NoiseChannel &channel, std::span<const QubitId> targets);

struct MeasureResult {
    int outcome;
    double probability;
    DensityMatrix state;
};

/// Z-basis measurement returning the requested branch. The measured qubit stays in the
/// register, collapsed.
MeasureResult measure_z(const DensityMatrix &rho, QubitId qubit, int forced_outcome);
/// Z-basis measurement with the outcome drawn by the Born rule.
MeasureResult measure_z(const DensityMatrix &rho, QubitId qubit, std::mt19937_64 &rng);
/// Probability that measuring `qubit` gives 0.
double probability_of_zero(const DensityMatrix &rho, QubitId qubit);

DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const QubitId> keep);
DensityMatrix discard(const DensityMatrix &rho, QubitId qubit);
DensityMatrix tensor(const DensityMatrix &a, const DensityMatrix &b, const EngineLimits &limits = {});
/// Same state with the tensor factors permuted into `order`.
DensityMatrix reorder(const DensityMatrix &rho, std::span<const QubitId> order);

double fidelity(const DensityMatrix &rho, const StateVector &target);
/// Von Neumann entropy in bits.
double entropy(const DensityMatrix &rho);
/// Half the trace norm of the difference; b is aligned to a's qubit order first.
double trace_distance(const DensityMatrix &a, const DensityMatrix &b);

struct InvariantReport {
    double trace_error = 0;
    double hermiticity_error = 0;
    double min_eigenvalue = 1;
    bool ok() const {
        return trace_error <= 1e-12 && hermiticity_error <= 1e-12 && min_eigenvalue >= -1e-10;
    }
};
InvariantReport check_invariants(const DensityMatrix &rho);

/// Uniform double in [0,1) built from the top 53 bits of one draw; stable across platforms.
double uniform_unit(std::mt19937_64 &rng);

}  // namespace qrna

#endif
