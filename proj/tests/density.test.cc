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

#include <cmath>
#include <random>

#include "flat_oracle.h"
#include "gtest/gtest.h"
#include "qrna/error.h"

using namespace qrna;

namespace {

const QubitId q0{0};
const QubitId q1{1};
const QubitId q2{2};

StateVector plus_state() {
    StateVector v(2);
    v << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    return v;
}

void expect_valid(const DensityMatrix &rho) {
    auto report = check_invariants(rho);
    EXPECT_TRUE(report.ok()) << "trace error " << report.trace_error << " hermiticity " << report.hermiticity_error
                             << " min eigenvalue " << report.min_eigenvalue;
}

DensityMatrix random_state(std::mt19937_64 &rng, std::vector<QubitId> ids) {
    std::normal_distribution<double> normal;
    auto dim = Eigen::Index{1} << ids.size();
    Matrix a(dim, dim);
    for (Eigen::Index r = 0; r < dim; r++) {
        for (Eigen::Index c = 0; c < dim; c++) {
            a(r, c) = Complex(normal(rng), normal(rng));
        }
    }
    Matrix rho = a * a.adjoint();
    rho /= rho.trace();
    return DensityMatrix(rho, std::move(ids));
}

}  // namespace

TEST(density, new_register) {
    auto one = new_register(1);
    EXPECT_EQ(one.entries(), (Matrix(2, 2) << 1, 0, 0, 0).finished());
    auto two = new_register(2);
    EXPECT_EQ(two.entries()(0, 0), Complex(1));
    EXPECT_NEAR(two.entries().cwiseAbs().sum(), 1.0, 0);
    try {
        new_register(13, EngineLimits{12});
        FAIL() << "expected ResourceLimit";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::ResourceLimit);
    }
    EXPECT_NO_THROW(new_register(12, EngineLimits{12}));
}

TEST(density, gates) {
    auto rho = apply_gate(new_register(1), {GateKind::H, {q0}});
    EXPECT_NEAR(fidelity(rho, plus_state()), 1, 1e-12);

    auto bell = apply_gate(apply_gate(new_register(2), {GateKind::H, {q0}}), {GateKind::CNOT, {q0, q1}});
    EXPECT_NEAR(fidelity(bell, bell_phi_plus()), 1, 1e-12);

    std::mt19937_64 rng(5);
    auto mixed = random_state(rng, {q0, q1});
    auto twice = apply_gate(apply_gate(mixed, {GateKind::X, {q1}}), {GateKind::X, {q1}});
    EXPECT_LE((twice.entries() - mixed.entries()).cwiseAbs().maxCoeff(), 1e-12);

    try {
        apply_gate(mixed, {GateKind::H, {QubitId{9}}});
        FAIL() << "expected AddressError";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::AddressError);
    }
}

TEST(density, gates_match_kronecker_oracle) {
    std::mt19937_64 rng(11);
    auto rho = random_state(rng, {q0, q1, q2});
    oracle::M expected = oracle::conj_by(oracle::cnot(2, 0, 3), rho.entries());
    auto got = apply_gate(rho, {GateKind::CNOT, {q2, q0}});
    EXPECT_LE((got.entries() - expected).cwiseAbs().maxCoeff(), 1e-12);

    expected = oracle::conj_by(oracle::on(oracle::Y(), 1, 3), rho.entries());
    got = apply_gate(rho, {GateKind::Y, {q1}});
    EXPECT_LE((got.entries() - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(density, depolarizing) {
    auto zero = new_register(1);
    auto full = apply_channel(zero, NoiseChannel::depolarizing(1), std::vector<QubitId>{q0});
    EXPECT_NEAR(full.entries()(0, 0).real(), 1.0 / 3, 1e-12);
    EXPECT_NEAR(full.entries()(1, 1).real(), 2.0 / 3, 1e-12);
    EXPECT_NEAR(std::abs(full.entries()(0, 1)), 0, 1e-12);

    auto none = apply_channel(zero, NoiseChannel::depolarizing(0), std::vector<QubitId>{q0});
    EXPECT_LE((none.entries() - zero.entries()).cwiseAbs().maxCoeff(), 1e-15);

    auto mixed = apply_channel(zero, NoiseChannel::depolarizing(0.75), std::vector<QubitId>{q0});
    EXPECT_LE((mixed.entries() - Matrix::Identity(2, 2) / 2).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(density, werner_source_channel_builds_werner_pair) {
    auto bell = DensityMatrix::from_pure(bell_phi_plus(), {q0, q1});
    auto noisy = apply_channel(bell, NoiseChannel::werner_source(0.95), std::vector<QubitId>{q0, q1});
    EXPECT_LE((noisy.entries() - oracle::werner(0.95)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((werner_pair(0.95, q0, q1).entries() - oracle::werner(0.95)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(density, measure) {
    auto plus = apply_gate(new_register(1), {GateKind::H, {q0}});
    auto m = measure_z(plus, q0, 0);
    EXPECT_NEAR(m.probability, 0.5, 1e-12);
    EXPECT_NEAR(m.state.entries()(0, 0).real(), 1, 1e-12);

    try {
        measure_z(new_register(1), q0, 1);
        FAIL() << "expected ImpossibleBranch";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::ImpossibleBranch);
    }

    auto bell = DensityMatrix::from_pure(bell_phi_plus(), {q0, q1});
    auto first = measure_z(bell, q0, 0);
    EXPECT_NEAR(first.probability, 0.5, 1e-12);
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = 1;
    EXPECT_LE((first.state.entries() - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(density, branch_probabilities_sum_to_one) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; trial++) {
        auto rho = random_state(rng, {q0, q1, q2});
        for (QubitId q : {q0, q1, q2}) {
            double total = 0;
            for (int outcome : {0, 1}) {
                try {
                    auto m = measure_z(rho, q, outcome);
                    total += m.probability;
                    expect_valid(m.state);
                } catch (const Error &e) {
                    EXPECT_EQ(e.code(), ErrorCode::ImpossibleBranch);
                }
            }
            EXPECT_NEAR(total, 1, 1e-12);
        }
    }
}

TEST(density, partial_trace) {
    auto bell = DensityMatrix::from_pure(bell_phi_plus(), {q0, q1});
    const QubitId keep0[] = {q0};
    auto marginal = partial_trace(bell, keep0);
    EXPECT_LE((marginal.entries() - Matrix::Identity(2, 2) / 2).cwiseAbs().maxCoeff(), 1e-12);

    const QubitId both[] = {q0, q1};
    EXPECT_LE((partial_trace(bell, both).entries() - bell.entries()).cwiseAbs().maxCoeff(), 1e-15);

    auto product = tensor(new_register({q0}), apply_gate(new_register({q1}), {GateKind::H, {q1}}));
    const QubitId keep1[] = {q1};
    EXPECT_NEAR(fidelity(partial_trace(product, keep1), plus_state()), 1, 1e-12);

    const QubitId missing[] = {QubitId{7}};
    EXPECT_THROW(partial_trace(bell, missing), Error);
}

TEST(density, partial_trace_matches_oracle_and_order) {
    std::mt19937_64 rng(17);
    auto rho = random_state(rng, {q0, q1, q2});
    const QubitId keep[] = {q2, q0};
    auto got = partial_trace(rho, keep);
    // partial_trace preserves the original order, so the result is over (q0, q2).
    ASSERT_EQ(got.qubit_order()[0], q0);
    EXPECT_LE((got.entries() - oracle::reduce(rho.entries(), 3, {0, 2})).cwiseAbs().maxCoeff(), 1e-12);
    auto swapped = reorder(got, keep);
    EXPECT_LE((swapped.entries() - oracle::reduce(rho.entries(), 3, {2, 0})).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(density, fidelity_and_entropy) {
    auto bell = DensityMatrix::from_pure(bell_phi_plus(), {q0, q1});
    EXPECT_NEAR(fidelity(bell, bell_phi_plus()), 1, 1e-12);
    DensityMatrix mixed(Matrix::Identity(4, 4) / 4, {q0, q1});
    EXPECT_NEAR(fidelity(mixed, bell_phi_plus()), 0.25, 1e-12);
    EXPECT_NEAR(fidelity(werner_pair(0.95, q0, q1), bell_phi_plus()), 0.95, 1e-12);
    EXPECT_THROW(fidelity(bell, plus_state()), Error);

    EXPECT_LT(entropy(bell), 1e-9);
    DensityMatrix half(Matrix::Identity(2, 2) / 2, {q0});
    EXPECT_NEAR(entropy(half), 1.0, 1e-12);
    // Closed form for a Werner state: eigenvalues F and three copies of (1-F)/3.
    double f = 0.95;
    double q = (1 - f) / 3;
    double expected = -f * std::log2(f) - 3 * q * std::log2(q);
    EXPECT_NEAR(entropy(werner_pair(f, q0, q1)), expected, 1e-12);
}

TEST(density, tensor) {
    auto zz = tensor(new_register({q0}), new_register({q1}));
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = 1;
    EXPECT_EQ(zz.entries(), expected);

    std::mt19937_64 rng(23);
    auto a = random_state(rng, {q0});
    auto b = random_state(rng, {q1, q2});
    auto ab = tensor(a, b);
    const QubitId keep_a[] = {q0};
    const QubitId keep_b[] = {q1, q2};
    EXPECT_LE((partial_trace(ab, keep_a).entries() - a.entries()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((partial_trace(ab, keep_b).entries() - b.entries()).cwiseAbs().maxCoeff(), 1e-12);

    auto pairs = tensor(werner_pair(0.9, QubitId{0}, QubitId{1}), werner_pair(0.9, QubitId{2}, QubitId{3}));
    EXPECT_EQ(pairs.entries().rows(), 16);
    EXPECT_NEAR(pairs.entries().trace().real(), 1, 1e-12);

    EXPECT_THROW(tensor(a, a), Error);
}

TEST(density, random_circuits_keep_invariants) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> pick_gate(0, 7);
    std::uniform_int_distribution<int> pick_qubit(0, 3);
    std::vector<QubitId> ids{QubitId{0}, QubitId{1}, QubitId{2}, QubitId{3}};
    for (int trial = 0; trial < 20; trial++) {
        auto rho = random_state(rng, ids);
        double s0 = entropy(rho);
        for (int step = 0; step < 30; step++) {
            auto kind = static_cast<GateKind>(pick_gate(rng));
            QubitId a = ids[pick_qubit(rng)];
            QubitId b = ids[pick_qubit(rng)];
            if (gate_arity(kind) == 2) {
                if (a == b) {
                    continue;
                }
                rho = apply_gate(rho, {kind, {a, b}});
            } else {
                rho = apply_gate(rho, {kind, {a}});
            }
            expect_valid(rho);
            EXPECT_NEAR(entropy(rho), s0, 1e-9);
        }
        StateVector psi = StateVector::Zero(16);
        psi(5) = 1;
        double f = fidelity(rho, psi);
        EXPECT_GE(f, 0);
        EXPECT_LE(f, 1);
        EXPECT_LE(entropy(rho), 4 + 1e-12);
    }
}

TEST(density, trace_distance) {
    auto a = werner_pair(0.9, q0, q1);
    auto b = werner_pair(0.8, q1, q0);
    EXPECT_NEAR(trace_distance(a, a), 0, 1e-12);
    // Werner states commute; distance = 1/2 (|0.1| + 3 * |0.1/3|).
    EXPECT_NEAR(trace_distance(a, b), 0.1, 1e-12);
}
