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


#include "qrna/link_layer.h"

#include <cmath>

#include "flat_oracle.h"
#include "gtest/gtest.h"
#include "qrna/error.h"

using namespace qrna;

namespace {

NodeQubit at(const std::string &node, uint64_t vaddr) {
    return {node, FullVirtualId{"T", 1, vaddr}};
}

struct Fixture {
    Trace trace;
    StateStore store;
    explicit Fixture(uint64_t seed = 1, double p_gate = 0)
        : store({"A", "B", "C"}, StoreConfig{EngineLimits{}, 16, p_gate}, &trace, seed) {
    }

    EntangledPairHandle pair(const std::string &a, const std::string &b, uint64_t v, double f) {
        Link link{a, b, 1, f, 1};
        auto handle = generate_pair(store, link, at(a, v), at(b, v), GenerationMode::Deterministic);
        EXPECT_TRUE(handle.has_value());
        return *handle;
    }

    size_t bindings() const {
        size_t total = 0;
        for (const auto &[node, map] : store.virtual_maps()) {
            total += map.size();
        }
        return total;
    }
};

double bbpssw_success(double f) {
    return f * f + 2 * f * (1 - f) / 3 + 5 * (1 - f) * (1 - f) / 9;
}

double bbpssw_fidelity(double f) {
    return (f * f + (1 - f) * (1 - f) / 9) / bbpssw_success(f);
}

}  // namespace

TEST(link_layer, generate_pair) {
    Fixture fx;
    auto perfect = fx.pair("A", "B", 0, 1);
    EXPECT_NEAR(fx.store.bell_fidelity(perfect.a, perfect.b), 1, 1e-12);
    auto werner = fx.pair("A", "B", 1, 0.95);
    EXPECT_NEAR(fx.store.bell_fidelity(werner.a, werner.b), 0.95, 1e-12);
    EXPECT_NEAR(werner.nominal_f, 0.95, 1e-12);
    auto rho = fx.store.reduced_state({werner.a, werner.b});
    EXPECT_LE((rho.entries() - oracle::werner(0.95)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(link_layer, stochastic_generation_is_reproducible) {
    auto pattern = [](uint64_t seed) {
        Fixture fx(seed);
        std::string out;
        Link link{"A", "B", 1, 1, 0.5};
        for (uint64_t v = 0; v < 64; v++) {
            auto h = generate_pair(fx.store, link, at("A", v), at("B", v), GenerationMode::Stochastic);
            out += h ? '1' : '0';
            if (h) {
                fx.store.discard(h->a);
                fx.store.discard(h->b);
            }
        }
        return out;
    };
    auto first = pattern(42);
    EXPECT_EQ(first, pattern(42));
    EXPECT_NE(first.find('0'), std::string::npos);
    EXPECT_NE(first.find('1'), std::string::npos);
    EXPECT_NE(first, pattern(43));

    Fixture fx;
    Link never{"A", "B", 1, 1, 0};
    EXPECT_FALSE(generate_pair(fx.store, never, at("A", 0), at("B", 0), GenerationMode::Stochastic));
    EXPECT_EQ(fx.bindings(), 0u);
}

TEST(link_layer, oracle_agrees_with_closed_form) {
    for (double f = 0.55; f < 0.999; f += 0.05) {
        auto o = oracle::purify_werner(f, f);
        EXPECT_NEAR(o.success_probability, bbpssw_success(f), 1e-12);
        EXPECT_NEAR(o.fidelity, bbpssw_fidelity(f), 1e-12);
        EXPECT_NEAR(o.branch_sum, 1, 1e-12);
    }
    EXPECT_NEAR(oracle::swap_werner(0.95, 0.9), 0.95 * 0.9 + 0.05 * 0.1 / 3, 1e-12);
    EXPECT_NEAR(oracle::teleport_plus_over_werner(0.95), 0.95 + 0.05 / 3, 1e-12);
}

TEST(link_layer, purify_perfect_pairs) {
    Fixture fx;
    auto keep = fx.pair("A", "B", 0, 1);
    auto sac = fx.pair("A", "B", 1, 1);
    auto result = purify(fx.store, keep, sac);
    EXPECT_NEAR(result.success_probability, 1, 1e-12);
    ASSERT_TRUE(result.pair);
    EXPECT_NEAR(fx.store.bell_fidelity(result.pair->a, result.pair->b), 1, 1e-12);
    EXPECT_EQ(fx.bindings(), 2u);
}

TEST(link_layer, purify_matches_oracle) {
    for (double f = 0.55; f < 0.999; f += 0.05) {
        auto expected = oracle::purify_werner(f, f);
        int successes = 0;
        for (uint64_t seed = 0; seed < 6; seed++) {
            Fixture fx(seed);
            auto keep = fx.pair("A", "B", 0, f);
            auto sac = fx.pair("A", "B", 1, f);
            auto result = purify(fx.store, keep, sac);
            EXPECT_NEAR(result.success_probability, expected.success_probability, 1e-9);
            if (result.pair) {
                successes++;
                double got = fx.store.bell_fidelity(result.pair->a, result.pair->b);
                EXPECT_NEAR(got, expected.fidelity, 1e-9) << "F=" << f;
                EXPECT_GT(got, f);
                EXPECT_NEAR(result.pair->nominal_f, got, 1e-12);
                EXPECT_EQ(fx.bindings(), 2u);
            } else {
                // Both pairs are consumed on failure.
                EXPECT_EQ(fx.bindings(), 0u);
                EXPECT_EQ(fx.store.live_qubits(), 0u);
            }
        }
        EXPECT_GT(successes, 0);
    }
}

TEST(link_layer, purify_with_gate_noise_matches_oracle) {
    for (double p : {0.01, 0.05}) {
        auto expected = oracle::purify_werner(0.9, 0.85, p);
        Fixture fx(3, p);
        auto keep = fx.pair("A", "B", 0, 0.9);
        auto sac = fx.pair("A", "B", 1, 0.85);
        auto result = purify(fx.store, keep, sac);
        EXPECT_NEAR(result.success_probability, expected.success_probability, 1e-9);
        if (result.pair) {
            EXPECT_NEAR(fx.store.bell_fidelity(result.pair->a, result.pair->b), expected.fidelity, 1e-9);
        }
    }
}

TEST(link_layer, purify_rejects_mismatched_pairs) {
    Fixture fx;
    auto ab = fx.pair("A", "B", 0, 1);
    auto bc = fx.pair("B", "C", 1, 1);
    try {
        purify(fx.store, ab, bc);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::MismatchedEndpoints);
    }
}

TEST(link_layer, swap) {
    Fixture fx;
    auto out = swap(fx.store, fx.pair("A", "B", 0, 1), fx.pair("B", "C", 1, 1));
    EXPECT_EQ(out.a.node, "A");
    EXPECT_EQ(out.b.node, "C");
    EXPECT_NEAR(fx.store.bell_fidelity(out.a, out.b), 1, 1e-12);
    EXPECT_EQ(fx.store.virtual_map("B").size(), 0u);

    // Orientation of the inputs does not matter.
    auto flipped = swap(fx.store, fx.pair("B", "A", 2, 1), fx.pair("C", "B", 3, 1));
    EXPECT_NEAR(fx.store.bell_fidelity(flipped.a, flipped.b), 1, 1e-12);

    try {
        swap(fx.store, fx.pair("A", "B", 4, 1), fx.pair("A", "B", 5, 1));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::MismatchedEndpoints);
    }
}

TEST(link_layer, swap_matches_oracle) {
    double ideal = oracle::swap_werner(0.95, 0.9);
    for (uint64_t seed = 0; seed < 8; seed++) {
        Fixture fx(seed);
        auto out = swap(fx.store, fx.pair("A", "B", 0, 0.95), fx.pair("B", "C", 1, 0.9));
        EXPECT_NEAR(fx.store.bell_fidelity(out.a, out.b), ideal, 1e-9);
        EXPECT_NEAR(out.nominal_f, ideal, 1e-9);
    }
    double previous = ideal;
    for (double p : {0.01, 0.05, 0.1}) {
        double expected = oracle::swap_werner(0.95, 0.9, p);
        EXPECT_LE(expected, previous);
        previous = expected;
        for (uint64_t seed = 0; seed < 4; seed++) {
            Fixture fx(seed, p);
            auto out = swap(fx.store, fx.pair("A", "B", 0, 0.95), fx.pair("B", "C", 1, 0.9));
            double got = fx.store.bell_fidelity(out.a, out.b);
            EXPECT_NEAR(got, expected, 1e-9);
            EXPECT_LE(got, ideal + 1e-12);
        }
    }
}

TEST(link_layer, teleport) {
    for (uint64_t seed = 0; seed < 8; seed++) {
        Fixture fx(seed);
        auto data = at("A", 100);
        fx.store.allocate(data);
        fx.store.gate(GateKind::H, {data});
        auto channel = fx.pair("A", "B", 0, 1);
        auto moved = teleport(fx.store, data, channel);
        EXPECT_EQ(moved.node, "B");
        StateVector plus(2);
        plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
        EXPECT_NEAR(fidelity(fx.store.reduced_state({moved}), plus), 1, 1e-12);
        EXPECT_EQ(fx.bindings(), 1u);

        Fixture noisy(seed);
        auto d2 = at("A", 100);
        noisy.store.allocate(d2);
        noisy.store.gate(GateKind::H, {d2});
        auto out = teleport(noisy.store, d2, noisy.pair("A", "B", 0, 0.95));
        EXPECT_NEAR(fidelity(noisy.store.reduced_state({out}), plus), oracle::teleport_plus_over_werner(0.95), 1e-9);
    }
}

TEST(link_layer, teleport_preserves_entanglement) {
    for (uint64_t seed = 0; seed < 8; seed++) {
        Fixture fx(seed);
        auto held = fx.pair("A", "C", 0, 1);
        auto moved = teleport(fx.store, held.a, fx.pair("A", "B", 1, 1));
        EXPECT_NEAR(fx.store.bell_fidelity(moved, held.b), 1, 1e-12);
    }
}

TEST(link_layer, gates_respect_locality) {
    Fixture fx;
    auto pair = fx.pair("A", "B", 0, 1);
    try {
        fx.store.gate(GateKind::CNOT, {pair.a, pair.b});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::LoccViolation);
    }
}

TEST(link_layer, register_capacity) {
    Trace trace;
    StateStore store({"A", "B"}, StoreConfig{EngineLimits{}, 2, 0}, &trace, 1);
    Link link{"A", "B", 1, 1, 1};
    generate_pair(store, link, at("A", 0), at("B", 0), GenerationMode::Deterministic);
    generate_pair(store, link, at("A", 1), at("B", 1), GenerationMode::Deterministic);
    try {
        generate_pair(store, link, at("A", 2), at("B", 2), GenerationMode::Deterministic);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::SlotBusy);
    }
}
