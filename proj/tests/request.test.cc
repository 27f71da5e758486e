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

#include <cmath>
#include <random>
#include <set>

#include "flat_oracle.h"
#include "gtest/gtest.h"
#include "qrna/error.h"
#include "qrna/virtual_map.h"

using namespace qrna;

namespace {

bool has_code(const std::vector<Violation> &violations, ErrorCode code) {
    for (const auto &v : violations) {
        if (v.code == code) {
            return true;
        }
    }
    return false;
}

StateRequest bell_request() {
    StateRequest r;
    r.id = 4;
    r.spec = {NamedSpec::bell_phi_plus()};
    r.f_min = 0.9;
    r.s_max = 0.5;
    r.targets = {{"A", 1}, {"B", 1}};
    return r;
}

}  // namespace

TEST(request, names) {
    EXPECT_TRUE(is_valid_name("Node11"));
    EXPECT_TRUE(is_valid_name("_x-1.b"));
    EXPECT_FALSE(is_valid_name(""));
    EXPECT_FALSE(is_valid_name("1abc"));
    EXPECT_FALSE(is_valid_name("a:b"));
    EXPECT_FALSE(is_valid_name("a b"));
    EXPECT_EQ(to_string(QubitAddress{"Node55", 1000}), "Node55:1000");
    EXPECT_EQ(to_string(FullVirtualId{"Node11", 1, 7}), "Node11/1/7");
}

TEST(request, validate) {
    auto ok = bell_request();
    EXPECT_TRUE(validate(ok).empty());

    auto bad = ok;
    bad.f_min = 1.5;
    EXPECT_TRUE(has_code(validate(bad), ErrorCode::InvalidArgument));
    bad = ok;
    bad.s_max = -0.1;
    EXPECT_TRUE(has_code(validate(bad), ErrorCode::InvalidArgument));
    bad = ok;
    bad.encoding = "ABSOLUTE";
    EXPECT_TRUE(has_code(validate(bad), ErrorCode::UnsupportedEncoding));
    bad = ok;
    bad.targets.push_back({"C", 1});
    EXPECT_TRUE(has_code(validate(bad), ErrorCode::ShapeError) || has_code(validate(bad), ErrorCode::InvalidArgument));
    bad = ok;
    bad.targets[1] = bad.targets[0];
    EXPECT_TRUE(has_code(validate(bad), ErrorCode::AddressError));
    bad = ok;
    bad.targets.clear();
    EXPECT_FALSE(validate(bad).empty());

    StateRequest circuit;
    circuit.id = 1;
    circuit.targets = {{"A", 1}};
    circuit.spec = {CircuitSpec{{CircuitOp::make_gate(GateKind::H, {{"Z", 9}})}}};
    circuit.f_min = 0.5;
    EXPECT_TRUE(has_code(validate(circuit), ErrorCode::AddressError));
    circuit.spec = {CircuitSpec{{CircuitOp::measure({"A", 1})}}};
    EXPECT_TRUE(has_code(validate(circuit), ErrorCode::InvalidArgument));

    StateRequest fanout = ok;
    fanout.spec = {NamedSpec::fanout(1, 1, 2)};
    EXPECT_TRUE(has_code(validate(fanout), ErrorCode::InvalidArgument));
}

TEST(request, target_states_match_oracle) {
    std::vector<QubitAddress> three{{"A", 1}, {"B", 1}, {"C", 1}};
    auto ghz = target_state({NamedSpec::ghz(3)}, three);
    EXPECT_NEAR(std::abs(ghz(0)), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(std::abs(ghz(7)), 1 / std::sqrt(2.0), 1e-12);

    auto cluster = target_state({NamedSpec::linear_cluster(3)}, three);
    auto expected = oracle::linear_cluster(3);
    EXPECT_NEAR(std::abs(cluster.dot(expected)), 1, 1e-12);

    Complex a(0.6, 0), b(0, 0.8);
    auto fan = target_state({NamedSpec::fanout(a, b, 3)}, three);
    EXPECT_NEAR(std::abs(fan(0) - a), 0, 1e-12);
    EXPECT_NEAR(std::abs(fan(7) - b), 0, 1e-12);

    // A circuit spec is interpreted against the target list.
    CircuitSpec circuit{{CircuitOp::make_gate(GateKind::H, {{"A", 1}}), CircuitOp::make_gate(GateKind::H, {{"B", 1}}),
                         CircuitOp::make_gate(GateKind::H, {{"C", 1}}),
                         CircuitOp::make_gate(GateKind::CZ, {{"A", 1}, {"B", 1}}),
                         CircuitOp::make_gate(GateKind::CZ, {{"B", 1}, {"C", 1}})}};
    auto built = target_state({circuit}, three);
    EXPECT_NEAR(std::abs(built.dot(expected)), 1, 1e-12);

    EXPECT_THROW(target_state({NamedSpec::ghz(13)}, std::vector<QubitAddress>(13, QubitAddress{"A", 1}), EngineLimits{12}),
                 Error);
}

TEST(request, check_response) {
    auto r = bell_request();
    auto perfect = check_response(werner_pair(1, QubitId{0}, QubitId{1}), r);
    EXPECT_EQ(perfect.status, ResponseStatus::Ok);
    EXPECT_NEAR(perfect.measured_f, 1, 1e-12);
    EXPECT_NEAR(perfect.measured_s, 0, 1e-9);

    auto noisy = check_response(werner_pair(0.85, QubitId{0}, QubitId{1}), r);
    EXPECT_EQ(noisy.status, ResponseStatus::ConstraintViolation);
    EXPECT_NEAR(noisy.measured_f, 0.85, 1e-12);

    r.f_min = 0.8;
    r.s_max = 2;
    EXPECT_EQ(check_response(werner_pair(0.85, QubitId{0}, QubitId{1}), r).status, ResponseStatus::Ok);
    r.s_max = 0.1;
    EXPECT_EQ(check_response(werner_pair(0.85, QubitId{0}, QubitId{1}), r).status, ResponseStatus::ConstraintViolation);

    EXPECT_THROW(check_response(new_register(3), r), Error);
}

TEST(virtual_map, bind_resolve_release) {
    VirtualMap map("Node11");
    FullVirtualId a{"Node11", 1, 0};
    FullVirtualId b{"Node11", 1, 1};
    map.bind(a, {"Node11", 0});
    EXPECT_EQ(map.resolve(a).index, 0u);
    try {
        map.bind(a, {"Node11", 1});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::DoubleBind);
    }
    try {
        map.bind(b, {"Node11", 0});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::SlotBusy);
    }
    try {
        map.resolve(b);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownAddress);
    }
    EXPECT_THROW(map.bind(b, {"Node19", 0}), Error);
    map.rebind(a, {"Node11", 3});
    EXPECT_FALSE(map.slot_in_use({"Node11", 0}));
    EXPECT_EQ(map.release(a).index, 3u);
    EXPECT_EQ(map.size(), 0u);
    EXPECT_TRUE(map.consistent());
}

TEST(virtual_map, randomized_injectivity_and_no_leak) {
    std::mt19937_64 rng(2026);
    for (int round = 0; round < 20; round++) {
        VirtualMap map("N");
        std::map<FullVirtualId, QubitSlot> model;
        for (int step = 0; step < 400; step++) {
            FullVirtualId id{"R" + std::to_string(rng() % 3), rng() % 4, rng() % 8};
            QubitSlot slot{"N", static_cast<uint32_t>(rng() % 16)};
            bool slot_taken = false;
            for (const auto &[k, v] : model) {
                slot_taken = slot_taken || v == slot;
            }
            switch (rng() % 3) {
                case 0:
                    if (model.count(id) || slot_taken) {
                        EXPECT_THROW(map.bind(id, slot), Error);
                    } else {
                        map.bind(id, slot);
                        model[id] = slot;
                    }
                    break;
                case 1:
                    if (model.count(id) && !slot_taken) {
                        map.rebind(id, slot);
                        model[id] = slot;
                    }
                    break;
                default:
                    if (model.count(id)) {
                        EXPECT_EQ(map.release(id), model[id]);
                        model.erase(id);
                    } else {
                        EXPECT_THROW(map.release(id), Error);
                    }
            }
            ASSERT_TRUE(map.consistent());
            ASSERT_EQ(map.bindings(), model);
        }
        std::set<QubitSlot> slots;
        for (const auto &[k, v] : map.bindings()) {
            EXPECT_TRUE(slots.insert(v).second);
        }
        for (auto it = model.begin(); it != model.end(); it = model.erase(it)) {
            map.release(it->first);
        }
        EXPECT_EQ(map.size(), 0u);
    }
}
