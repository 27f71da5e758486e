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

#include "qrna/wire.h"

namespace qrna {

namespace {

void send_bits(StateStore &store, const std::string &from, const std::string &to, const std::string &purpose,
               std::initializer_list<int> bits) {
    std::string detail = "from=" + from + " to=" + to + " purpose=" + purpose + " bits=";
    bool first = true;
    for (int b : bits) {
        detail += (first ? "" : ",") + std::to_string(b);
        first = false;
    }
    store.emit(from, TraceKind::Msg, detail);
}

/// Bell measurement of (data, near) and corrections on far. Returns (m_data, m_near).
std::pair<int, int> bell_measure_and_correct(StateStore &store, const NodeQubit &data, const NodeQubit &near,
                                             const NodeQubit &far, const std::string &purpose) {
    store.gate(GateKind::CNOT, {data, near});
    store.gate(GateKind::H, {data});
    int m_data = store.measure(data);
    int m_near = store.measure(near);
    store.discard(data);
    store.discard(near);
    send_bits(store, near.node, far.node, purpose, {m_data, m_near});
    if (m_near) {
        store.gate(GateKind::X, {far});
    }
    if (m_data) {
        store.gate(GateKind::Z, {far});
    }
    return {m_data, m_near};
}

}  // namespace

std::string_view mode_name(GenerationMode mode) {
    return mode == GenerationMode::Deterministic ? "deterministic" : "stochastic";
}

std::optional<GenerationMode> parse_mode(std::string_view name) {
    if (name == "deterministic") {
        return GenerationMode::Deterministic;
    }
    if (name == "stochastic") {
        return GenerationMode::Stochastic;
    }
    return std::nullopt;
}

std::optional<EntangledPairHandle> generate_pair(StateStore &store, const Link &link, const NodeQubit &a,
                                                 const NodeQubit &b, GenerationMode mode) {
    bool forward = a.node == link.a && b.node == link.b;
    bool backward = a.node == link.b && b.node == link.a;
    if (!forward && !backward) {
        throw Error(ErrorCode::MismatchedEndpoints, "pair ends " + a.node + "," + b.node + " are not the link's ends");
    }
    std::string pedigree = "link(" + a.node + "-" + b.node + ")";
    if (mode == GenerationMode::Stochastic && !(uniform_unit(store.rng()) < link.p_gen)) {
        store.counts().generation_failures++;
        store.emit(a.node, TraceKind::PairGen, "peer=" + b.node + " result=failed");
        return std::nullopt;
    }
    store.allocate(a);
    store.allocate(b);
    store.gate(GateKind::H, {a});
    store.link_gate(GateKind::CNOT, a, b);
    if (link.f_link < 1) {
        store.noise(NoiseChannel::werner_source(link.f_link), {a, b});
    }
    store.counts().pairs_generated++;
    double f = store.bell_fidelity(a, b);
    store.emit(a.node, TraceKind::PairGen,
               "peer=" + b.node + " result=ok a=" + to_string(a.id) + " b=" + to_string(b.id) + " f=" + format_real(f));
    return EntangledPairHandle{a, b, pedigree, f};
}

PurifyResult purify(StateStore &store, const EntangledPairHandle &keep, const EntangledPairHandle &sacrifice_in) {
    EntangledPairHandle sacrifice = sacrifice_in;
    if (sacrifice.a.node == keep.b.node && sacrifice.b.node == keep.a.node) {
        std::swap(sacrifice.a, sacrifice.b);
    }
    if (sacrifice.a.node != keep.a.node || sacrifice.b.node != keep.b.node || keep.a.node == keep.b.node) {
        throw Error(ErrorCode::MismatchedEndpoints, "purification needs two pairs over the same node pair");
    }
    store.counts().purify_attempts++;
    store.gate(GateKind::CNOT, {keep.a, sacrifice.a});
    store.gate(GateKind::CNOT, {keep.b, sacrifice.b});

    PurifyResult result;
    {
        DensityMatrix parity = store.reduced_state({sacrifice.a, sacrifice.b});
        result.success_probability = parity.entries()(0, 0).real() + parity.entries()(3, 3).real();
    }
    int m_a = store.measure(sacrifice.a);
    int m_b = store.measure(sacrifice.b);
    store.discard(sacrifice.a);
    store.discard(sacrifice.b);
    send_bits(store, keep.a.node, keep.b.node, "purify", {m_a});
    send_bits(store, keep.b.node, keep.a.node, "purify", {m_b});

    if (m_a != m_b) {
        store.discard(keep.a);
        store.discard(keep.b);
        store.emit(keep.a.node, TraceKind::Purify,
                   "peer=" + keep.b.node + " result=failed p_success=" + format_real(result.success_probability));
        return result;
    }
    store.counts().purify_successes++;
    double f = store.bell_fidelity(keep.a, keep.b);
    store.emit(keep.a.node, TraceKind::Purify,
               "peer=" + keep.b.node + " result=ok p_success=" + format_real(result.success_probability) +
                   " f=" + format_real(f));
    result.pair = EntangledPairHandle{keep.a, keep.b, "purify(" + keep.pedigree + "," + sacrifice.pedigree + ")", f};
    return result;
}

EntangledPairHandle swap(StateStore &store, const EntangledPairHandle &left_in, const EntangledPairHandle &right_in) {
    EntangledPairHandle left = left_in;
    EntangledPairHandle right = right_in;
    // Orient as left = A-B, right = B-C.
    if (left.a.node == right.a.node || left.a.node == right.b.node) {
        std::swap(left.a, left.b);
    }
    if (right.b.node == left.b.node) {
        std::swap(right.a, right.b);
    }
    if (left.b.node != right.a.node) {
        throw Error(ErrorCode::NoCommonNode, "pairs " + left.a.node + "-" + left.b.node + " and " + right.a.node +
                                                 "-" + right.b.node + " share no node");
    }
    if (left.a.node == right.b.node || left.a.node == left.b.node || right.a.node == right.b.node) {
        throw Error(ErrorCode::MismatchedEndpoints, "swap would not produce a pair across distinct nodes");
    }
    const std::string &middle = left.b.node;
    auto [m1, m2] = bell_measure_and_correct(store, left.b, right.a, right.b, "swap");
    store.counts().swaps++;
    double f = store.bell_fidelity(left.a, right.b);
    store.emit(middle, TraceKind::Swap,
               "left=" + left.a.node + " right=" + right.b.node + " bits=" + std::to_string(m1) + "," +
                   std::to_string(m2) + " f=" + format_real(f));
    return EntangledPairHandle{left.a, right.b, "swap@" + middle + "(" + left.pedigree + "," + right.pedigree + ")", f};
}

NodeQubit teleport(StateStore &store, const NodeQubit &data, const EntangledPairHandle &channel) {
    NodeQubit near = channel.a;
    NodeQubit far = channel.b;
    if (far.node == data.node) {
        std::swap(near, far);
    }
    if (near.node != data.node || far.node == data.node) {
        throw Error(ErrorCode::MismatchedEndpoints, "teleport channel does not start at " + data.node);
    }
    auto [m1, m2] = bell_measure_and_correct(store, data, near, far, "teleport");
    store.counts().teleports++;
    store.emit(data.node, TraceKind::Teleport,
               "data=" + to_string(data.id) + " to=" + far.node + " as=" + to_string(far.id) +
                   " bits=" + std::to_string(m1) + "," + std::to_string(m2));
    return far;
}

}  // namespace qrna
