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


#include "qrna/engine.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "qrna/error.h"
#include "qrna/wire.h"

namespace qrna {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string label_of(const std::string &issuer, uint64_t id) {
    return issuer + "#" + std::to_string(id);
}

bool is_bell(const StateRequest &r) {
    const auto *named = std::get_if<NamedSpec>(&r.spec.form);
    return named && named->kind == NamedState::BellPhiPlus && r.targets.size() == 2;
}

Response failed(uint64_t id, ErrorCode code) {
    Response r;
    r.id = id;
    r.status = ResponseStatus::Fail;
    r.measured_f = kNaN;
    r.measured_s = kNaN;
    r.error = code;
    return r;
}

struct ContextGuard {
    StateStore &store;
    std::string saved;
    ContextGuard(StateStore &store, std::string label) : store(store), saved(store.context()) {
        store.set_context(std::move(label));
    }
    ~ContextGuard() {
        store.set_context(saved);
    }
};

void for_each_address(Request &request, const std::function<void(QubitAddress &)> &fn) {
    std::visit(
        [&](auto &r) {
            for (auto &t : r.targets) {
                fn(t);
            }
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, StateRequest>) {
                if (auto *circuit = std::get_if<CircuitSpec>(&r.spec.form)) {
                    for (auto &op : circuit->ops) {
                        for (auto &t : op.targets) {
                            fn(t);
                        }
                    }
                }
            } else {
                for (auto &op : r.circuit) {
                    for (auto &t : op.targets) {
                        fn(t);
                    }
                }
            }
        },
        request);
}

size_t index_of(const std::vector<QubitAddress> &targets, const QubitAddress &a) {
    auto it = std::find(targets.begin(), targets.end(), a);
    if (it == targets.end()) {
        throw Error(ErrorCode::AddressError, "address " + to_string(a) + " is not among the request's targets");
    }
    return static_cast<size_t>(it - targets.begin());
}

}  // namespace

std::string_view strategy_name(StrategyKind kind) {
    return kind == StrategyKind::CreateAndTeleport ? "CREATE_AND_TELEPORT" : "TELEPORT_GATES";
}

std::string_view role_name(SubRole role) {
    switch (role) {
        case SubRole::Create:
            return "CREATE";
        case SubRole::Pair:
            return "PAIR";
        case SubRole::Teleport:
            return "TELEPORT";
    }
    return "?";
}

std::vector<std::pair<uint64_t, uint64_t>> SubRequestDag::edges() const {
    std::vector<std::pair<uint64_t, uint64_t>> out;
    for (const auto &node : nodes) {
        for (uint64_t p : node.after) {
            out.emplace_back(p, node.id);
        }
    }
    return out;
}

Engine::Engine(const Routing &routing, StateStore &store, Knobs knobs, GenerationMode mode)
    : routing_(routing), topology_(routing.topology()), store_(store), knobs_(knobs), mode_(mode) {
    if (knobs_.shuffle_seed) {
        shuffle_.emplace(*knobs_.shuffle_seed);
    }
}

void Engine::reserve_id(const std::string &requester, uint64_t id) {
    used_ids_.insert({requester, id});
}

uint64_t Engine::fresh_id(const std::string &requester) {
    uint64_t &next = next_id_[requester];
    do {
        next++;
    } while (used_ids_.count({requester, next}));
    used_ids_.insert({requester, next});
    return next;
}

uint64_t Engine::fresh_vaddr(const Provenance &provenance) {
    std::pair<std::string, uint64_t> key{provenance.requester, provenance.request_id};
    const auto &reserved = reserved_vaddrs_[key];
    uint64_t &next = next_vaddr_[key];
    do {
        next++;
    } while (reserved.count(next));
    return next;
}

std::string Engine::entry_node(const std::string &network) const {
    std::string current = network;
    while (topology_.is_network(current)) {
        auto gateways = topology_.gateways(current);
        std::string pick;
        for (const auto &g : gateways) {
            if (!topology_.is_network(g) || !topology_.children(g).empty()) {
                pick = g;
                break;
            }
        }
        if (pick.empty()) {
            for (const auto &node : topology_.nodes()) {
                if (topology_.contains(current, node)) {
                    pick = node;
                    break;
                }
            }
        }
        if (pick.empty()) {
            throw Error(ErrorCode::NoEligibleMember, "network " + network + " has no member node");
        }
        current = pick;
    }
    return current;
}

NodeQubit Engine::locate(const QubitAddress &address, const Provenance &provenance) const {
    if (!topology_.has(address.node)) {
        throw Error(ErrorCode::UnknownDestination, "unknown element '" + address.node + "'");
    }
    if (!topology_.is_network(address.node)) {
        return {address.node, provenance.at(address.vaddr)};
    }
    auto it = boundary_.find({address.node, provenance.at(address.vaddr)});
    if (it == boundary_.end()) {
        throw Error(ErrorCode::UnknownAddress, to_string(address) + " was never mapped to a node");
    }
    return {it->second, provenance.at(address.vaddr)};
}

Request Engine::map_boundary(const Request &request, const std::string &network, const std::string &at,
                             const Provenance &provenance) {
    Request out = request;
    if (!topology_.is_network(network)) {
        return out;
    }
    std::optional<std::string> choice;
    for_each_address(out, [&](QubitAddress &a) {
        if (a.node != network) {
            return;
        }
        std::pair<std::string, FullVirtualId> key{network, provenance.at(a.vaddr)};
        auto it = boundary_.find(key);
        if (it == boundary_.end()) {
            if (!choice) {
                bool inside = topology_.has(at) && !topology_.is_network(at) && topology_.contains(network, at);
                choice = inside ? at : entry_node(network);
            }
            it = boundary_.emplace(key, *choice).first;
        }
        a.node = it->second;
    });
    return out;
}

SubRequestDag Engine::decompose(const std::string &at, const Provenance &provenance, const StateRequest &request,
                                StrategyKind strategy) {
    if (strategy != StrategyKind::CreateAndTeleport) {
        throw Error(ErrorCode::UnsupportedStrategy, std::string(strategy_name(strategy)) + " is not executable");
    }
    std::vector<std::string> names;
    for (const auto &t : request.targets) {
        names.push_back(t.node);
    }
    SubRequestDag dag;
    dag.issuer = at;
    dag.center = routing_.select_center(at, names);

    std::map<QubitAddress, QubitAddress> moved;
    std::vector<QubitAddress> created;
    for (const auto &t : request.targets) {
        if (t.node == dag.center) {
            created.push_back(t);
        } else {
            QubitAddress c{dag.center, fresh_vaddr(provenance)};
            moved[t] = c;
            created.push_back(c);
        }
    }

    StateRequest create;
    create.id = fresh_id(at);
    create.spec = request.spec;
    if (auto *circuit = std::get_if<CircuitSpec>(&create.spec.form)) {
        for (auto &op : circuit->ops) {
            for (auto &t : op.targets) {
                auto it = moved.find(t);
                if (it != moved.end()) {
                    t = it->second;
                }
            }
        }
    }
    create.f_min = request.f_min;
    create.s_max = request.s_max;
    create.targets = created;
    create.encoding = request.encoding;
    dag.nodes.push_back({create.id, SubRole::Create, dag.center, create, {}});

    double pair_f_min = moved.empty() ? request.f_min : std::pow(request.f_min, 1.0 / moved.size());
    for (const auto &t : request.targets) {
        auto it = moved.find(t);
        if (it == moved.end()) {
            continue;
        }
        QubitAddress near{dag.center, fresh_vaddr(provenance)};
        StateRequest pair;
        pair.id = fresh_id(at);
        pair.spec = {NamedSpec::bell_phi_plus()};
        pair.f_min = pair_f_min;
        pair.s_max = request.s_max;
        pair.targets = {near, t};
        dag.nodes.push_back({pair.id, SubRole::Pair, dag.center, pair, {}});

        ActionRequest move;
        move.id = fresh_id(at);
        move.circuit = {CircuitOp::teleport(it->second, near, t)};
        move.f_min = 0;
        move.s_max = 3;
        move.targets = {it->second, near, t};
        dag.nodes.push_back({move.id, SubRole::Teleport, dag.center, move, {create.id, pair.id}});
    }
    return dag;
}

std::map<uint64_t, Delivery> Engine::execute_dag(const SubRequestDag &dag, const Provenance &provenance,
                                                 size_t depth) {
    std::map<uint64_t, size_t> position;
    for (size_t k = 0; k < dag.nodes.size(); k++) {
        position[dag.nodes[k].id] = k;
    }
    std::vector<size_t> pending(dag.nodes.size());
    std::vector<std::vector<size_t>> dependents(dag.nodes.size());
    for (size_t k = 0; k < dag.nodes.size(); k++) {
        for (uint64_t p : dag.nodes[k].after) {
            auto it = position.find(p);
            if (it == position.end()) {
                throw Error(ErrorCode::InvalidArgument, "sub-request depends on unknown id " + std::to_string(p));
            }
            pending[k]++;
            dependents[it->second].push_back(k);
        }
    }
    // Dry run first so a cycle is reported before anything executes.
    {
        auto left = pending;
        std::vector<size_t> stack;
        for (size_t k = 0; k < left.size(); k++) {
            if (left[k] == 0) {
                stack.push_back(k);
            }
        }
        size_t seen = 0;
        while (!stack.empty()) {
            size_t k = stack.back();
            stack.pop_back();
            seen++;
            for (size_t d : dependents[k]) {
                if (--left[d] == 0) {
                    stack.push_back(d);
                }
            }
        }
        if (seen != dag.nodes.size()) {
            throw Error(ErrorCode::CycleDetected, "sub-request dependencies contain a cycle");
        }
    }

    std::map<uint64_t, Delivery> results;
    std::set<size_t> ready;
    for (size_t k = 0; k < pending.size(); k++) {
        if (pending[k] == 0) {
            ready.insert(k);
        }
    }
    while (!ready.empty()) {
        auto pick = ready.begin();
        if (shuffle_) {
            std::advance(pick, static_cast<long>((*shuffle_)() % ready.size()));
        }
        size_t k = *pick;
        ready.erase(pick);
        const SubRequest &sub = dag.nodes[k];

        std::optional<ErrorCode> blocked;
        for (uint64_t p : sub.after) {
            const Response &prior = results.at(p).response;
            if (prior.status == ResponseStatus::Fail && !blocked) {
                blocked = prior.error.value_or(ErrorCode::InvalidArgument);
            }
        }
        if (blocked) {
            results[sub.id] = Delivery{failed(sub.id, *blocked), {}, false};
        } else {
            results[sub.id] = deliver(sub.request, provenance, dag.issuer, sub.executor, depth);
        }
        for (size_t d : dependents[k]) {
            if (--pending[d] == 0) {
                ready.insert(d);
            }
        }
    }
    return results;
}

Delivery Engine::deliver(const Request &request, const Provenance &provenance, const std::string &issuer,
                         const std::string &destination, size_t depth) {
    uint64_t id = request_id(request);
    ContextGuard guard(store_, label_of(issuer, id));
    Request current = request;
    std::string at = issuer;
    std::string dest = destination;
    Delivery result;
    try {
        if (!topology_.has(dest)) {
            throw Error(ErrorCode::UnknownDestination, "unknown destination '" + dest + "'");
        }
        auto settle = [&]() {
            if (topology_.is_network(dest) && topology_.contains(dest, at)) {
                std::string network = dest;
                Request mapped = map_boundary(current, network, at, provenance);
                const auto &before = request_targets(current);
                const auto &after = request_targets(mapped);
                dest = at;
                for (size_t k = 0; k < before.size(); k++) {
                    if (before[k].node == network) {
                        dest = after[k].node;
                        break;
                    }
                }
                current = std::move(mapped);
            }
            return at == dest;
        };
        bool arrived = settle();
        if (arrived) {
            store_.emit(at, TraceKind::ReqRecv, encode(current));
        }
        size_t hops = 0;
        while (!arrived) {
            std::string next = routing_.next_physical_hop(at, dest);
            store_.emit(at, TraceKind::Msg, "from=" + at + " to=" + next + " purpose=forward");
            at = next;
            if (++hops > topology_.nodes().size()) {
                throw Error(ErrorCode::Unreachable, "forwarding loop towards " + dest);
            }
            arrived = settle();
            store_.emit(at, TraceKind::ReqRecv, encode(current));
        }
        result = process(current, provenance, at, depth);
    } catch (const Error &e) {
        result = Delivery{failed(id, e.code()), {}, false};
    }
    emit_response(at, result);
    if (at != issuer) {
        store_.emit(at, TraceKind::Msg, "from=" + at + " to=" + issuer + " purpose=response");
    }
    return result;
}

Delivery Engine::process(const Request &request, const Provenance &provenance, const std::string &at,
                         size_t depth) {
    if (depth > knobs_.recursion_limit) {
        throw Error(ErrorCode::RecursionLimit, "request nesting exceeds " + std::to_string(knobs_.recursion_limit));
    }
    if (const auto *action = std::get_if<ActionRequest>(&request)) {
        return run_action(*action, provenance, at);
    }
    const auto &state = std::get<StateRequest>(request);
    auto here = [&](const QubitAddress &t) {
        if (t.node == at) {
            return true;
        }
        if (!topology_.is_network(t.node)) {
            return false;
        }
        auto it = boundary_.find({t.node, provenance.at(t.vaddr)});
        return it != boundary_.end() && it->second == at;
    };
    if (std::all_of(state.targets.begin(), state.targets.end(), here)) {
        return create_local(state, provenance, at);
    }
    if (is_bell(state) && (here(state.targets[0]) || here(state.targets[1]))) {
        return fulfill_pair(state, provenance);
    }
    return finish_decomposed(state, provenance, at, depth);
}

Delivery Engine::create_local(const StateRequest &request, const Provenance &provenance, const std::string &at) {
    const auto &limits = store_.config().limits;
    if (request.targets.size() > limits.max_qubits) {
        throw Error(ErrorCode::ResourceLimit, "state needs more qubits than the cap");
    }
    std::vector<NodeQubit> qs;
    for (const auto &t : request.targets) {
        qs.push_back({at, provenance.at(t.vaddr)});
    }
    for (const auto &q : qs) {
        store_.allocate(q);
    }
    if (const auto *circuit = std::get_if<CircuitSpec>(&request.spec.form)) {
        for (const auto &op : circuit->ops) {
            std::vector<NodeQubit> operands;
            for (const auto &t : op.targets) {
                operands.push_back(qs[index_of(request.targets, t)]);
            }
            store_.gate(op.gate, operands);
        }
    } else {
        const auto &named = std::get<NamedSpec>(request.spec.form);
        switch (named.kind) {
            case NamedState::BellPhiPlus:
            case NamedState::Ghz:
                store_.gate(GateKind::H, {qs[0]});
                for (size_t k = 1; k < qs.size(); k++) {
                    store_.gate(GateKind::CNOT, {qs[0], qs[k]});
                }
                break;
            case NamedState::Fanout:
                store_.rotate(qs[0], named.alpha, named.beta);
                for (size_t k = 1; k < qs.size(); k++) {
                    store_.gate(GateKind::CNOT, {qs[0], qs[k]});
                }
                break;
            case NamedState::LinearCluster:
                for (const auto &q : qs) {
                    store_.gate(GateKind::H, {q});
                }
                for (size_t k = 0; k + 1 < qs.size(); k++) {
                    store_.gate(GateKind::CZ, {qs[k], qs[k + 1]});
                }
                break;
        }
    }
    Delivery d;
    d.qubits = qs;
    d.response = check_response(store_.reduced_state(qs), request, limits);
    return d;
}

std::optional<EntangledPairHandle> Engine::link_pair(const Link &link, const NodeQubit &a, const NodeQubit &b,
                                                     double target, const Provenance &provenance, bool &infeasible) {
    size_t generated = 0;
    auto fresh = [&](const std::string &node) { return NodeQubit{node, provenance.at(fresh_vaddr(provenance))}; };
    auto drop = [&](const EntangledPairHandle &p) {
        store_.discard(p.a);
        store_.discard(p.b);
    };
    // Rx(pi/2) on one end and Rx(-pi/2) on the other: a U (x) U* rotation, so Werner pairs and
    // |Phi+> are unchanged, but phase errors left by one round become detectable in the next.
    auto rotate = [&](const EntangledPairHandle &p) {
        for (GateKind g : {GateKind::H, GateKind::S, GateKind::H}) {
            store_.gate(g, {p.a});
        }
        for (GateKind g : {GateKind::H, GateKind::Z, GateKind::S, GateKind::H}) {
            store_.gate(g, {p.b});
        }
    };
    auto refine = [&](const EntangledPairHandle &keep, const EntangledPairHandle &partner) {
        rotate(keep);
        rotate(partner);
        return purify(store_, keep, partner).pair;
    };
    // A level-r pair is one purification of two level-(r-1) pairs.
    std::function<std::optional<EntangledPairHandle>(size_t, const NodeQubit &, const NodeQubit &)> build =
        [&](size_t level, const NodeQubit &x, const NodeQubit &y) -> std::optional<EntangledPairHandle> {
        if (level == 0) {
            if (generated >= knobs_.pair_cap) {
                throw Error(ErrorCode::ResourceLimit,
                            "link " + link.a + "-" + link.b + " needs more than " + std::to_string(knobs_.pair_cap) +
                                " pairs");
            }
            generated++;
            return generate_pair(store_, link, x, y, mode_);
        }
        auto keep = build(level - 1, x, y);
        if (!keep) {
            return std::nullopt;
        }
        auto partner = build(level - 1, fresh(x.node), fresh(y.node));
        if (!partner) {
            drop(*keep);
            return std::nullopt;
        }
        return refine(*keep, *partner);
    };

    auto pair = build(0, a, b);
    for (size_t round = 0; pair && pair->nominal_f + 1e-12 < target && round < knobs_.purify_rounds; round++) {
        auto partner = build(round, fresh(a.node), fresh(b.node));
        if (!partner) {
            drop(*pair);
            return std::nullopt;
        }
        pair = refine(*pair, *partner);
    }
    if (pair && pair->nominal_f + 1e-12 < target) {
        infeasible = true;
    }
    return pair;
}

Delivery Engine::fulfill_pair(const StateRequest &request, const Provenance &provenance) {
    NodeQubit qa = locate(request.targets[0], provenance);
    NodeQubit qb = locate(request.targets[1], provenance);
    auto route = routing_.physical_route(qa.node, qb.node);
    size_t m = route.size() - 1;
    double target = std::pow(request.f_min, 1.0 / static_cast<double>(m));
    bool infeasible = false;
    size_t failures = 0;
    size_t purify_failures_before = store_.counts().purify_attempts - store_.counts().purify_successes;

    std::map<std::pair<size_t, size_t>, EntangledPairHandle> segments;
    for (size_t k = 0; k < m; k++) {
        const Link *link = topology_.find_link(route[k], route[k + 1]);
        if (!link) {
            throw Error(ErrorCode::Unreachable, "no link " + route[k] + "-" + route[k + 1]);
        }
        NodeQubit a = k == 0 ? qa : NodeQubit{route[k], provenance.at(fresh_vaddr(provenance))};
        NodeQubit b = k + 1 == m ? qb : NodeQubit{route[k + 1], provenance.at(fresh_vaddr(provenance))};
        while (true) {
            auto pair = link_pair(*link, a, b, target, provenance, infeasible);
            if (pair) {
                segments.emplace(std::make_pair(k, k + 1), *pair);
                break;
            }
            if (++failures > knobs_.retry_cap) {
                size_t purify_failures =
                    store_.counts().purify_attempts - store_.counts().purify_successes - purify_failures_before;
                throw Error(purify_failures ? ErrorCode::PurificationFailed : ErrorCode::GenerationFailed,
                            "link " + route[k] + "-" + route[k + 1] + " failed " + std::to_string(failures) +
                                " times");
            }
        }
    }
    for (size_t middle : swap_sequence(swap_order(route.size()))) {
        auto left = std::find_if(segments.begin(), segments.end(),
                                 [&](const auto &s) { return s.first.second == middle; });
        auto right = std::find_if(segments.begin(), segments.end(),
                                  [&](const auto &s) { return s.first.first == middle; });
        std::pair<size_t, size_t> span{left->first.first, right->first.second};
        EntangledPairHandle merged = swap(store_, left->second, right->second);
        segments.erase(left);
        segments.erase(right);
        segments.emplace(span, merged);
    }

    Delivery d;
    d.qubits = {qa, qb};
    d.budget_infeasible = infeasible;
    d.response = check_response(store_.reduced_state(d.qubits), request, store_.config().limits);
    if (infeasible && d.response.status == ResponseStatus::ConstraintViolation) {
        d.response.error = ErrorCode::BudgetInfeasible;
    }
    return d;
}

Delivery Engine::run_action(const ActionRequest &request, const Provenance &provenance, const std::string &at) {
    std::vector<NodeQubit> qs;
    for (const auto &t : request.targets) {
        NodeQubit q = locate(t, provenance);
        if (!store_.is_bound(q)) {
            if (q.node != at) {
                throw Error(ErrorCode::UnknownAddress, to_string(t) + " holds no qubit");
            }
            store_.allocate(q);
        }
        qs.push_back(q);
    }
    auto local = [&](const NodeQubit &q) {
        if (q.node != at) {
            throw Error(ErrorCode::LoccViolation, "action at " + at + " touches a qubit at " + q.node);
        }
        return q;
    };
    for (const auto &op : request.circuit) {
        std::vector<NodeQubit> operands;
        for (const auto &t : op.targets) {
            operands.push_back(qs[index_of(request.targets, t)]);
        }
        switch (op.kind) {
            case OpKind::Gate:
                for (const auto &q : operands) {
                    local(q);
                }
                store_.gate(op.gate, operands);
                break;
            case OpKind::Measure:
                store_.measure(local(operands[0]));
                break;
            case OpKind::Teleport:
                teleport(store_, local(operands[0]),
                         EntangledPairHandle{local(operands[1]), operands[2], "action", kNaN});
                break;
        }
    }
    Delivery d;
    for (const auto &q : qs) {
        if (store_.is_bound(q)) {
            d.qubits.push_back(q);
        }
    }
    d.response.id = request.id;
    d.response.measured_f = kNaN;
    d.response.measured_s = d.qubits.empty() ? 0 : entropy(store_.reduced_state(d.qubits));
    d.response.status =
        d.response.measured_s <= request.s_max ? ResponseStatus::Ok : ResponseStatus::ConstraintViolation;
    return d;
}

Delivery Engine::finish_decomposed(const StateRequest &request, const Provenance &provenance, const std::string &at,
                                   size_t depth) {
    SubRequestDag dag = decompose(at, provenance, request);
    std::string subs;
    for (const auto &node : dag.nodes) {
        subs += (subs.empty() ? "" : ",") + std::to_string(node.id) + ":" + std::string(role_name(node.role)) + "@" +
                node.executor;
    }
    std::string deps;
    for (const auto &[from, to] : dag.edges()) {
        deps += (deps.empty() ? "" : ",") + std::to_string(from) + ">" + std::to_string(to);
    }
    store_.emit(at, TraceKind::Decompose,
                "strategy=" + std::string(strategy_name(StrategyKind::CreateAndTeleport)) + " center=" + dag.center +
                    " count=" + std::to_string(dag.nodes.size()) + " subs=" + subs + " deps=" + deps);

    auto results = execute_dag(dag, provenance, depth + 1);
    Delivery d;
    for (const auto &node : dag.nodes) {
        const Delivery &sub = results.at(node.id);
        if (sub.response.status == ResponseStatus::Fail) {
            throw Error(sub.response.error.value_or(ErrorCode::InvalidArgument),
                        "sub-request " + label_of(dag.issuer, node.id) + " failed");
        }
        d.budget_infeasible = d.budget_infeasible || sub.budget_infeasible;
    }
    for (const auto &t : request.targets) {
        d.qubits.push_back(locate(t, provenance));
    }
    d.response = check_response(store_.reduced_state(d.qubits), request, store_.config().limits);
    if (d.budget_infeasible && d.response.status == ResponseStatus::ConstraintViolation) {
        d.response.error = ErrorCode::BudgetInfeasible;
    }
    return d;
}

void Engine::emit_response(const std::string &at, const Delivery &delivery) {
    std::string detail = encode(delivery.response);
    if (!delivery.qubits.empty()) {
        detail += " qubits=";
        for (size_t k = 0; k < delivery.qubits.size(); k++) {
            detail += (k ? "," : "") + to_string(store_.qubit_of(delivery.qubits[k]));
        }
    }
    store_.emit(at, TraceKind::Rsp, detail);
}

void Engine::release(const Provenance &provenance) {
    std::vector<NodeQubit> held;
    for (const auto &[node, map] : store_.virtual_maps()) {
        for (const auto &[id, slot] : map.bindings()) {
            if (id.requester == provenance.requester && id.request_id == provenance.request_id) {
                held.push_back({node, id});
            }
        }
    }
    for (const auto &q : held) {
        store_.discard(q);
    }
}

Outcome Engine::submit(const std::string &origin, const Request &request) {
    uint64_t id = request_id(request);
    Provenance provenance{origin, id};
    ContextGuard guard(store_, label_of(origin, id));
    used_ids_.insert({origin, id});
    auto &reserved = reserved_vaddrs_[{origin, id}];
    for (const auto &t : request_targets(request)) {
        reserved.insert(t.vaddr);
    }

    Outcome out;
    out.origin = origin;
    ResourceCounts before = store_.counts();
    store_.emit(origin, TraceKind::ReqRecv, encode(request));
    Delivery d;
    try {
        auto violations = validate(request);
        if (!violations.empty()) {
            throw Error(violations.front().code, violations.front().message);
        }
        if (!topology_.has(origin) || topology_.is_network(origin)) {
            throw Error(ErrorCode::Unreachable, "origin '" + origin + "' is not a node");
        }
        for (const auto &t : request_targets(request)) {
            if (!topology_.has(t.node)) {
                throw Error(ErrorCode::Unreachable, "no element named '" + t.node + "'");
            }
        }
        if (const auto *state = std::get_if<StateRequest>(&request)) {
            if (spec_qubit_count(state->spec, state->targets.size()) > store_.config().limits.max_qubits) {
                throw Error(ErrorCode::ResourceLimit, "requested state exceeds the qubit cap");
            }
        }
        d = process(request, provenance, origin, 0);
    } catch (const Error &e) {
        d = Delivery{failed(id, e.code()), {}, false};
    } catch (const std::exception &e) {
        d = Delivery{failed(id, ErrorCode::InvalidArgument), {}, false};
    }
    emit_response(origin, d);

    for (const auto &[node, map] : store_.virtual_maps()) {
        for (const auto &[vid, slot] : map.bindings()) {
            if (vid.requester == origin && vid.request_id == id && d.response.status != ResponseStatus::Fail &&
                std::find(d.qubits.begin(), d.qubits.end(), NodeQubit{node, vid}) == d.qubits.end()) {
                out.leaked++;
            }
        }
    }
    release(provenance);
    out.counts = store_.counts() - before;
    out.response = d.response;
    out.qubits = d.qubits;
    out.budget_infeasible = d.budget_infeasible;
    return out;
}

}  // namespace qrna
