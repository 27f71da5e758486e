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


#ifndef QRNA_ENGINE_H
#define QRNA_ENGINE_H

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qrna/link_layer.h"
#include "qrna/request.h"
#include "qrna/state_store.h"
#include "qrna/topology.h"

namespace qrna {

enum class StrategyKind { CreateAndTeleport, TeleportGates };
std::string_view strategy_name(StrategyKind kind);

struct Knobs {
    double p_gate = 0;
    size_t purify_rounds = 3;
    size_t retry_cap = 4;
    size_t pair_cap = 8;
    size_t recursion_limit = 16;
    /// When set, ready sub-requests run in a seeded random order instead of by id.
    std::optional<uint64_t> shuffle_seed;
};

/// (requester, request id) of the application request a qubit belongs to.
struct Provenance {
    std::string requester;
    uint64_t request_id = 0;
    FullVirtualId at(uint64_t vaddr) const {
        return {requester, request_id, vaddr};
    }
};

enum class SubRole { Create, Pair, Teleport };
std::string_view role_name(SubRole role);

struct SubRequest {
    uint64_t id = 0;
    SubRole role = SubRole::Create;
    std::string executor;
    Request request;
    std::vector<uint64_t> after;
};

struct SubRequestDag {
    std::string issuer;
    std::string center;
    std::vector<SubRequest> nodes;

    /// (prerequisite, dependent) pairs.
    std::vector<std::pair<uint64_t, uint64_t>> edges() const;
};

/// What a request handler hands back: the checked response and the qubits it left behind.
struct Delivery {
    Response response;
    std::vector<NodeQubit> qubits;
    bool budget_infeasible = false;
};

struct Outcome {
    std::string origin;
    Response response;
    std::vector<NodeQubit> qubits;
    ResourceCounts counts;
    /// Bindings of this request still alive besides the delivered qubits.
    size_t leaked = 0;
    bool budget_infeasible = false;
};

class Engine {
   public:
    Engine(const Routing &routing, StateStore &store, Knobs knobs, GenerationMode mode);

    /// Marks an id as taken by an application so sub-requests never reuse it.
    void reserve_id(const std::string &requester, uint64_t id);

    /// Runs an application request issued at `origin`, then releases every qubit it holds.
    Outcome submit(const std::string &origin, const Request &request);

    SubRequestDag decompose(const std::string &at, const Provenance &provenance, const StateRequest &request,
                            StrategyKind strategy = StrategyKind::CreateAndTeleport);

    Request map_boundary(const Request &request, const std::string &network, const std::string &at,
                         const Provenance &provenance);

    std::map<uint64_t, Delivery> execute_dag(const SubRequestDag &dag, const Provenance &provenance, size_t depth);

    Delivery deliver(const Request &request, const Provenance &provenance, const std::string &issuer,
                     const std::string &destination, size_t depth);

    const Knobs &knobs() const {
        return knobs_;
    }

   private:
    Delivery process(const Request &request, const Provenance &provenance, const std::string &at, size_t depth);
    Delivery create_local(const StateRequest &request, const Provenance &provenance, const std::string &at);
    Delivery fulfill_pair(const StateRequest &request, const Provenance &provenance);
    Delivery run_action(const ActionRequest &request, const Provenance &provenance, const std::string &at);
    Delivery finish_decomposed(const StateRequest &request, const Provenance &provenance, const std::string &at,
                               size_t depth);

    std::optional<EntangledPairHandle> link_pair(const Link &link, const NodeQubit &a, const NodeQubit &b,
                                                 double target, const Provenance &provenance, bool &infeasible);

    NodeQubit locate(const QubitAddress &address, const Provenance &provenance) const;
    std::string entry_node(const std::string &network) const;
    uint64_t fresh_vaddr(const Provenance &provenance);
    uint64_t fresh_id(const std::string &requester);
    void emit_response(const std::string &at, const Delivery &delivery);
    void release(const Provenance &provenance);

    const Routing &routing_;
    const Topology &topology_;
    StateStore &store_;
    Knobs knobs_;
    GenerationMode mode_;
    std::optional<std::mt19937_64> shuffle_;

    std::set<std::pair<std::string, uint64_t>> used_ids_;
    std::map<std::string, uint64_t> next_id_;
    std::map<std::pair<std::string, uint64_t>, std::set<uint64_t>> reserved_vaddrs_;
    std::map<std::pair<std::string, uint64_t>, uint64_t> next_vaddr_;
    std::map<std::pair<std::string, FullVirtualId>, std::string> boundary_;
};

}  // namespace qrna

#endif
