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


#ifndef QRNA_LINK_LAYER_H
#define QRNA_LINK_LAYER_H

#include <optional>
#include <string>

#include "qrna/state_store.h"
#include "qrna/topology.h"

namespace qrna {

enum class GenerationMode { Deterministic, Stochastic };
std::string_view mode_name(GenerationMode mode);
std::optional<GenerationMode> parse_mode(std::string_view name);

/// Two halves of a (noisy) Bell pair held at distinct nodes.
struct EntangledPairHandle {
    NodeQubit a;
    NodeQubit b;
    /// How the pair came to be, e.g. "link(Node51-Node52)" or "swap@Node52(...)".
    std::string pedigree;
    /// Fidelity with |Phi+> computed from the global state when the handle was produced.
    double nominal_f = 0;
};

/// Elementary Werner(f_link) pair across `link`. In stochastic mode one attempt succeeds with
/// probability p_gen; nullopt signals GenerationFailed.
std::optional<EntangledPairHandle> generate_pair(StateStore &store, const Link &link, const NodeQubit &a,
                                                 const NodeQubit &b, GenerationMode mode);

struct PurifyResult {
    /// Empty when the parity check failed; both input pairs are consumed in that case.
    std::optional<EntangledPairHandle> pair;
    /// Probability of the success branch, evaluated on the pre-measurement state.
    double success_probability = 0;
};

/// One round of recurrence purification: bilateral CNOT from `keep` onto `sacrifice`, Z
/// measurement of the sacrifice pair at both ends, keep on matching outcomes.
PurifyResult purify(StateStore &store, const EntangledPairHandle &keep, const EntangledPairHandle &sacrifice);

/// Bell measurement at the node shared by `left` and `right`, Pauli correction at the far end
/// of `right`. Returns the pair spanning the two outer nodes.
EntangledPairHandle swap(StateStore &store, const EntangledPairHandle &left, const EntangledPairHandle &right);

/// Moves the state of `data` onto the far end of `channel`, consuming the channel. Returns the
/// far-end qubit, which now carries the logical state.
NodeQubit teleport(StateStore &store, const NodeQubit &data, const EntangledPairHandle &channel);

}  // namespace qrna

#endif
