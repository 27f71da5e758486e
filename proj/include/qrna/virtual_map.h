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


#ifndef QRNA_VIRTUAL_MAP_H
#define QRNA_VIRTUAL_MAP_H

#include <map>
#include <string>

#include "qrna/density.h"
#include "qrna/request.h"

namespace qrna {

/// Per-node binding of virtual qubit names to physical register slots. Injective in both
/// directions; only slots of the owner's register can be bound.
class VirtualMap {
   public:
    explicit VirtualMap(std::string owner) : owner_(std::move(owner)) {
    }

    const std::string &owner() const {
        return owner_;
    }

    /// Throws DoubleBind when id is already bound, SlotBusy when the slot is taken.
    void bind(const FullVirtualId &id, const QubitSlot &slot);
    /// Throws UnknownAddress when id is not bound.
    const QubitSlot &resolve(const FullVirtualId &id) const;
    /// Moves the logical qubit to another physical slot of this node.
    void rebind(const FullVirtualId &id, const QubitSlot &new_slot);
    /// Returns the freed slot.
    QubitSlot release(const FullVirtualId &id);

    bool is_bound(const FullVirtualId &id) const {
        return by_id_.count(id) != 0;
    }
    bool slot_in_use(const QubitSlot &slot) const {
        return by_slot_.count(slot) != 0;
    }
    size_t size() const {
        return by_id_.size();
    }
    const std::map<FullVirtualId, QubitSlot> &bindings() const {
        return by_id_;
    }
    /// True when the forward and reverse maps are exact inverses.
    bool consistent() const;

   private:
    void check_owned(const QubitSlot &slot) const;

    std::string owner_;
    std::map<FullVirtualId, QubitSlot> by_id_;
    std::map<QubitSlot, FullVirtualId> by_slot_;
};

}  // namespace qrna

#endif
