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


#include "qrna/virtual_map.h"

namespace qrna {

void VirtualMap::check_owned(const QubitSlot &slot) const {
    if (slot.register_id != owner_) {
        throw Error(ErrorCode::AddressError, "slot " + to_string(slot) + " does not belong to " + owner_);
    }
}

void VirtualMap::bind(const FullVirtualId &id, const QubitSlot &slot) {
    check_owned(slot);
    if (is_bound(id)) {
        throw Error(ErrorCode::DoubleBind, to_string(id) + " is already bound at " + owner_);
    }
    if (slot_in_use(slot)) {
        throw Error(ErrorCode::SlotBusy, "slot " + to_string(slot) + " is in use");
    }
    by_id_.emplace(id, slot);
    by_slot_.emplace(slot, id);
}

const QubitSlot &VirtualMap::resolve(const FullVirtualId &id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) {
        throw Error(ErrorCode::UnknownAddress, to_string(id) + " is not bound at " + owner_);
    }
    return it->second;
}

void VirtualMap::rebind(const FullVirtualId &id, const QubitSlot &new_slot) {
    check_owned(new_slot);
    QubitSlot old = resolve(id);
    if (old == new_slot) {
        return;
    }
    if (slot_in_use(new_slot)) {
        throw Error(ErrorCode::SlotBusy, "slot " + to_string(new_slot) + " is in use");
    }
    by_slot_.erase(old);
    by_slot_.emplace(new_slot, id);
    by_id_[id] = new_slot;
}

QubitSlot VirtualMap::release(const FullVirtualId &id) {
    QubitSlot slot = resolve(id);
    by_slot_.erase(slot);
    by_id_.erase(id);
    return slot;
}

bool VirtualMap::consistent() const {
    if (by_id_.size() != by_slot_.size()) {
        return false;
    }
    for (const auto &[id, slot] : by_id_) {
        auto it = by_slot_.find(slot);
        if (it == by_slot_.end() || it->second != id || slot.register_id != owner_) {
            return false;
        }
    }
    return true;
}

}  // namespace qrna
