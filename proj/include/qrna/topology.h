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


#ifndef QRNA_TOPOLOGY_H
#define QRNA_TOPOLOGY_H

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qrna/error.h"

namespace qrna {

enum class ElementKind { Repeater, Host, Network };

struct Link {
    std::string a;
    std::string b;
    double cost = 1;
    /// Werner fidelity of freshly generated pairs.
    double f_link = 1;
    /// Success probability of one generation attempt.
    double p_gen = 1;
};

struct Element {
    std::string name;
    ElementKind kind = ElementKind::Repeater;
    /// Enclosing network; empty for top-level elements.
    std::string parent;
    std::vector<std::string> members;
    bool gateway = false;
};

using CostFn = std::function<double(const Link &)>;
double default_cost(const Link &link);

/// Hierarchy of networks and nodes. Networks nest; a network is seen from outside as a
/// single element whose links are the physical links crossing its boundary.
class Topology {
   public:
    /// Parses the line-oriented topology format. Throws ParseError naming the line.
    static Topology parse(std::string_view text);
    static Topology load(const std::string &path);

    void add_network(const std::string &name, const std::string &parent = "");
    void add_node(const std::string &name, const std::string &network, bool gateway = false,
                  ElementKind kind = ElementKind::Repeater);
    void add_link(Link link);

    bool has(std::string_view name) const;
    const Element &element(std::string_view name) const;
    bool is_network(std::string_view name) const;
    const std::string &parent(std::string_view name) const;
    size_t depth(std::string_view name) const;
    /// Children of `network` ("" for the top level), sorted by name.
    std::vector<std::string> children(std::string_view network) const;
    /// Physical (non-network) elements, sorted.
    std::vector<std::string> nodes() const;
    std::vector<std::string> gateways(std::string_view network) const;
    const std::vector<Link> &links() const {
        return links_;
    }
    const Link *find_link(std::string_view a, std::string_view b) const;
    /// True when `name` is `ancestor` or lies inside it. "" contains everything.
    bool contains(std::string_view ancestor, std::string_view name) const;
    /// Deepest network containing both elements ("" for the top level).
    std::string common_parent(std::string_view a, std::string_view b) const;
    /// The ancestor-or-self of `name` that is a direct child of `level`.
    std::string lift(std::string_view name, std::string_view level) const;
    bool empty() const {
        return elements_.empty();
    }

    /// Mutable access for overriding link parameters (e.g. uniform link fidelity).
    std::vector<Link> &mutable_links() {
        return links_;
    }

   private:
    std::map<std::string, Element, std::less<>> elements_;
    std::vector<Link> links_;
};

enum class RouteKind { Direct, Via, Local, ProcessLocally };

struct RouteEntry {
    RouteKind kind = RouteKind::Direct;
    std::string next_hop;
    bool operator==(const RouteEntry &) const = default;
};

struct RoutingTable {
    std::string owner;
    std::map<std::string, RouteEntry> entries;
};

/// Per-node routing tables over the hierarchy plus the path queries built on them.
/// Each node sees its siblings precisely and peer networks of each ancestor as single names.
class Routing {
   public:
    /// Throws Unreachable listing the disconnected pairs.
    static Routing build(const Topology &topology, CostFn cost = default_cost);

    const Topology &topology() const {
        return *topology_;
    }
    const std::map<std::string, RoutingTable> &tables() const {
        return tables_;
    }
    const RoutingTable &table(std::string_view owner) const;

    /// Name under which `viewer` knows `target`. Throws UnknownDestination.
    std::string resolve_destination(std::string_view viewer, std::string_view target) const;

    /// Minimal-cost chain of co-level elements, after lifting both ends to the children of
    /// their common parent. Ties go to the lexicographically smallest next element.
    std::vector<std::string> select_path(std::string_view src, std::string_view dst) const;
    double path_cost(std::string_view src, std::string_view dst) const;

    /// Visible element (from `viewer`) minimizing the summed path cost to the targets.
    std::string select_center(std::string_view viewer, const std::vector<std::string> &targets) const;

    /// Hop-by-hop chain of physical nodes from a to b, expanding each abstract element.
    std::vector<std::string> physical_route(std::string_view a, std::string_view b) const;

    /// Physical neighbor a request for `destination` is forwarded to from `at`, or `at`
    /// itself when the destination is processed here.
    std::string next_physical_hop(std::string_view at, std::string_view destination) const;

    /// Physical links traversed by `route`, in order.
    std::vector<const Link *> route_links(const std::vector<std::string> &route) const;

   private:
    std::vector<std::string> level_path(const std::string &level, const std::string &src,
                                        const std::string &dst) const;
    std::map<std::string, double> level_distances(const std::string &level, const std::string &dst) const;
    std::vector<std::pair<std::string, double>> level_neighbors(const std::string &level,
                                                                const std::string &element) const;
    const Link *crossing_link(const std::string &from, const std::string &to) const;
    RoutingTable build_table(const std::string &owner) const;
    std::vector<std::string> route_within(const std::string &x, const std::string &y) const;

    const Topology *topology_ = nullptr;
    CostFn cost_;
    std::map<std::string, RoutingTable> tables_;
};

/// Canonical text form of one table: header, then sibling entries, then network entries by
/// decreasing depth; names sorted within each group.
std::string format_table(const Routing &routing, const RoutingTable &table);
/// All tables of physical nodes, sorted by owner and separated by blank lines.
std::string format_tables(const Routing &routing);

/// Compares every table present in `golden` with `generated`. Returns an empty string on
/// match, otherwise a line diff.
std::string diff_tables(std::string_view generated, std::string_view golden);

/// Nested entanglement-swapping plan over a chain of nodes.
struct SwapTree {
    /// Index into the chain of the node performing the swap; -1 for a leaf (single link).
    int swap_at = -1;
    size_t left = 0;
    size_t right = 1;
    std::vector<SwapTree> children;
};
/// Splits at the middle repeater (left-biased), recursively.
SwapTree swap_order(size_t chain_length);
SwapTree swap_order(const std::vector<std::string> &chain);
/// Swap nodes in post-order (the order in which they can be executed).
std::vector<size_t> swap_sequence(const SwapTree &tree);

}  // namespace qrna

#endif
