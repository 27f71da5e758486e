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


#include "qrna/topology.h"

#include <algorithm>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include "qrna/request.h"
#include "qrna/wire.h"

namespace qrna {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTie = 1e-9;

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    size_t k = 0;
    while (k < line.size()) {
        while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) {
            k++;
        }
        size_t start = k;
        while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) {
            k++;
        }
        if (k > start) {
            words.push_back(line.substr(start, k - start));
        }
    }
    return words;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current += c;
        }
    }
    if (!current.empty()) {
        lines.push_back(current);
    }
    return lines;
}

}  // namespace

double default_cost(const Link &link) {
    return link.cost;
}

Topology Topology::parse(std::string_view text) {
    Topology topology;
    size_t line_number = 0;
    size_t line_start = 0;
    while (line_start <= text.size()) {
        size_t line_end = text.find('\n', line_start);
        if (line_end == std::string_view::npos) {
            line_end = text.size();
        }
        line_number++;
        std::string_view line = text.substr(line_start, line_end - line_start);
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        auto words = split_words(line);
        auto fail = [&](const std::string &message) -> void {
            throw ParseError(message, line_start, line_number);
        };
        try {
            if (words.empty()) {
                // blank or comment
            } else if (words[0] == "net") {
                if (words.size() == 2) {
                    topology.add_network(std::string(words[1]));
                } else if (words.size() == 4 && words[2] == "in") {
                    topology.add_network(std::string(words[1]), std::string(words[3]));
                } else {
                    fail("expected 'net <name> [in <parent>]'");
                }
            } else if (words[0] == "node") {
                if (words.size() < 4 || words[2] != "in") {
                    fail("expected 'node <name> in <net> [gateway] [host]'");
                }
                bool gateway = false;
                ElementKind kind = ElementKind::Repeater;
                for (size_t k = 4; k < words.size(); k++) {
                    if (words[k] == "gateway") {
                        gateway = true;
                    } else if (words[k] == "host") {
                        kind = ElementKind::Host;
                    } else if (words[k] == "repeater") {
                        kind = ElementKind::Repeater;
                    } else {
                        fail("unknown node attribute '" + std::string(words[k]) + "'");
                    }
                }
                topology.add_node(std::string(words[1]), std::string(words[3]), gateway, kind);
            } else if (words[0] == "link") {
                if (words.size() < 3) {
                    fail("expected 'link <a> <b> [cost=<dec>] [flink=<dec>] [pgen=<dec>]'");
                }
                Link link{std::string(words[1]), std::string(words[2])};
                for (size_t k = 3; k < words.size(); k++) {
                    auto eq = words[k].find('=');
                    if (eq == std::string_view::npos) {
                        fail("expected key=value, got '" + std::string(words[k]) + "'");
                    }
                    auto key = words[k].substr(0, eq);
                    double value = parse_real(words[k].substr(eq + 1), line_start);
                    if (key == "cost") {
                        link.cost = value;
                    } else if (key == "flink") {
                        link.f_link = value;
                    } else if (key == "pgen") {
                        link.p_gen = value;
                    } else {
                        fail("unknown link parameter '" + std::string(key) + "'");
                    }
                }
                topology.add_link(std::move(link));
            } else {
                fail("unknown directive '" + std::string(words[0]) + "'");
            }
        } catch (const ParseError &) {
            throw;
        } catch (const Error &e) {
            throw ParseError(e.what(), line_start, line_number);
        }
        line_start = line_end + 1;
    }
    return topology;
}

Topology Topology::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::InvalidArgument, "cannot open topology file " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse(buffer.str());
    } catch (const ParseError &e) {
        throw ParseError(path + ": " + e.what(), e.offset(), e.line());
    }
}

void Topology::add_network(const std::string &name, const std::string &parent) {
    if (!is_valid_name(name)) {
        throw Error(ErrorCode::InvalidArgument, "invalid name '" + name + "'");
    }
    if (has(name)) {
        throw Error(ErrorCode::InvalidArgument, "duplicate element '" + name + "'");
    }
    if (!parent.empty() && !is_network(parent)) {
        throw Error(ErrorCode::InvalidArgument, "unknown parent network '" + parent + "'");
    }
    elements_[name] = Element{name, ElementKind::Network, parent, {}, false};
    if (!parent.empty()) {
        elements_.find(parent)->second.members.push_back(name);
    }
}

void Topology::add_node(const std::string &name, const std::string &network, bool gateway, ElementKind kind) {
    if (!is_valid_name(name)) {
        throw Error(ErrorCode::InvalidArgument, "invalid name '" + name + "'");
    }
    if (has(name)) {
        throw Error(ErrorCode::InvalidArgument, "duplicate element '" + name + "'");
    }
    if (!is_network(network)) {
        throw Error(ErrorCode::InvalidArgument, "unknown network '" + network + "'");
    }
    if (kind == ElementKind::Network) {
        throw Error(ErrorCode::InvalidArgument, "use add_network for networks");
    }
    elements_[name] = Element{name, kind, network, {}, gateway};
    elements_.find(network)->second.members.push_back(name);
}

void Topology::add_link(Link link) {
    for (const auto *end : {&link.a, &link.b}) {
        if (!has(*end)) {
            throw Error(ErrorCode::InvalidArgument, "unknown link endpoint '" + *end + "'");
        }
        if (is_network(*end)) {
            throw Error(ErrorCode::InvalidArgument, "links join nodes, not networks ('" + *end + "')");
        }
    }
    if (link.a == link.b) {
        throw Error(ErrorCode::InvalidArgument, "link endpoints must differ");
    }
    if (depth(link.a) != depth(link.b)) {
        throw Error(ErrorCode::InvalidArgument, "link endpoints must sit at the same hierarchy level");
    }
    if (find_link(link.a, link.b)) {
        throw Error(ErrorCode::InvalidArgument, "duplicate link " + link.a + "-" + link.b);
    }
    if (!(link.cost > 0) || !(link.f_link > 0.25 && link.f_link <= 1) || !(link.p_gen >= 0 && link.p_gen <= 1)) {
        throw Error(ErrorCode::InvalidArgument, "link parameters out of range");
    }
    links_.push_back(std::move(link));
}

bool Topology::has(std::string_view name) const {
    return elements_.find(name) != elements_.end();
}

const Element &Topology::element(std::string_view name) const {
    auto it = elements_.find(name);
    if (it == elements_.end()) {
        throw Error(ErrorCode::UnknownDestination, "unknown element '" + std::string(name) + "'");
    }
    return it->second;
}

bool Topology::is_network(std::string_view name) const {
    auto it = elements_.find(name);
    return it != elements_.end() && it->second.kind == ElementKind::Network;
}

const std::string &Topology::parent(std::string_view name) const {
    return element(name).parent;
}

size_t Topology::depth(std::string_view name) const {
    size_t d = 0;
    for (std::string p = parent(name); !p.empty(); p = parent(p)) {
        d++;
    }
    return d;
}

std::vector<std::string> Topology::children(std::string_view network) const {
    std::vector<std::string> out;
    for (const auto &[name, e] : elements_) {
        if (e.parent == network) {
            out.push_back(name);
        }
    }
    return out;
}

std::vector<std::string> Topology::nodes() const {
    std::vector<std::string> out;
    for (const auto &[name, e] : elements_) {
        if (e.kind != ElementKind::Network) {
            out.push_back(name);
        }
    }
    return out;
}

std::vector<std::string> Topology::gateways(std::string_view network) const {
    std::vector<std::string> out;
    for (const auto &member : element(network).members) {
        if (element(member).gateway) {
            out.push_back(member);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

const Link *Topology::find_link(std::string_view a, std::string_view b) const {
    for (const auto &link : links_) {
        if ((link.a == a && link.b == b) || (link.a == b && link.b == a)) {
            return &link;
        }
    }
    return nullptr;
}

bool Topology::contains(std::string_view ancestor, std::string_view name) const {
    if (ancestor.empty()) {
        return true;
    }
    for (std::string current(name); !current.empty(); current = parent(current)) {
        if (current == ancestor) {
            return true;
        }
    }
    return false;
}

std::string Topology::common_parent(std::string_view a, std::string_view b) const {
    for (std::string p = parent(a); !p.empty(); p = parent(p)) {
        if (contains(p, b)) {
            return p;
        }
    }
    return "";
}

std::string Topology::lift(std::string_view name, std::string_view level) const {
    std::string current(name);
    while (parent(current) != level) {
        if (parent(current).empty()) {
            throw Error(ErrorCode::AddressError, std::string(name) + " is not inside '" + std::string(level) + "'");
        }
        current = parent(current);
    }
    return current;
}

// ---------------------------------------------------------------------------------------
// Routing

std::vector<std::pair<std::string, double>> Routing::level_neighbors(const std::string &level,
                                                                     const std::string &element) const {
    const Topology &topo = *topology_;
    std::map<std::string, double> best;
    for (const auto &link : topo.links()) {
        for (auto [from, to] : {std::pair{&link.a, &link.b}, std::pair{&link.b, &link.a}}) {
            if (!topo.contains(element, *from) || !topo.contains(level, *to) || topo.contains(element, *to)) {
                continue;
            }
            std::string other = topo.lift(*to, level);
            double c = cost_(link);
            auto it = best.find(other);
            if (it == best.end() || c < it->second) {
                best[other] = c;
            }
        }
    }
    return {best.begin(), best.end()};
}

std::map<std::string, double> Routing::level_distances(const std::string &level, const std::string &dst) const {
    std::map<std::string, double> dist;
    using Item = std::pair<double, std::string>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[dst] = 0;
    queue.push({0, dst});
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u]) {
            continue;
        }
        // Links are undirected, so distances to dst equal distances from dst.
        for (const auto &[v, c] : level_neighbors(level, u)) {
            auto it = dist.find(v);
            if (it == dist.end() || d + c < it->second - kTie) {
                dist[v] = d + c;
                queue.push({d + c, v});
            }
        }
    }
    return dist;
}

std::vector<std::string> Routing::level_path(const std::string &level, const std::string &src,
                                             const std::string &dst) const {
    auto dist = level_distances(level, dst);
    if (!dist.count(src)) {
        throw Error(ErrorCode::Unreachable, "no path from " + src + " to " + dst);
    }
    std::vector<std::string> path{src};
    std::string current = src;
    while (current != dst) {
        std::string next;
        for (const auto &[v, c] : level_neighbors(level, current)) {
            auto it = dist.find(v);
            if (it != dist.end() && std::abs(c + it->second - dist[current]) <= kTie) {
                next = v;  // neighbors arrive sorted, so the first match is the smallest name
                break;
            }
        }
        path.push_back(next);
        current = next;
    }
    return path;
}

const Link *Routing::crossing_link(const std::string &from, const std::string &to) const {
    const Topology &topo = *topology_;
    const Link *best = nullptr;
    std::pair<std::string, std::string> best_key;
    for (const auto &link : topo.links()) {
        for (auto [x, y] : {std::pair{&link.a, &link.b}, std::pair{&link.b, &link.a}}) {
            if (topo.contains(from, *x) && topo.contains(to, *y)) {
                std::pair<std::string, std::string> key{*x, *y};
                if (!best || cost_(link) < cost_(*best) - kTie ||
                    (std::abs(cost_(link) - cost_(*best)) <= kTie && key < best_key)) {
                    best = &link;
                    best_key = key;
                }
            }
        }
    }
    return best;
}

RoutingTable Routing::build_table(const std::string &owner) const {
    const Topology &topo = *topology_;
    RoutingTable table;
    table.owner = owner;
    const std::string &home = topo.parent(owner);

    for (const auto &sibling : topo.children(home)) {
        if (sibling == owner) {
            continue;
        }
        auto path = level_path(home, owner, sibling);
        if (path.size() == 2) {
            table.entries[sibling] = {RouteKind::Direct, ""};
        } else {
            table.entries[sibling] = {RouteKind::Via, path[1]};
        }
    }
    if (!home.empty()) {
        bool is_gateway = topo.element(owner).gateway;
        table.entries[home] = {is_gateway ? RouteKind::ProcessLocally : RouteKind::Local, ""};
    }

    for (std::string ancestor = home; !ancestor.empty(); ancestor = topo.parent(ancestor)) {
        const std::string &level = topo.parent(ancestor);
        for (const auto &peer : topo.children(level)) {
            if (peer == ancestor) {
                continue;
            }
            auto path = level_path(level, ancestor, peer);
            if (path[1] != peer) {
                table.entries[peer] = {RouteKind::Via, path[1]};
                continue;
            }
            // Adjacent peer: head for the boundary link closest to the owner.
            const Link *best = nullptr;
            std::string best_inside;
            std::string best_outside;
            double best_cost = kInf;
            for (const auto &link : topo.links()) {
                for (auto [x, y] : {std::pair{&link.a, &link.b}, std::pair{&link.b, &link.a}}) {
                    if (!topo.contains(ancestor, *x) || !topo.contains(peer, *y)) {
                        continue;
                    }
                    double c = cost_(link) + (*x == owner ? 0.0 : path_cost(owner, *x));
                    if (!best || c < best_cost - kTie ||
                        (std::abs(c - best_cost) <= kTie && std::pair{*x, *y} < std::pair{best_inside, best_outside})) {
                        best = &link;
                        best_cost = c;
                        best_inside = *x;
                        best_outside = *y;
                    }
                }
            }
            if (best_inside == owner) {
                table.entries[peer] = {RouteKind::Via, best_outside};
                continue;
            }
            std::string visible = best_inside;
            while (!table.entries.count(visible)) {
                visible = topo.parent(visible);
            }
            const RouteEntry &inner = table.entries.at(visible);
            table.entries[peer] = {RouteKind::Via, inner.kind == RouteKind::Direct ? visible : inner.next_hop};
        }
    }
    return table;
}

Routing Routing::build(const Topology &topology, CostFn cost) {
    Routing routing;
    routing.topology_ = &topology;
    routing.cost_ = std::move(cost);

    // Every level must be connected.
    std::vector<std::string> problems;
    std::vector<std::string> levels{""};
    for (size_t k = 0; k < levels.size(); k++) {
        auto members = topology.children(levels[k]);
        for (const auto &m : members) {
            if (topology.is_network(m)) {
                levels.push_back(m);
            }
        }
        if (members.size() < 2) {
            continue;
        }
        auto dist = routing.level_distances(levels[k], members.front());
        for (const auto &m : members) {
            if (!dist.count(m)) {
                problems.push_back(members.front() + "<->" + m);
            }
        }
    }
    if (!problems.empty()) {
        std::string message = "disconnected:";
        for (const auto &p : problems) {
            message += " " + p;
        }
        throw Error(ErrorCode::Unreachable, message);
    }
    for (const auto &node : topology.nodes()) {
        routing.tables_[node] = routing.build_table(node);
    }
    return routing;
}

const RoutingTable &Routing::table(std::string_view owner) const {
    auto it = tables_.find(std::string(owner));
    if (it == tables_.end()) {
        throw Error(ErrorCode::UnknownDestination, "no routing table for '" + std::string(owner) + "'");
    }
    return it->second;
}

std::string Routing::resolve_destination(std::string_view viewer, std::string_view target) const {
    const Topology &topo = *topology_;
    if (!topo.has(target)) {
        throw Error(ErrorCode::UnknownDestination, "unknown destination '" + std::string(target) + "'");
    }
    const RoutingTable &t = table(viewer);
    if (target == viewer) {
        return std::string(target);
    }
    if (topo.contains(target, viewer)) {
        // An enclosing network is seen as the viewer's own network.
        return topo.parent(viewer);
    }
    for (std::string current(target); !current.empty(); current = topo.parent(current)) {
        if (t.entries.count(current) || current == viewer) {
            return current;
        }
    }
    throw Error(ErrorCode::UnknownDestination, std::string(target) + " is not visible from " + std::string(viewer));
}

std::vector<std::string> Routing::select_path(std::string_view src, std::string_view dst) const {
    const Topology &topo = *topology_;
    for (auto name : {src, dst}) {
        if (!topo.has(name)) {
            throw Error(ErrorCode::Unreachable, "unknown element '" + std::string(name) + "'");
        }
    }
    if (src == dst || topo.contains(src, dst) || topo.contains(dst, src)) {
        return {std::string(src)};
    }
    std::string level = topo.common_parent(src, dst);
    return level_path(level, topo.lift(src, level), topo.lift(dst, level));
}

double Routing::path_cost(std::string_view src, std::string_view dst) const {
    auto path = select_path(src, dst);
    if (path.size() < 2) {
        return 0;
    }
    std::string level = topology_->parent(path.front());
    double total = 0;
    for (size_t k = 0; k + 1 < path.size(); k++) {
        for (const auto &[v, c] : level_neighbors(level, path[k])) {
            if (v == path[k + 1]) {
                total += c;
                break;
            }
        }
    }
    return total;
}

std::string Routing::select_center(std::string_view viewer, const std::vector<std::string> &targets) const {
    if (targets.empty()) {
        throw Error(ErrorCode::InvalidArgument, "select_center needs targets");
    }
    std::vector<std::string> visible_targets;
    for (const auto &t : targets) {
        visible_targets.push_back(resolve_destination(viewer, t));
    }
    std::set<std::string> candidates{std::string(viewer)};
    for (const auto &[name, entry] : table(viewer).entries) {
        if (!topology_->contains(name, viewer)) {
            candidates.insert(name);
        }
    }
    std::string best;
    double best_cost = kInf;
    for (const auto &c : candidates) {
        double total = 0;
        for (const auto &t : visible_targets) {
            total += path_cost(c, t);
        }
        if (total < best_cost - kTie) {
            best = c;
            best_cost = total;
        }
    }
    return best;
}

std::vector<std::string> Routing::route_within(const std::string &x, const std::string &y) const {
    return physical_route(x, y);
}

std::vector<std::string> Routing::physical_route(std::string_view a, std::string_view b) const {
    const Topology &topo = *topology_;
    for (auto name : {a, b}) {
        if (!topo.has(name) || topo.is_network(name)) {
            throw Error(ErrorCode::Unreachable, "'" + std::string(name) + "' is not a physical node");
        }
    }
    if (a == b) {
        return {std::string(a)};
    }
    std::string level = topo.common_parent(a, b);
    auto chain = level_path(level, topo.lift(a, level), topo.lift(b, level));
    std::vector<std::string> route;
    std::string entry(a);
    for (size_t k = 0; k + 1 < chain.size(); k++) {
        const Link *link = crossing_link(chain[k], chain[k + 1]);
        bool forward = topo.contains(chain[k], link->a);
        const std::string &exit = forward ? link->a : link->b;
        const std::string &next_entry = forward ? link->b : link->a;
        auto segment = route_within(entry, exit);
        route.insert(route.end(), segment.begin(), segment.end());
        entry = next_entry;
    }
    auto last = route_within(entry, std::string(b));
    route.insert(route.end(), last.begin(), last.end());
    return route;
}

std::string Routing::next_physical_hop(std::string_view at, std::string_view destination) const {
    const Topology &topo = *topology_;
    std::string visible = resolve_destination(at, destination);
    if (visible == at) {
        return std::string(at);
    }
    const RoutingTable &t = table(at);
    if (!t.entries.count(visible)) {
        return std::string(at);
    }
    const RouteEntry &entry = t.entries.at(visible);
    switch (entry.kind) {
        case RouteKind::Local:
        case RouteKind::ProcessLocally:
            return std::string(at);
        case RouteKind::Direct: {
            if (!topo.is_network(visible)) {
                return visible;
            }
            const Link *link = crossing_link(std::string(at), visible);
            return link->a == at ? link->b : link->a;
        }
        case RouteKind::Via:
            if (topo.find_link(at, entry.next_hop)) {
                return entry.next_hop;
            }
            return next_physical_hop(at, entry.next_hop);
    }
    return std::string(at);
}

std::vector<const Link *> Routing::route_links(const std::vector<std::string> &route) const {
    std::vector<const Link *> out;
    for (size_t k = 0; k + 1 < route.size(); k++) {
        const Link *link = topology_->find_link(route[k], route[k + 1]);
        if (!link) {
            throw Error(ErrorCode::Unreachable, "no link " + route[k] + "-" + route[k + 1]);
        }
        out.push_back(link);
    }
    return out;
}

// ---------------------------------------------------------------------------------------
// Table formatting

std::string format_table(const Routing &routing, const RoutingTable &table) {
    const Topology &topo = routing.topology();
    const std::string &home = topo.parent(table.owner);
    std::vector<std::string> siblings;
    std::vector<std::pair<size_t, std::string>> networks;
    for (const auto &[name, entry] : table.entries) {
        if (topo.parent(name) == home && name != home) {
            siblings.push_back(name);
        } else {
            networks.push_back({topo.depth(name), name});
        }
    }
    std::sort(networks.begin(), networks.end(), [](const auto &x, const auto &y) {
        return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    std::string out = "Routing table at " + table.owner + "\nDestination\tRoute\n";
    auto emit = [&](const std::string &name) {
        const RouteEntry &e = table.entries.at(name);
        out += name + "\t";
        switch (e.kind) {
            case RouteKind::Direct:
                out += "(direct)";
                break;
            case RouteKind::Via:
                out += e.next_hop;
                break;
            case RouteKind::Local:
                out += "Local";
                break;
            case RouteKind::ProcessLocally:
                out += "(process locally)";
                break;
        }
        out += "\n";
    };
    for (const auto &s : siblings) {
        emit(s);
    }
    for (const auto &[d, n] : networks) {
        emit(n);
    }
    return out;
}

std::string format_tables(const Routing &routing) {
    std::string out;
    for (const auto &[owner, table] : routing.tables()) {
        if (!out.empty()) {
            out += "\n";
        }
        out += format_table(routing, table);
    }
    return out;
}

std::string diff_tables(std::string_view generated, std::string_view golden) {
    auto blocks = [](std::string_view text) {
        std::map<std::string, std::vector<std::string>> out;
        std::string current;
        for (const auto &line : split_lines(text)) {
            const std::string header = "Routing table at ";
            if (line.rfind(header, 0) == 0) {
                current = line.substr(header.size());
                out[current];
            } else if (!line.empty() && !current.empty()) {
                out[current].push_back(line);
            }
        }
        return out;
    };
    auto have = blocks(generated);
    auto want = blocks(golden);
    std::string diff;
    for (const auto &[owner, expected] : want) {
        auto it = have.find(owner);
        if (it == have.end()) {
            diff += "missing table for " + owner + "\n";
            continue;
        }
        const auto &actual = it->second;
        if (actual == expected) {
            continue;
        }
        diff += "--- expected " + owner + "\n+++ actual " + owner + "\n";
        bool listed = false;
        for (const auto &line : expected) {
            if (std::find(actual.begin(), actual.end(), line) == actual.end()) {
                diff += "-" + line + "\n";
                listed = true;
            }
        }
        for (const auto &line : actual) {
            if (std::find(expected.begin(), expected.end(), line) == expected.end()) {
                diff += "+" + line + "\n";
                listed = true;
            }
        }
        if (!listed) {
            diff += "(same entries, different order)\n";
        }
    }
    return diff;
}

// ---------------------------------------------------------------------------------------
// Swap planning

namespace {

SwapTree build_swap_tree(size_t left, size_t right) {
    SwapTree tree;
    tree.left = left;
    tree.right = right;
    if (right - left < 2) {
        return tree;
    }
    size_t mid = left + (right - left) / 2;
    tree.swap_at = static_cast<int>(mid);
    tree.children.push_back(build_swap_tree(left, mid));
    tree.children.push_back(build_swap_tree(mid, right));
    return tree;
}

void collect(const SwapTree &tree, std::vector<size_t> &out) {
    for (const auto &child : tree.children) {
        collect(child, out);
    }
    if (tree.swap_at >= 0) {
        out.push_back(static_cast<size_t>(tree.swap_at));
    }
}

}  // namespace

SwapTree swap_order(size_t chain_length) {
    if (chain_length < 2) {
        throw Error(ErrorCode::InvalidArgument, "a swap chain needs at least two nodes");
    }
    return build_swap_tree(0, chain_length - 1);
}

SwapTree swap_order(const std::vector<std::string> &chain) {
    return swap_order(chain.size());
}

std::vector<size_t> swap_sequence(const SwapTree &tree) {
    std::vector<size_t> out;
    collect(tree, out);
    return out;
}

}  // namespace qrna
