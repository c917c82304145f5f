#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zt6g/error.hpp"

namespace zt6g {

/// Simulation clock, in whole seconds.
using Second = std::int64_t;

using Asn = std::uint32_t;
using CommunityId = std::uint32_t;
using CertId = std::uint64_t;

/// Hierarchical UE identity: the ASN is unique network-wide, the community id
/// within its AS, and the certificate id within its community.
struct UeId {
    Asn asn = 0;
    CommunityId community_id = 0;
    CertId cert_id = 0;

    friend auto operator<=>(const UeId&, const UeId&) = default;
};

namespace detail {

template <typename T>
T parse_decimal_field(std::string_view field, std::string_view whole) {
    if (field.empty()) {
        throw MalformedIdentity("empty field in identity '" + std::string(whole) + "'");
    }
    for (char c : field) {
        if (c < '0' || c > '9') {
            throw MalformedIdentity("non-decimal character in identity '" + std::string(whole) + "'");
        }
    }
    T value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec == std::errc::result_out_of_range) {
        throw MalformedIdentity("identity field overflows in '" + std::string(whole) + "'");
    }
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw MalformedIdentity("cannot parse identity '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace detail

/// Parses `<asn>:<community>:<cert>` (plain decimal, no signs).
inline UeId parse_ue_id(std::string_view text) {
    const auto first = text.find(':');
    if (first == std::string_view::npos) {
        throw MalformedIdentity("expected <asn>:<community>:<cert>, got '" + std::string(text) + "'");
    }
    const auto second = text.find(':', first + 1);
    if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos) {
        throw MalformedIdentity("expected <asn>:<community>:<cert>, got '" + std::string(text) + "'");
    }
    UeId id;
    id.asn = detail::parse_decimal_field<Asn>(text.substr(0, first), text);
    id.community_id = detail::parse_decimal_field<CommunityId>(text.substr(first + 1, second - first - 1), text);
    id.cert_id = detail::parse_decimal_field<CertId>(text.substr(second + 1), text);
    return id;
}

inline std::string format_ue_id(const UeId& id) {
    return std::to_string(id.asn) + ":" + std::to_string(id.community_id) + ":" + std::to_string(id.cert_id);
}

struct UeIdHash {
    std::size_t operator()(const UeId& id) const noexcept {
        std::uint64_t h = id.cert_id * 0x9E3779B97F4A7C15ull;
        h ^= (std::uint64_t{id.asn} << 32 | id.community_id) + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

struct Community {
    CommunityId id = 0;
    std::string name;
    std::uint32_t population = 1;
    /// A dishonest controller never self-blocks its own residents.
    bool dishonest = false;
};

/// Communities plus undirected links between them.
class Topology {
public:
    Topology() = default;

    void add_community(Community c) {
        if (c.population < 1) {
            throw InvalidScenario("community '" + c.name + "' must have population >= 1");
        }
        if (find(c.id)) {
            throw InvalidScenario("duplicate community id " + std::to_string(c.id));
        }
        if (find_by_name(c.name)) {
            throw InvalidScenario("duplicate community name '" + c.name + "'");
        }
        communities_.push_back(std::move(c));
    }

    void add_link(CommunityId a, CommunityId b) {
        if (a == b) {
            throw InvalidScenario("self-loop link on community " + std::to_string(a));
        }
        if (!find(a) || !find(b)) {
            throw InvalidScenario("link references unknown community");
        }
        links_.insert(std::minmax(a, b));
    }

    const std::vector<Community>& communities() const { return communities_; }
    const std::set<std::pair<CommunityId, CommunityId>>& links() const { return links_; }

    const Community* find(CommunityId id) const {
        auto it = std::find_if(communities_.begin(), communities_.end(), [&](const Community& c) { return c.id == id; });
        return it == communities_.end() ? nullptr : &*it;
    }

    const Community* find_by_name(std::string_view name) const {
        auto it = std::find_if(communities_.begin(), communities_.end(), [&](const Community& c) { return c.name == name; });
        return it == communities_.end() ? nullptr : &*it;
    }

    const Community& at(CommunityId id) const {
        if (const auto* c = find(id)) {
            return *c;
        }
        throw InvalidScenario("unknown community id " + std::to_string(id));
    }

    /// Position of the community in insertion order.
    std::size_t index_of(CommunityId id) const {
        for (std::size_t i = 0; i < communities_.size(); ++i) {
            if (communities_[i].id == id) {
                return i;
            }
        }
        throw InvalidScenario("unknown community id " + std::to_string(id));
    }

    bool linked(CommunityId a, CommunityId b) const { return links_.count(std::minmax(a, b)) != 0; }

    /// Neighbours sorted by community name.
    std::vector<CommunityId> neighbours(CommunityId id) const {
        std::vector<CommunityId> out;
        for (const auto& [a, b] : links_) {
            if (a == id) {
                out.push_back(b);
            } else if (b == id) {
                out.push_back(a);
            }
        }
        std::sort(out.begin(), out.end(), [&](CommunityId x, CommunityId y) { return at(x).name < at(y).name; });
        return out;
    }

    bool is_connected() const {
        if (communities_.empty()) {
            return true;
        }
        std::set<CommunityId> seen{communities_.front().id};
        std::vector<CommunityId> stack{communities_.front().id};
        while (!stack.empty()) {
            const auto cur = stack.back();
            stack.pop_back();
            for (auto n : neighbours(cur)) {
                if (seen.insert(n).second) {
                    stack.push_back(n);
                }
            }
        }
        return seen.size() == communities_.size();
    }

private:
    std::vector<Community> communities_;
    std::set<std::pair<CommunityId, CommunityId>> links_;
};

/// Shortest path by hop count; among equal-length paths the one whose sequence
/// of community names is lexicographically smallest wins.
inline std::vector<CommunityId> shortest_path(const Topology& topo, CommunityId src, CommunityId dst) {
    topo.at(src);
    topo.at(dst);
    if (src == dst) {
        return {src};
    }
    // Hop distance to dst for every community.
    std::map<CommunityId, int> dist{{dst, 0}};
    std::queue<CommunityId> frontier;
    frontier.push(dst);
    while (!frontier.empty()) {
        const auto cur = frontier.front();
        frontier.pop();
        for (auto n : topo.neighbours(cur)) {
            if (dist.emplace(n, dist[cur] + 1).second) {
                frontier.push(n);
            }
        }
    }
    if (!dist.count(src)) {
        throw Unreachable("no path from " + topo.at(src).name + " to " + topo.at(dst).name);
    }
    // Greedy descent: neighbours() is name-ordered, so the first neighbour one hop
    // closer yields the lexicographically smallest continuation.
    std::vector<CommunityId> path{src};
    auto cur = src;
    while (cur != dst) {
        for (auto n : topo.neighbours(cur)) {
            auto it = dist.find(n);
            if (it != dist.end() && it->second == dist[cur] - 1) {
                cur = n;
                break;
            }
        }
        path.push_back(cur);
    }
    return path;
}

enum class PacketKind : std::uint8_t { Normal, Attack };

/// Ground-truth labelled traffic; `kind` feeds metrics only.
struct Packet {
    UeId src;
    UeId dst;
    Second t = 0;
    PacketKind kind = PacketKind::Normal;
};

/// One request per (guest, destination community, second). Carries no
/// ground-truth labels.
struct AccessRequest {
    UeId guest;
    CommunityId home_community = 0;
    CommunityId dst_community = 0;
    Second t = 0;
    std::uint32_t packet_count = 0;
};

}  // namespace zt6g
