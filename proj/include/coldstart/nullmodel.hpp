#pragma once

#include <cstdint>
#include <unordered_set>
#include <utility>
#include <vector>

#include "coldstart/bipartite.hpp"
#include "coldstart/rng.hpp"

namespace coldstart {

struct ReshuffleReport {
    std::uint64_t attempts = 0;
    std::uint64_t successful_swaps = 0;
    std::uint64_t seed = 0;
};

namespace detail {

inline std::uint64_t edge_key(std::uint32_t user, std::uint32_t item) {
    return (static_cast<std::uint64_t>(user) << 32) | item;
}

}  // namespace detail

inline std::uint64_t default_reshuffle_attempts(const BipartiteNetwork& net) {
    return 3 * static_cast<std::uint64_t>(net.link_count());
}

// Degree-preserving link-crossing randomization. Each attempt picks two
// distinct edge slots uniformly; the proposal (i,a),(j,b) -> (i,b),(j,a) is
// applied only when the edges share no endpoint and neither rewired pair
// already exists, so the result stays a simple graph with both degree
// sequences unchanged. Rejected proposals still count as attempts.
inline std::pair<BipartiteNetwork, ReshuffleReport> reshuffle(const BipartiteNetwork& net,
                                                              std::uint64_t attempts,
                                                              std::uint64_t seed) {
    ReshuffleReport report;
    report.seed = seed;
    report.attempts = attempts;

    auto edges = net.edge_list();
    const std::size_t w = edges.size();
    if (w < 2) {
        return {BipartiteNetwork::from_edges(net.user_count(), net.item_count(), std::move(edges),
                                             net.ids(Side::user), net.ids(Side::item)),
                report};
    }

    std::unordered_set<std::uint64_t> present;
    present.reserve(w * 2);
    for (const auto& [u, o] : edges) present.insert(detail::edge_key(u, o));

    Rng g(seed);
    for (std::uint64_t step = 0; step < attempts; ++step) {
        const std::size_t e1 = static_cast<std::size_t>(uniform_index(g, w));
        std::size_t e2 = static_cast<std::size_t>(uniform_index(g, w - 1));
        if (e2 >= e1) ++e2;
        auto [u1, o1] = edges[e1];
        auto [u2, o2] = edges[e2];
        if (u1 == u2 || o1 == o2) continue;
        if (present.count(detail::edge_key(u1, o2)) || present.count(detail::edge_key(u2, o1)))
            continue;
        present.erase(detail::edge_key(u1, o1));
        present.erase(detail::edge_key(u2, o2));
        present.insert(detail::edge_key(u1, o2));
        present.insert(detail::edge_key(u2, o1));
        edges[e1] = {u1, o2};
        edges[e2] = {u2, o1};
        ++report.successful_swaps;
    }

    return {BipartiteNetwork::from_edges(net.user_count(), net.item_count(), std::move(edges),
                                         net.ids(Side::user), net.ids(Side::item)),
            report};
}

inline std::pair<BipartiteNetwork, ReshuffleReport> reshuffle(const BipartiteNetwork& net,
                                                              std::uint64_t seed) {
    return reshuffle(net, default_reshuffle_attempts(net), seed);
}

}  // namespace coldstart
