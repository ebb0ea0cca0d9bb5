#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "coldstart/bipartite.hpp"

namespace coldstart {

struct NetworkSummary {
    std::size_t users = 0;
    std::size_t items = 0;
    std::size_t links = 0;
    double mean_user_degree = 0.0;
    double mean_item_degree = 0.0;
    double sparsity = 0.0;  // links / (users * items)

    static NetworkSummary from_counts(std::size_t n, std::size_t m, std::size_t w) {
        if (n == 0 || m == 0) throw std::invalid_argument("summary requires nonempty sides");
        NetworkSummary s;
        s.users = n;
        s.items = m;
        s.links = w;
        s.mean_user_degree = static_cast<double>(w) / static_cast<double>(n);
        s.mean_item_degree = static_cast<double>(w) / static_cast<double>(m);
        s.sparsity = static_cast<double>(w) /
                     (static_cast<double>(n) * static_cast<double>(m));
        return s;
    }
};

inline NetworkSummary summarize(const BipartiteNetwork& net) {
    return NetworkSummary::from_counts(net.user_count(), net.item_count(), net.link_count());
}

struct DegreeDistribution {
    Side side = Side::user;
    std::vector<std::uint32_t> degree;     // support, ascending
    std::vector<double> probability;      // P(k), sums to 1
    std::vector<std::size_t> count;       // nodes at each k
};

inline DegreeDistribution degree_distribution(const BipartiteNetwork& net, Side side) {
    std::map<std::uint32_t, std::size_t> hist;
    for (auto d : net.degrees(side)) ++hist[d];
    DegreeDistribution dist;
    dist.side = side;
    double total = static_cast<double>(net.degrees(side).size());
    for (const auto& [k, c] : hist) {
        dist.degree.push_back(k);
        dist.count.push_back(c);
        dist.probability.push_back(static_cast<double>(c) / total);
    }
    return dist;
}

// Discrete power-law exponent via the standard continuous-approximation MLE:
// gamma = 1 + N / sum(ln(k_i / (k_min - 1/2))) over observations k_i >= k_min.
inline double powerlaw_exponent_mle(std::span<const std::uint32_t> degree_sequence,
                                    std::uint32_t k_min = 1) {
    if (k_min < 1) throw std::invalid_argument("k_min must be >= 1");
    std::size_t tail = 0;
    bool all_at_kmin = true;
    double log_sum = 0.0;
    const double shifted = static_cast<double>(k_min) - 0.5;
    for (auto k : degree_sequence) {
        if (k < k_min) continue;
        ++tail;
        if (k != k_min) all_at_kmin = false;
        log_sum += std::log(static_cast<double>(k) / shifted);
    }
    if (tail < 10)
        throw std::runtime_error("insufficient tail: need at least 10 observations >= k_min, have " +
                                 std::to_string(tail));
    if (all_at_kmin) throw std::runtime_error("degenerate sample: all tail observations equal k_min");
    return 1.0 + static_cast<double>(tail) / log_sum;
}

// Mean degree of the node's neighbors (which live on the opposite side).
inline double nn_degree(const BipartiteNetwork& net, std::uint32_t node, Side side) {
    std::uint64_t sum = 0;
    std::size_t k;
    if (side == Side::user) {
        auto row = net.items_of(node);
        k = row.size();
        for (auto o : row) sum += net.item_degree(o);
    } else {
        auto row = net.users_of(node);
        k = row.size();
        for (auto u : row) sum += net.user_degree(u);
    }
    if (k == 0) throw std::invalid_argument("nn_degree of a degree-0 node is undefined");
    return static_cast<double>(sum) / static_cast<double>(k);
}

// Pearson correlation of (user degree, item degree) pairs over all edges.
// Undefined (nullopt) when either endpoint degree sequence has zero variance
// across edges.
inline std::optional<double> edge_degree_correlation(const BipartiteNetwork& net) {
    const double w = static_cast<double>(net.link_count());
    if (net.link_count() == 0) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::uint32_t u = 0; u < net.user_count(); ++u) {
        const double x = net.user_degree(u);
        for (std::uint32_t o : net.items_of(u)) {
            const double y = net.item_degree(o);
            sx += x;
            sy += y;
            sxx += x * x;
            syy += y * y;
            sxy += x * y;
        }
    }
    const double vx = w * sxx - sx * sx;
    const double vy = w * syy - sy * sy;
    if (vx <= 0.0 || vy <= 0.0) return std::nullopt;
    return (w * sxy - sx * sy) / std::sqrt(vx * vy);
}

struct AssortativityProfile {
    Side side = Side::user;
    std::vector<std::uint32_t> degree;          // support, ascending
    std::vector<double> mean_neighbor_degree;   // <d_nn(k)> per support value
    std::vector<std::size_t> count;             // nodes at each k
    std::vector<double> per_node;               // d_nn per node index
    std::optional<double> degree_correlation;   // edge-wise Pearson, flatness diagnostic
};

// <d_nn(k)> curve: average nearest-neighbor degree over all nodes of degree k.
inline AssortativityProfile knn_by_degree(const BipartiteNetwork& net, Side side) {
    AssortativityProfile profile;
    profile.side = side;
    const std::size_t count = side == Side::user ? net.user_count() : net.item_count();
    profile.per_node.resize(count);
    std::map<std::uint32_t, std::pair<double, std::size_t>> acc;  // k -> (sum d_nn, nodes)
    for (std::uint32_t x = 0; x < count; ++x) {
        const std::uint32_t k = side == Side::user ? net.user_degree(x) : net.item_degree(x);
        const double dnn = nn_degree(net, x, side);
        profile.per_node[x] = dnn;
        auto& slot = acc[k];
        slot.first += dnn;
        slot.second += 1;
    }
    for (const auto& [k, slot] : acc) {
        profile.degree.push_back(k);
        profile.mean_neighbor_degree.push_back(slot.first / static_cast<double>(slot.second));
        profile.count.push_back(slot.second);
    }
    profile.degree_correlation = edge_degree_correlation(net);
    return profile;
}

}  // namespace coldstart
