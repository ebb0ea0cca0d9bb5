#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coldstart/bipartite.hpp"

namespace coldstart {

// Sparse symmetric item-item cosine matrix. Only pairs with at least one
// common purchaser are stored; sim(a,b) = common / sqrt(k_a * k_b). Neighbor
// lists are sorted by item index and each pair appears in both lists.
class ItemSimilarity {
public:
    ItemSimilarity() = default;
    ItemSimilarity(std::size_t item_count, std::vector<std::uint64_t> offsets,
                   std::vector<std::uint32_t> neighbors, std::vector<double> values,
                   std::vector<std::uint32_t> degree_snapshot)
        : items_(item_count), offsets_(std::move(offsets)), neighbors_(std::move(neighbors)),
          values_(std::move(values)), degrees_(std::move(degree_snapshot)) {}

    std::size_t item_count() const { return items_; }
    std::size_t pair_count() const { return neighbors_.size() / 2; }

    std::span<const std::uint32_t> neighbors_of(std::uint32_t item) const {
        return {neighbors_.data() + offsets_[item], neighbors_.data() + offsets_[item + 1]};
    }
    std::span<const double> values_of(std::uint32_t item) const {
        return {values_.data() + offsets_[item], values_.data() + offsets_[item + 1]};
    }

    // 0 when the pair has no common purchaser (or was pruned).
    double value(std::uint32_t a, std::uint32_t b) const {
        auto nbrs = neighbors_of(a);
        auto it = std::lower_bound(nbrs.begin(), nbrs.end(), b);
        if (it == nbrs.end() || *it != b) return 0.0;
        return values_of(a)[static_cast<std::size_t>(it - nbrs.begin())];
    }

    const std::vector<std::uint32_t>& degree_snapshot() const { return degrees_; }

private:
    std::size_t items_ = 0;
    std::vector<std::uint64_t> offsets_;
    std::vector<std::uint32_t> neighbors_;
    std::vector<double> values_;
    std::vector<std::uint32_t> degrees_;
};

struct SimilarityOptions {
    // Baskets above this size dominate the pair enumeration cost quadratically.
    std::size_t basket_warning_threshold = 10000;
};

// Co-purchase counting by per-user pair enumeration, cost O(sum_i k_i^2).
// `oversized_baskets` (optional) counts users whose basket exceeds the
// warning threshold.
inline ItemSimilarity item_similarity(const BipartiteNetwork& net,
                                      const SimilarityOptions& options = {},
                                      std::size_t* oversized_baskets = nullptr) {
    std::vector<std::uint64_t> keys;
    std::size_t oversized = 0;
    for (std::uint32_t u = 0; u < net.user_count(); ++u) {
        auto basket = net.items_of(u);
        if (basket.size() > options.basket_warning_threshold) ++oversized;
        for (std::size_t a = 0; a < basket.size(); ++a)
            for (std::size_t b = a + 1; b < basket.size(); ++b)
                keys.push_back((static_cast<std::uint64_t>(basket[a]) << 32) | basket[b]);
    }
    if (oversized_baskets) *oversized_baskets = oversized;
    std::sort(keys.begin(), keys.end());

    const std::size_t m = net.item_count();
    std::vector<std::uint32_t> list_sizes(m, 0);
    std::vector<std::pair<std::uint64_t, std::uint32_t>> pairs;  // (key, common count)
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        pairs.emplace_back(keys[i], static_cast<std::uint32_t>(j - i));
        ++list_sizes[keys[i] >> 32];
        ++list_sizes[keys[i] & 0xFFFFFFFFu];
        i = j;
    }
    keys.clear();
    keys.shrink_to_fit();

    std::vector<std::uint64_t> offsets(m + 1, 0);
    for (std::size_t o = 0; o < m; ++o) offsets[o + 1] = offsets[o] + list_sizes[o];
    std::vector<std::uint32_t> neighbors(offsets[m]);
    std::vector<double> values(offsets[m]);
    std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& [key, common] : pairs) {
        const std::uint32_t a = static_cast<std::uint32_t>(key >> 32);
        const std::uint32_t b = static_cast<std::uint32_t>(key & 0xFFFFFFFFu);
        const double sim = static_cast<double>(common) /
                           std::sqrt(static_cast<double>(net.item_degree(a)) * net.item_degree(b));
        neighbors[cursor[a]] = b;
        values[cursor[a]++] = sim;
        neighbors[cursor[b]] = a;
        values[cursor[b]++] = sim;
    }

    std::vector<std::uint32_t> snapshot(net.degrees(Side::item).begin(), net.degrees(Side::item).end());
    return ItemSimilarity(m, std::move(offsets), std::move(neighbors), std::move(values),
                          std::move(snapshot));
}

struct ScoreVector {
    std::uint32_t user = 0;
    // (item, score) for unpurchased items with positive score, ascending item index.
    std::vector<std::pair<std::uint32_t, double>> scores;
};

namespace detail {

// Shared accumulation convention: every score is the sum of similarity
// contributions taken in ascending order of the contributing node index.
// The brute-force test oracles follow the same order, which keeps strict
// comparisons and ties bit-identical between the two routes.
struct DenseAccumulator {
    std::vector<double> value;
    std::vector<std::uint32_t> touched;

    explicit DenseAccumulator(std::size_t size) : value(size, 0.0) {}

    void add(std::uint32_t slot, double v) {
        if (value[slot] == 0.0) touched.push_back(slot);
        value[slot] += v;
    }
    void reset() {
        for (auto t : touched) value[t] = 0.0;
        touched.clear();
    }
};

}  // namespace detail

// Accumulative score w_{i,alpha} = sum over purchased gamma of sim(alpha,gamma)
// for every unpurchased alpha; zero-score candidates are omitted.
inline ScoreVector score_user(const BipartiteNetwork& net, const ItemSimilarity& sim,
                              std::uint32_t user) {
    ScoreVector out;
    out.user = user;
    detail::DenseAccumulator acc(net.item_count());
    for (std::uint32_t gamma : net.items_of(user)) {
        auto nbrs = sim.neighbors_of(gamma);
        auto vals = sim.values_of(gamma);
        for (std::size_t t = 0; t < nbrs.size(); ++t) acc.add(nbrs[t], vals[t]);
    }
    std::sort(acc.touched.begin(), acc.touched.end());
    auto basket = net.items_of(user);
    for (std::uint32_t candidate : acc.touched) {
        if (std::binary_search(basket.begin(), basket.end(), candidate)) continue;
        if (acc.value[candidate] > 0.0) out.scores.emplace_back(candidate, acc.value[candidate]);
    }
    return out;
}

struct RecommendationList {
    std::uint32_t user = 0;
    std::vector<std::uint32_t> items;  // descending score; ties by ascending item index
    std::vector<double> scores;
};

inline RecommendationList recommend(const BipartiteNetwork& net, const ItemSimilarity& sim,
                                    std::uint32_t user, std::size_t list_length) {
    if (list_length < 1) throw std::invalid_argument("list length must be >= 1");
    ScoreVector sv = score_user(net, sim, user);
    auto order = sv.scores;  // already ascending by item, which settles ties below
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    RecommendationList out;
    out.user = user;
    const std::size_t take = std::min(list_length, order.size());
    for (std::size_t t = 0; t < take; ++t) {
        out.items.push_back(order[t].first);
        out.scores.push_back(order[t].second);
    }
    return out;
}

// Top-k pruning for the nearest-neighbor ICF variant. Each item keeps its k
// strongest similarities (ties by ascending neighbor index); a pair survives
// when either endpoint keeps it.
inline ItemSimilarity item_similarity_topk(const ItemSimilarity& sim, std::size_t k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const std::size_t m = sim.item_count();
    std::vector<std::pair<std::uint64_t, double>> kept;  // canonical (min,max) key -> value
    std::vector<std::pair<std::uint32_t, double>> row;
    for (std::uint32_t a = 0; a < m; ++a) {
        auto nbrs = sim.neighbors_of(a);
        auto vals = sim.values_of(a);
        row.clear();
        for (std::size_t t = 0; t < nbrs.size(); ++t) row.emplace_back(nbrs[t], vals[t]);
        const std::size_t take = std::min(k, row.size());
        std::stable_sort(row.begin(), row.end(),
                         [](const auto& x, const auto& y) { return x.second > y.second; });
        for (std::size_t t = 0; t < take; ++t) {
            const std::uint32_t b = row[t].first;
            const std::uint64_t key = a < b
                ? (static_cast<std::uint64_t>(a) << 32) | b
                : (static_cast<std::uint64_t>(b) << 32) | a;
            kept.emplace_back(key, row[t].second);
        }
    }
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());

    std::vector<std::uint32_t> list_sizes(m, 0);
    for (const auto& [key, v] : kept) {
        ++list_sizes[key >> 32];
        ++list_sizes[key & 0xFFFFFFFFu];
    }
    std::vector<std::uint64_t> offsets(m + 1, 0);
    for (std::size_t o = 0; o < m; ++o) offsets[o + 1] = offsets[o] + list_sizes[o];
    std::vector<std::uint32_t> neighbors(offsets[m]);
    std::vector<double> values(offsets[m]);
    std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& [key, v] : kept) {
        const std::uint32_t a = static_cast<std::uint32_t>(key >> 32);
        const std::uint32_t b = static_cast<std::uint32_t>(key & 0xFFFFFFFFu);
        neighbors[cursor[a]] = b;
        values[cursor[a]++] = v;
        neighbors[cursor[b]] = a;
        values[cursor[b]++] = v;
    }
    return ItemSimilarity(m, std::move(offsets), std::move(neighbors), std::move(values),
                          sim.degree_snapshot());
}

// User-based CF mirror: sim(i,j) = |B_i intersect B_j| / sqrt(k_i k_j),
// w_{i,alpha} = sum over j of sim(i,j) a_{j,alpha} for unpurchased alpha.
inline ScoreVector ucf_score_user(const BipartiteNetwork& net, std::uint32_t user) {
    ScoreVector out;
    out.user = user;
    detail::DenseAccumulator common(net.user_count());
    for (std::uint32_t gamma : net.items_of(user))
        for (std::uint32_t j : net.users_of(gamma))
            if (j != user) common.add(j, 1.0);
    std::sort(common.touched.begin(), common.touched.end());

    detail::DenseAccumulator acc(net.item_count());
    const double ki = net.user_degree(user);
    auto basket = net.items_of(user);
    for (std::uint32_t j : common.touched) {
        const double s = common.value[j] / std::sqrt(ki * net.user_degree(j));
        for (std::uint32_t alpha : net.items_of(j)) {
            if (std::binary_search(basket.begin(), basket.end(), alpha)) continue;
            acc.add(alpha, s);
        }
    }
    std::sort(acc.touched.begin(), acc.touched.end());
    for (std::uint32_t candidate : acc.touched)
        if (acc.value[candidate] > 0.0) out.scores.emplace_back(candidate, acc.value[candidate]);
    return out;
}

}  // namespace coldstart
