#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coldstart/bipartite.hpp"
#include "coldstart/parallel.hpp"
#include "coldstart/recsys.hpp"
#include "coldstart/rng.hpp"

namespace coldstart {

enum class Engine { icf, ucf };

// Degree-based user selection rule. The finite-exponent family picks users
// with probability proportional to k^tau (without replacement); the limit
// cases are the deterministic max/min degree rankings with random tie order.
struct PromotionStrategy {
    enum class Kind { max_degree, min_degree, exponent };

    Kind kind = Kind::exponent;
    double tau = 0.0;       // meaningful for Kind::exponent only
    std::size_t links = 1;  // R, the number of users the new item may reach

    static PromotionStrategy max_degree(std::size_t r = 1) { return {Kind::max_degree, 0.0, r}; }
    static PromotionStrategy min_degree(std::size_t r = 1) { return {Kind::min_degree, 0.0, r}; }
    static PromotionStrategy exponent(double tau, std::size_t r = 1) {
        return {Kind::exponent, tau, r};
    }
    static PromotionStrategy preferential(std::size_t r = 1) { return exponent(1.0, r); }
    static PromotionStrategy uniform(std::size_t r = 1) { return exponent(0.0, r); }

    PromotionStrategy with_links(std::size_t r) const {
        PromotionStrategy s = *this;
        s.links = r;
        return s;
    }

    double tau_value() const {
        switch (kind) {
            case Kind::max_degree: return std::numeric_limits<double>::infinity();
            case Kind::min_degree: return -std::numeric_limits<double>::infinity();
            case Kind::exponent: return tau;
        }
        return tau;
    }

    std::string label() const {
        switch (kind) {
            case Kind::max_degree: return "MaxD";
            case Kind::min_degree: return "MinD";
            case Kind::exponent:
                if (tau == 1.0) return "PA";
                if (tau == 0.0) return "RAN";
                return "TAU";
        }
        return "TAU";
    }
};

// R distinct users under the strategy. Max/min rankings permute equal-degree
// users uniformly at random before the stable sort, so ties are re-drawn on
// every call. Returned indices are sorted ascending.
inline std::vector<std::uint32_t> select_users(const BipartiteNetwork& net,
                                               const PromotionStrategy& strategy, Rng& g) {
    const std::size_t n = net.user_count();
    const std::size_t r = strategy.links;
    if (r < 1 || r > n)
        throw std::invalid_argument("R must satisfy 1 <= R <= user count (R=" + std::to_string(r) +
                                    ", users=" + std::to_string(n) + ")");
    std::vector<std::uint32_t> picked;
    picked.reserve(r);

    if (strategy.kind == PromotionStrategy::Kind::exponent) {
        std::vector<double> weights(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            weights[i] = std::exp(strategy.tau * std::log(static_cast<double>(net.user_degree(i))));
            if (!std::isfinite(weights[i]))
                throw std::invalid_argument("tau too extreme: selection weight overflows");
        }
        WeightedSampler sampler(weights);
        for (std::size_t t = 0; t < r; ++t)
            picked.push_back(static_cast<std::uint32_t>(sampler.draw(g)));
    } else {
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        shuffle_values(order, g);
        const bool descending = strategy.kind == PromotionStrategy::Kind::max_degree;
        std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            return descending ? net.user_degree(a) > net.user_degree(b)
                              : net.user_degree(a) < net.user_degree(b);
        });
        picked.assign(order.begin(), order.begin() + r);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

// Logical augmentation of the base network with one new item linked to the
// given users. The base network is shared, never copied or mutated.
class InjectionView {
public:
    InjectionView(const BipartiteNetwork& base, std::vector<std::uint32_t> users)
        : base_(&base), linked_(std::move(users)), mask_(base.user_count(), 0) {
        if (linked_.empty()) throw std::invalid_argument("injection needs at least one user");
        std::sort(linked_.begin(), linked_.end());
        if (std::adjacent_find(linked_.begin(), linked_.end()) != linked_.end())
            throw std::invalid_argument("duplicate users in injection set");
        if (linked_.back() >= base.user_count())
            throw std::invalid_argument("injection user index out of range");
        for (auto u : linked_) mask_[u] = 1;
    }

    const BipartiteNetwork& base() const { return *base_; }
    const std::vector<std::uint32_t>& linked_users() const { return linked_; }
    bool is_linked(std::uint32_t user) const { return mask_[user] != 0; }
    std::size_t new_item_degree() const { return linked_.size(); }

private:
    const BipartiteNetwork* base_;
    std::vector<std::uint32_t> linked_;
    std::vector<std::uint8_t> mask_;
};

inline InjectionView inject(const BipartiteNetwork& net, std::vector<std::uint32_t> users) {
    return InjectionView(net, std::move(users));
}

// Cosine similarity of the injected item against every existing item, as it
// would appear in a full rebuild: adding the item changes no existing
// co-purchase count and no existing item degree, so the new pairs are the
// only change. Returned sorted by item index.
inline std::vector<std::pair<std::uint32_t, double>> target_similarities(const InjectionView& view) {
    const auto& net = view.base();
    std::vector<std::uint32_t> count(net.item_count(), 0);
    std::vector<std::uint32_t> touched;
    for (std::uint32_t u : view.linked_users()) {
        for (std::uint32_t gamma : net.items_of(u)) {
            if (count[gamma]++ == 0) touched.push_back(gamma);
        }
    }
    std::sort(touched.begin(), touched.end());
    const double r = static_cast<double>(view.new_item_degree());
    std::vector<std::pair<std::uint32_t, double>> result;
    result.reserve(touched.size());
    for (std::uint32_t gamma : touched)
        result.emplace_back(gamma, static_cast<double>(count[gamma]) /
                                       std::sqrt(r * net.item_degree(gamma)));
    return result;
}

// Per-user cutoff for list entry: the L-th largest positive baseline score
// among the user's unpurchased items, 0 when fewer than L positive candidates
// exist. Depends only on (network, L); reused across strategies and
// realizations.
struct UserThresholds {
    std::uint32_t list_length = 0;
    std::vector<double> cutoff;
};

inline UserThresholds compute_thresholds(const BipartiteNetwork& net, const ItemSimilarity& sim,
                                         std::uint32_t list_length, unsigned threads = 1) {
    if (list_length < 1) throw std::invalid_argument("list length must be >= 1");
    const std::size_t n = net.user_count();
    UserThresholds thresholds;
    thresholds.list_length = list_length;
    thresholds.cutoff.assign(n, 0.0);
    if (n == 0) return thresholds;

    const unsigned tc = resolve_thread_count(threads);
    const std::size_t blocks = std::min<std::size_t>(n, static_cast<std::size_t>(tc) * 8);
    const std::size_t block_size = (n + blocks - 1) / blocks;
    parallel_for(blocks, tc, [&](std::size_t blk) {
        detail::DenseAccumulator acc(net.item_count());
        std::vector<std::uint8_t> purchased(net.item_count(), 0);
        std::vector<double> positives;
        const std::size_t begin = blk * block_size;
        const std::size_t end = std::min(n, begin + block_size);
        for (std::uint32_t i = static_cast<std::uint32_t>(begin); i < end; ++i) {
            auto basket = net.items_of(i);
            for (auto gamma : basket) purchased[gamma] = 1;
            for (auto gamma : basket) {
                auto nbrs = sim.neighbors_of(gamma);
                auto vals = sim.values_of(gamma);
                for (std::size_t t = 0; t < nbrs.size(); ++t) acc.add(nbrs[t], vals[t]);
            }
            positives.clear();
            for (auto candidate : acc.touched)
                if (!purchased[candidate] && acc.value[candidate] > 0.0)
                    positives.push_back(acc.value[candidate]);
            if (positives.size() >= list_length) {
                std::nth_element(positives.begin(), positives.begin() + (list_length - 1),
                                 positives.end(), std::greater<double>());
                thresholds.cutoff[i] = positives[list_length - 1];
            }
            acc.reset();
            for (auto gamma : basket) purchased[gamma] = 0;
        }
    });
    return thresholds;
}

struct HitOutcome {
    std::size_t hits = 0;                  // H
    std::vector<std::uint8_t> flags;       // per-user; linked users always 0
};

// Exact incremental evaluation under item-based CF. A non-linked user i gets
// a hit when the injected item's score w(i) = sum over i's basket of
// sim(target, gamma) is positive and strictly exceeds the user's cutoff
// (pessimistic tie rule: the target loses every score tie).
inline HitOutcome evaluate_hits(const InjectionView& view, const UserThresholds& thresholds) {
    const auto& net = view.base();
    const std::size_t n = net.user_count();
    if (thresholds.cutoff.size() != n)
        throw std::invalid_argument("thresholds were built for a different network");

    std::vector<double> score(n, 0.0);
    for (const auto& [gamma, s] : target_similarities(view))
        for (std::uint32_t u : net.users_of(gamma)) score[u] += s;

    HitOutcome out;
    out.flags.assign(n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (view.is_linked(i)) continue;
        if (score[i] > 0.0 && score[i] > thresholds.cutoff[i]) {
            out.flags[i] = 1;
            ++out.hits;
        }
    }
    return out;
}

// Sparse cache for the user-based engine: for each user, the users sharing at
// least one item, with the shared-item count.
struct UserCoNeighbors {
    std::vector<std::uint64_t> offsets;
    std::vector<std::uint32_t> neighbors;  // ascending per user
    std::vector<std::uint32_t> common;

    std::span<const std::uint32_t> neighbors_of(std::uint32_t user) const {
        return {neighbors.data() + offsets[user], neighbors.data() + offsets[user + 1]};
    }
    std::span<const std::uint32_t> common_of(std::uint32_t user) const {
        return {common.data() + offsets[user], common.data() + offsets[user + 1]};
    }
};

inline UserCoNeighbors build_user_co_neighbors(const BipartiteNetwork& net) {
    std::vector<std::uint64_t> keys;
    for (std::uint32_t o = 0; o < net.item_count(); ++o) {
        auto row = net.users_of(o);
        for (std::size_t a = 0; a < row.size(); ++a)
            for (std::size_t b = a + 1; b < row.size(); ++b)
                keys.push_back((static_cast<std::uint64_t>(row[a]) << 32) | row[b]);
    }
    std::sort(keys.begin(), keys.end());

    const std::size_t n = net.user_count();
    std::vector<std::uint32_t> list_sizes(n, 0);
    std::vector<std::pair<std::uint64_t, std::uint32_t>> pairs;
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        pairs.emplace_back(keys[i], static_cast<std::uint32_t>(j - i));
        ++list_sizes[keys[i] >> 32];
        ++list_sizes[keys[i] & 0xFFFFFFFFu];
        i = j;
    }
    UserCoNeighbors co;
    co.offsets.assign(n + 1, 0);
    for (std::size_t u = 0; u < n; ++u) co.offsets[u + 1] = co.offsets[u] + list_sizes[u];
    co.neighbors.resize(co.offsets[n]);
    co.common.resize(co.offsets[n]);
    std::vector<std::uint64_t> cursor(co.offsets.begin(), co.offsets.end() - 1);
    for (const auto& [key, c] : pairs) {
        const std::uint32_t a = static_cast<std::uint32_t>(key >> 32);
        const std::uint32_t b = static_cast<std::uint32_t>(key & 0xFFFFFFFFu);
        co.neighbors[cursor[a]] = b;
        co.common[cursor[a]++] = c;
        co.neighbors[cursor[b]] = a;
        co.common[cursor[b]++] = c;
    }
    return co;
}

// Exact evaluation under user-based CF. Linking the new item raises each
// linked user's degree by one, which rescales every similarity involving a
// linked user, so per-user candidate scores are recomputed against the
// adjusted degrees. Only users sharing an item with a linked user can score
// the target above zero; everyone else is a guaranteed miss.
inline HitOutcome evaluate_hits_ucf(const InjectionView& view, const UserCoNeighbors& co,
                                    std::uint32_t list_length) {
    const auto& net = view.base();
    const std::size_t n = net.user_count();
    HitOutcome out;
    out.flags.assign(n, 0);

    std::vector<std::uint8_t> affected(n, 0);
    std::vector<std::uint32_t> affected_list;
    for (std::uint32_t j : view.linked_users())
        for (std::uint32_t i : co.neighbors_of(j))
            if (!view.is_linked(i) && !affected[i]) {
                affected[i] = 1;
                affected_list.push_back(i);
            }
    std::sort(affected_list.begin(), affected_list.end());

    detail::DenseAccumulator acc(net.item_count());
    std::vector<std::uint8_t> purchased(net.item_count(), 0);
    for (std::uint32_t i : affected_list) {
        auto basket = net.items_of(i);
        for (auto gamma : basket) purchased[gamma] = 1;
        const double ki = net.user_degree(i);
        double target_score = 0.0;
        auto nbrs = co.neighbors_of(i);
        auto cmn = co.common_of(i);
        for (std::size_t t = 0; t < nbrs.size(); ++t) {
            const std::uint32_t j = nbrs[t];
            const bool linked = view.is_linked(j);
            const double kj = static_cast<double>(net.user_degree(j)) + (linked ? 1.0 : 0.0);
            const double s = static_cast<double>(cmn[t]) / std::sqrt(ki * kj);
            if (linked) target_score += s;
            for (std::uint32_t alpha : net.items_of(j))
                if (!purchased[alpha]) acc.add(alpha, s);
        }
        if (target_score > 0.0) {
            std::size_t at_or_above = 0;
            for (auto candidate : acc.touched) {
                const double v = acc.value[candidate];
                if (v > target_score || v == target_score) ++at_or_above;
            }
            if (at_or_above + 1 <= list_length) {
                out.flags[i] = 1;
                ++out.hits;
            }
        }
        acc.reset();
        for (auto gamma : basket) purchased[gamma] = 0;
    }
    return out;
}

struct ExperimentResult {
    PromotionStrategy strategy;
    std::uint32_t list_length = 0;
    std::size_t realizations = 0;
    std::vector<std::size_t> samples;   // per-realization hit counts
    double mean_hits = 0.0;
    double std_hits = 0.0;              // sample standard deviation; 0 for a single realization
    std::uint64_t seed = 0;
    Engine engine = Engine::icf;

    double standard_error() const {
        return realizations > 0 ? std_hits / std::sqrt(static_cast<double>(realizations)) : 0.0;
    }
};

namespace detail {

template <typename EvalFn>
ExperimentResult run_realizations(const BipartiteNetwork& net, const PromotionStrategy& strategy,
                                  std::uint32_t list_length, std::size_t realizations,
                                  std::uint64_t master_seed, unsigned threads, Engine engine,
                                  EvalFn&& eval) {
    if (realizations < 1) throw std::invalid_argument("realizations must be >= 1");
    if (strategy.links < 1 || strategy.links > net.user_count())
        throw std::invalid_argument("R must satisfy 1 <= R <= user count");

    ExperimentResult result;
    result.strategy = strategy;
    result.list_length = list_length;
    result.realizations = realizations;
    result.seed = master_seed;
    result.engine = engine;
    result.samples.assign(realizations, 0);

    // Realization r always uses child seed (master_seed, r); storage by index
    // makes the aggregate independent of scheduling.
    parallel_for(realizations, threads, [&](std::size_t r) {
        Rng g(child_seed(master_seed, r));
        InjectionView view = inject(net, select_users(net, strategy, g));
        const std::size_t h = eval(view);
        if (h > net.user_count() - strategy.links)
            throw std::logic_error("hit count exceeds n - R bound");
        result.samples[r] = h;
    });

    double sum = 0.0;
    for (auto h : result.samples) sum += static_cast<double>(h);
    result.mean_hits = sum / static_cast<double>(realizations);
    if (realizations >= 2) {
        double ss = 0.0;
        for (auto h : result.samples) {
            const double d = static_cast<double>(h) - result.mean_hits;
            ss += d * d;
        }
        result.std_hits = std::sqrt(ss / static_cast<double>(realizations - 1));
    }
    return result;
}

}  // namespace detail

inline ExperimentResult run_experiment(const BipartiteNetwork& net, const UserThresholds& thresholds,
                                       const PromotionStrategy& strategy, std::size_t realizations,
                                       std::uint64_t master_seed, unsigned threads = 1) {
    return detail::run_realizations(net, strategy, thresholds.list_length, realizations, master_seed,
                                    threads, Engine::icf, [&](const InjectionView& view) {
                                        return evaluate_hits(view, thresholds).hits;
                                    });
}

inline ExperimentResult run_experiment_ucf(const BipartiteNetwork& net, const UserCoNeighbors& co,
                                           std::uint32_t list_length, const PromotionStrategy& strategy,
                                           std::size_t realizations, std::uint64_t master_seed,
                                           unsigned threads = 1) {
    return detail::run_realizations(net, strategy, list_length, realizations, master_seed, threads,
                                    Engine::ucf, [&](const InjectionView& view) {
                                        return evaluate_hits_ucf(view, co, list_length).hits;
                                    });
}

struct SweepRequest {
    std::vector<PromotionStrategy> strategies;  // per-cell R comes from link_grid
    std::vector<std::size_t> link_grid;
    std::uint32_t list_length = 6;
    std::size_t realizations = 50;
    std::uint64_t seed = 0;
    Engine engine = Engine::icf;
};

inline std::vector<std::size_t> default_link_grid() {
    std::vector<std::size_t> grid;
    for (int j = 0; j <= 12; ++j) {
        const auto r = static_cast<std::size_t>(std::llround(std::pow(10.0, j * 0.25)));
        if (grid.empty() || grid.back() != r) grid.push_back(r);
    }
    return grid;  // 1,2,3,6,10,18,32,56,100,178,316,562,1000
}

inline std::vector<double> default_tau_grid() {
    std::vector<double> grid;
    for (int t = -8; t <= 8; ++t) grid.push_back(t * 0.5);
    return grid;
}

// Full cross product of strategies and R values. Baseline state (similarity
// and thresholds, or co-neighbor cache) is computed once and shared; each
// cell gets a deterministic seed derived from (request seed, cell index).
inline std::vector<ExperimentResult> sweep(const BipartiteNetwork& net, const SweepRequest& request,
                                           unsigned threads = 1) {
    if (request.strategies.empty() || request.link_grid.empty())
        throw std::invalid_argument("sweep requires nonempty strategy and R grids");
    for (auto r : request.link_grid)
        if (r < 1 || r > net.user_count())
            throw std::invalid_argument("sweep R=" + std::to_string(r) +
                                        " outside [1, n] for n=" + std::to_string(net.user_count()));

    std::vector<ExperimentResult> results;
    results.reserve(request.strategies.size() * request.link_grid.size());
    std::uint64_t cell = 0;

    if (request.engine == Engine::icf) {
        const ItemSimilarity sim = item_similarity(net);
        const UserThresholds thresholds =
            compute_thresholds(net, sim, request.list_length, threads);
        for (const auto& proto : request.strategies)
            for (auto r : request.link_grid)
                results.push_back(run_experiment(net, thresholds, proto.with_links(r),
                                                 request.realizations,
                                                 child_seed(request.seed, cell++), threads));
    } else {
        const UserCoNeighbors co = build_user_co_neighbors(net);
        for (const auto& proto : request.strategies)
            for (auto r : request.link_grid)
                results.push_back(run_experiment_ucf(net, co, request.list_length,
                                                     proto.with_links(r), request.realizations,
                                                     child_seed(request.seed, cell++), threads));
    }
    return results;
}

}  // namespace coldstart
