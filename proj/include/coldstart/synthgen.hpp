#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "coldstart/bipartite.hpp"
#include "coldstart/netstats.hpp"
#include "coldstart/nullmodel.hpp"
#include "coldstart/rng.hpp"

namespace coldstart {

// Heavy-tailed degree sampler: a continuous power-law variate on
// [k_min - 1/2, k_max + 1/2) rounded to the nearest integer. This is the
// generative counterpart of the (k_min - 1/2)-shifted exponent MLE, so fitted
// exponents recover planted ones; P(k) follows k^(-exponent) exactly in the
// tail and up to O(k^-2) relative error at small k. k_max == 0 means
// unbounded support, which requires exponent > 1 to normalize.
class PowerLawSampler {
public:
    PowerLawSampler(double exponent, std::uint32_t k_min, std::uint32_t k_max)
        : exponent_(exponent), k_min_(k_min), k_max_(k_max) {
        if (k_min < 1) throw std::invalid_argument("k_min must be >= 1");
        if (k_max != 0 && k_max < k_min) throw std::invalid_argument("k_max must be >= k_min");
        if (k_max == 0 && exponent <= 1.0)
            throw std::invalid_argument("non-normalizable: exponent <= 1 with unbounded k_max");
        lower_ = static_cast<double>(k_min) - 0.5;
        upper_ = k_max == 0 ? std::numeric_limits<double>::infinity()
                            : static_cast<double>(k_max) + 0.5;
        if (exponent_ != 1.0) {
            pow_lower_ = std::pow(lower_, 1.0 - exponent_);
            pow_upper_ = k_max == 0 ? 0.0 : std::pow(upper_, 1.0 - exponent_);
        }
    }

    std::uint32_t sample(Rng& g) const {
        const double u = uniform_unit(g);
        double x;
        if (exponent_ == 1.0) {
            x = lower_ * std::exp(u * std::log(upper_ / lower_));
        } else {
            x = std::pow(pow_lower_ - u * (pow_lower_ - pow_upper_), 1.0 / (1.0 - exponent_));
        }
        // Round to the nearest integer and clamp away boundary artifacts.
        double k = std::floor(x + 0.5);
        if (k < k_min_) k = k_min_;
        const double cap = k_max_ == 0 ? 4294967295.0 : static_cast<double>(k_max_);
        if (k > cap) k = cap;
        return static_cast<std::uint32_t>(k);
    }

    // Exact pmf of the sampler (mass of the rounding cell [k-1/2, k+1/2)).
    double probability(std::uint32_t k) const {
        if (k < k_min_ || (k_max_ != 0 && k > k_max_)) return 0.0;
        const double lo = static_cast<double>(k) - 0.5;
        const double hi = std::min(static_cast<double>(k) + 0.5, upper_);
        if (exponent_ == 1.0)
            return std::log(hi / lo) / std::log(upper_ / lower_);
        const double z = pow_lower_ - pow_upper_;
        return (std::pow(lo, 1.0 - exponent_) - std::pow(hi, 1.0 - exponent_)) / z;
    }

private:
    double exponent_;
    std::uint32_t k_min_, k_max_;
    double lower_ = 0.5, upper_ = 1.5;
    double pow_lower_ = 1.0, pow_upper_ = 0.0;
};

inline std::vector<std::uint32_t> sample_degree_sequence(std::size_t count, double exponent,
                                                         std::uint32_t k_min, std::uint32_t k_max,
                                                         std::uint64_t seed) {
    const PowerLawSampler sampler(exponent, k_min, k_max);
    Rng g(seed);
    std::vector<std::uint32_t> out(count);
    for (auto& k : out) k = sampler.sample(g);
    return out;
}

// Makes the two degree sums equal by repeatedly decrementing the current
// largest degree on the heavier side. Returns the number of decrements.
inline std::size_t balance_degree_sums(std::vector<std::uint32_t>& user_degrees,
                                       std::vector<std::uint32_t>& item_degrees) {
    auto total = [](const std::vector<std::uint32_t>& v) {
        std::uint64_t s = 0;
        for (auto d : v) s += d;
        return s;
    };
    std::uint64_t su = total(user_degrees);
    std::uint64_t so = total(item_degrees);
    if (su == so) return 0;
    auto& heavy = su > so ? user_degrees : item_degrees;
    std::uint64_t excess = su > so ? su - so : so - su;

    std::priority_queue<std::pair<std::uint32_t, std::size_t>> heap;
    for (std::size_t i = 0; i < heavy.size(); ++i) heap.emplace(heavy[i], i);
    std::size_t decrements = 0;
    while (excess > 0) {
        auto [d, i] = heap.top();
        heap.pop();
        if (d <= 1) throw std::runtime_error("cannot balance degree sequences without emptying a node");
        heavy[i] = d - 1;
        heap.emplace(d - 1, i);
        --excess;
        ++decrements;
    }
    return decrements;
}

// Bipartite configuration model: uniform stub matching followed by repair of
// duplicate pairs through link-crossing swaps anchored at colliding edges.
// Realizes both degree sequences exactly; throws "unrealizable sequence" when
// the repair budget (10w attempts) cannot remove all collisions.
inline BipartiteNetwork configuration_model(const std::vector<std::uint32_t>& user_degrees,
                                            const std::vector<std::uint32_t>& item_degrees,
                                            std::uint64_t seed) {
    std::uint64_t su = 0, so = 0;
    for (auto d : user_degrees) {
        if (d == 0) throw std::invalid_argument("configuration model requires degrees >= 1");
        su += d;
    }
    for (auto d : item_degrees) {
        if (d == 0) throw std::invalid_argument("configuration model requires degrees >= 1");
        so += d;
    }
    if (su != so) throw std::invalid_argument("degree sums differ between sides");
    const std::size_t w = static_cast<std::size_t>(su);

    std::vector<std::uint32_t> user_stubs, item_stubs;
    user_stubs.reserve(w);
    item_stubs.reserve(w);
    for (std::uint32_t u = 0; u < user_degrees.size(); ++u)
        user_stubs.insert(user_stubs.end(), user_degrees[u], u);
    for (std::uint32_t o = 0; o < item_degrees.size(); ++o)
        item_stubs.insert(item_stubs.end(), item_degrees[o], o);

    Rng g(seed);
    shuffle_values(item_stubs, g);

    std::vector<Edge> edges(w);
    std::unordered_map<std::uint64_t, std::uint32_t> multiplicity;
    multiplicity.reserve(w * 2);
    for (std::size_t t = 0; t < w; ++t) {
        edges[t] = {user_stubs[t], item_stubs[t]};
        ++multiplicity[detail::edge_key(user_stubs[t], item_stubs[t])];
    }

    auto collect_collisions = [&]() {
        std::vector<std::size_t> idx;
        for (std::size_t t = 0; t < w; ++t)
            if (multiplicity[detail::edge_key(edges[t].first, edges[t].second)] > 1) idx.push_back(t);
        return idx;
    };

    std::vector<std::size_t> colliding = collect_collisions();
    const std::uint64_t budget = 10 * static_cast<std::uint64_t>(w);
    std::uint64_t spent = 0;
    while (!colliding.empty()) {
        // Drop entries resolved by earlier swaps before proposing anything.
        std::size_t live = 0;
        for (std::size_t t : colliding)
            if (multiplicity[detail::edge_key(edges[t].first, edges[t].second)] > 1)
                colliding[live++] = t;
        colliding.resize(live);
        if (colliding.empty()) break;
        if (spent >= budget)
            throw std::runtime_error("unrealizable sequence: duplicate edges remain after repair budget");

        const std::size_t d = colliding[uniform_index(g, colliding.size())];
        const std::size_t e = static_cast<std::size_t>(uniform_index(g, w));
        ++spent;
        auto [u1, o1] = edges[d];
        auto [u2, o2] = edges[e];
        if (u1 == u2 || o1 == o2) continue;
        if (multiplicity.count(detail::edge_key(u1, o2)) && multiplicity[detail::edge_key(u1, o2)] > 0)
            continue;
        if (multiplicity.count(detail::edge_key(u2, o1)) && multiplicity[detail::edge_key(u2, o1)] > 0)
            continue;
        --multiplicity[detail::edge_key(u1, o1)];
        --multiplicity[detail::edge_key(u2, o2)];
        ++multiplicity[detail::edge_key(u1, o2)];
        ++multiplicity[detail::edge_key(u2, o1)];
        edges[d] = {u1, o2};
        edges[e] = {u2, o1};
        if (multiplicity[detail::edge_key(u2, o1)] > 1) colliding.push_back(e);
        if (colliding.empty()) colliding = collect_collisions();
    }

    return BipartiteNetwork::from_edges(user_degrees.size(), item_degrees.size(), std::move(edges));
}

enum class AssortativityTarget { negative, positive };

struct TuneReport {
    std::uint64_t attempts = 0;
    std::uint64_t accepted = 0;
    std::optional<double> correlation_before;
    std::optional<double> correlation_after;
};

// Greedy constrained reshuffle: proposes link-crossing swaps and accepts only
// those moving the edge-wise degree correlation toward the target sign. Both
// degree sequences are untouched by construction, so only the cross moment
// sum(k_u * k_o) over edges changes; a swap of (i,a),(j,b) shifts it by
// (k_i - k_j) * (k_b - k_a).
inline std::pair<BipartiteNetwork, TuneReport> tune_assortativity(const BipartiteNetwork& net,
                                                                  AssortativityTarget target,
                                                                  std::uint64_t swap_budget,
                                                                  std::uint64_t seed,
                                                                  double stop_magnitude = 0.0) {
    TuneReport report;
    report.correlation_before = edge_degree_correlation(net);

    auto edges = net.edge_list();
    const std::size_t w = edges.size();
    if (w < 2 || swap_budget == 0) {
        report.correlation_after = report.correlation_before;
        return {BipartiteNetwork::from_edges(net.user_count(), net.item_count(), std::move(edges),
                                             net.ids(Side::user), net.ids(Side::item)),
                report};
    }

    std::unordered_set<std::uint64_t> present;
    present.reserve(w * 2);
    for (const auto& [u, o] : edges) present.insert(detail::edge_key(u, o));

    // Moments of endpoint degrees over edges; all but sxy are swap-invariant.
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (const auto& [u, o] : edges) {
        const double x = net.user_degree(u);
        const double y = net.item_degree(o);
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    const double dw = static_cast<double>(w);
    const double var = (dw * sxx - sx * sx) * (dw * syy - sy * sy);
    auto correlation = [&](double cross) -> std::optional<double> {
        if (var <= 0.0) return std::nullopt;
        return (dw * cross - sx * sy) / std::sqrt(var);
    };

    Rng g(seed);
    for (std::uint64_t step = 0; step < swap_budget; ++step) {
        ++report.attempts;
        const std::size_t e1 = static_cast<std::size_t>(uniform_index(g, w));
        std::size_t e2 = static_cast<std::size_t>(uniform_index(g, w - 1));
        if (e2 >= e1) ++e2;
        auto [u1, o1] = edges[e1];
        auto [u2, o2] = edges[e2];
        if (u1 == u2 || o1 == o2) continue;
        const double delta =
            (static_cast<double>(net.user_degree(u1)) - net.user_degree(u2)) *
            (static_cast<double>(net.item_degree(o2)) - net.item_degree(o1));
        const bool improves = target == AssortativityTarget::negative ? delta < 0.0 : delta > 0.0;
        if (!improves) continue;
        if (present.count(detail::edge_key(u1, o2)) || present.count(detail::edge_key(u2, o1)))
            continue;
        present.erase(detail::edge_key(u1, o1));
        present.erase(detail::edge_key(u2, o2));
        present.insert(detail::edge_key(u1, o2));
        present.insert(detail::edge_key(u2, o1));
        edges[e1] = {u1, o2};
        edges[e2] = {u2, o1};
        sxy += delta;
        ++report.accepted;
        if (stop_magnitude > 0.0) {
            auto c = correlation(sxy);
            if (c && std::abs(*c) >= stop_magnitude) break;
        }
    }

    report.correlation_after = correlation(sxy);
    auto result = BipartiteNetwork::from_edges(net.user_count(), net.item_count(), std::move(edges),
                                               net.ids(Side::user), net.ids(Side::item));
    return {std::move(result), report};
}

struct GeneratorConfig {
    std::size_t user_count = 10000;
    std::size_t item_count = 5000;
    double user_exponent = 2.5;
    double item_exponent = 2.2;
    std::uint32_t user_k_min = 1;
    std::uint32_t user_k_max = 1000;
    std::uint32_t item_k_min = 1;
    std::uint32_t item_k_max = 1000;
    std::optional<AssortativityTarget> target;  // nullopt: leave the configuration model as is
    double target_magnitude = 0.0;              // early-stop |correlation|; 0 runs the full budget
    std::uint64_t tuning_swap_budget = 0;       // 0: defaults to 10w
    std::uint64_t seed = 0;

    void validate() const {
        if (user_count < 2 || item_count < 2) throw std::invalid_argument("counts must be >= 2");
        if (user_exponent <= 1.0 || item_exponent <= 1.0)
            throw std::invalid_argument("exponents must be > 1");
        if (user_k_min < 1 || user_k_max < user_k_min || item_k_min < 1 || item_k_max < item_k_min)
            throw std::invalid_argument("degree bounds must satisfy 1 <= k_min <= k_max");
        if (user_k_max > item_count || item_k_max > user_count)
            throw std::invalid_argument("k_max may not exceed the opposite side's node count");
    }
};

struct GenerationResult {
    BipartiteNetwork network;
    std::size_t balance_decrements = 0;
    TuneReport tune;
    std::optional<double> correlation;  // of the final network
    std::uint64_t seed = 0;
};

inline GenerationResult generate(const GeneratorConfig& config) {
    config.validate();
    GenerationResult result;
    result.seed = config.seed;

    auto user_degrees = sample_degree_sequence(config.user_count, config.user_exponent,
                                               config.user_k_min, config.user_k_max,
                                               child_seed(config.seed, 0));
    auto item_degrees = sample_degree_sequence(config.item_count, config.item_exponent,
                                               config.item_k_min, config.item_k_max,
                                               child_seed(config.seed, 1));
    result.balance_decrements = balance_degree_sums(user_degrees, item_degrees);
    BipartiteNetwork net = configuration_model(user_degrees, item_degrees, child_seed(config.seed, 2));

    if (config.target) {
        std::uint64_t budget = config.tuning_swap_budget;
        if (budget == 0) budget = 10 * static_cast<std::uint64_t>(net.link_count());
        auto [tuned, tune_report] = tune_assortativity(net, *config.target, budget,
                                                       child_seed(config.seed, 3),
                                                       config.target_magnitude);
        net = std::move(tuned);
        result.tune = tune_report;
    }
    result.correlation = edge_degree_correlation(net);
    result.network = std::move(net);
    return result;
}

}  // namespace coldstart
