#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "coldstart/netstats.hpp"
#include "coldstart/synthgen.hpp"

using namespace coldstart;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<std::uint32_t> sorted_copy(std::span<const std::uint32_t> v) {
    std::vector<std::uint32_t> out(v.begin(), v.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("degree sampling") {
    SECTION("degenerate support yields a constant sequence") {
        const auto seq = sample_degree_sequence(100, 2.5, 7, 7, 1);
        CHECK(std::all_of(seq.begin(), seq.end(), [](auto k) { return k == 7; }));
    }
    SECTION("unbounded support requires exponent > 1") {
        CHECK_THROWS_WITH(sample_degree_sequence(10, 1.0, 1, 0, 1),
                          Catch::Matchers::ContainsSubstring("non-normalizable"));
        CHECK_NOTHROW(sample_degree_sequence(10, 2.5, 1, 0, 1));
    }
    SECTION("values stay inside the requested bounds") {
        const auto seq = sample_degree_sequence(5000, 2.2, 2, 40, 17);
        for (auto k : seq) {
            REQUIRE(k >= 2);
            REQUIRE(k <= 40);
        }
    }
    SECTION("empirical mean within three standard errors of the analytic mean") {
        // pmf of the rounding cell [k-1/2, k+1/2) under the truncated
        // continuous power law, written out independently of the sampler
        const double exponent = 2.5;
        const std::uint32_t k_min = 1, k_max = 1000;
        const double lo = k_min - 0.5, hi = k_max + 0.5;
        const double z = std::pow(lo, 1 - exponent) - std::pow(hi, 1 - exponent);
        auto pmf = [&](std::uint32_t k) {
            return (std::pow(k - 0.5, 1 - exponent) - std::pow(k + 0.5, 1 - exponent)) / z;
        };
        double mean = 0, second = 0;
        for (std::uint32_t k = k_min; k <= k_max; ++k) {
            const double p = pmf(k);
            mean += k * p;
            second += static_cast<double>(k) * k * p;
        }
        const double var = second - mean * mean;

        const std::size_t count = 100000;
        const auto seq = sample_degree_sequence(count, exponent, k_min, k_max, 2024);
        double sample_mean = 0;
        for (auto k : seq) sample_mean += k;
        sample_mean /= static_cast<double>(count);
        CHECK_THAT(sample_mean, WithinAbs(mean, 3.0 * std::sqrt(var / count)));
    }
    SECTION("sampling is deterministic under a fixed seed") {
        CHECK(sample_degree_sequence(1000, 2.5, 1, 100, 5) ==
              sample_degree_sequence(1000, 2.5, 1, 100, 5));
    }
}

TEST_CASE("degree sum balancing") {
    SECTION("decrements the largest degrees on the heavier side") {
        std::vector<std::uint32_t> users{5, 3, 1};  // sum 9
        std::vector<std::uint32_t> items{2, 2, 2};  // sum 6
        const auto steps = balance_degree_sums(users, items);
        CHECK(steps == 3);
        std::uint64_t su = 0, so = 0;
        for (auto d : users) su += d;
        for (auto d : items) so += d;
        CHECK(su == so);
        CHECK(*std::max_element(users.begin(), users.end()) <= 5);
    }
    SECTION("throws when balancing would empty a node") {
        std::vector<std::uint32_t> users{1, 1, 1};
        std::vector<std::uint32_t> items{1};
        CHECK_THROWS_AS(balance_degree_sums(users, items), std::runtime_error);
    }
}

TEST_CASE("configuration model") {
    SECTION("two degree-1 pairs form a perfect matching") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto net = configuration_model({1, 1}, {1, 1}, seed);
            REQUIRE(net.link_count() == 2);
            REQUIRE(validate(net).ok());
            const auto edges = net.edge_list();
            const bool straight = edges == std::vector<Edge>{{0, 0}, {1, 1}};
            const bool crossed = edges == std::vector<Edge>{{0, 1}, {1, 0}};
            REQUIRE((straight || crossed));
        }
    }
    SECTION("realizes the requested degree sequences exactly") {
        auto user_deg = sample_degree_sequence(800, 2.5, 1, 60, 91);
        auto item_deg = sample_degree_sequence(400, 2.2, 1, 60, 92);
        balance_degree_sums(user_deg, item_deg);
        const auto net = configuration_model(user_deg, item_deg, 93);
        REQUIRE(validate(net).ok());
        auto expect_u = user_deg, expect_o = item_deg;
        std::sort(expect_u.begin(), expect_u.end());
        std::sort(expect_o.begin(), expect_o.end());
        CHECK(sorted_copy(net.degrees(Side::user)) == expect_u);
        CHECK(sorted_copy(net.degrees(Side::item)) == expect_o);
    }
    SECTION("rejects mismatched sums and zero degrees") {
        CHECK_THROWS_AS(configuration_model({2, 1}, {1, 1}, 1), std::invalid_argument);
        CHECK_THROWS_AS(configuration_model({0, 2}, {1, 1}, 1), std::invalid_argument);
    }
    SECTION("stub matching output has a near-flat knn curve") {
        auto user_deg = sample_degree_sequence(2000, 2.5, 1, 100, 7);
        auto item_deg = sample_degree_sequence(1500, 2.2, 1, 100, 8);
        balance_degree_sums(user_deg, item_deg);
        const auto net = configuration_model(user_deg, item_deg, 9);
        const auto corr = edge_degree_correlation(net);
        REQUIRE(corr.has_value());
        CHECK(std::abs(*corr) < 0.1);
    }
}

TEST_CASE("assortativity tuning") {
    GeneratorConfig config;
    config.user_count = 2000;
    config.item_count = 1500;
    config.user_k_max = 150;
    config.item_k_max = 150;
    config.target.reset();
    config.seed = 2000;
    const auto base = generate(config).network;
    const auto base_corr = edge_degree_correlation(base);
    REQUIRE(base_corr.has_value());

    SECTION("zero budget returns the network unchanged") {
        const auto [tuned, report] = tune_assortativity(base, AssortativityTarget::negative, 0, 1);
        CHECK(tuned.edge_list() == base.edge_list());
        CHECK(report.accepted == 0);
    }
    SECTION("negative target strictly lowers the correlation, preserving degrees") {
        const auto [tuned, report] = tune_assortativity(
            base, AssortativityTarget::negative, 10 * base.link_count(), 77);
        REQUIRE(validate(tuned).ok());
        CHECK(sorted_copy(tuned.degrees(Side::user)) == sorted_copy(base.degrees(Side::user)));
        CHECK(sorted_copy(tuned.degrees(Side::item)) == sorted_copy(base.degrees(Side::item)));
        const auto corr = edge_degree_correlation(tuned);
        REQUIRE(corr.has_value());
        CHECK(*corr < *base_corr);
        CHECK(*report.correlation_after < *report.correlation_before);

        SECTION("mean neighbor degree trends downward over logarithmic degree bins") {
            const auto profile = knn_by_degree(tuned, Side::user);
            std::vector<double> bin_sum(32, 0.0);
            std::vector<double> bin_weight(32, 0.0);
            std::size_t top_bin = 0;
            for (std::size_t i = 0; i < profile.degree.size(); ++i) {
                std::size_t bin = 0;
                while ((1u << (bin + 1)) <= profile.degree[i]) ++bin;
                bin_sum[bin] += profile.mean_neighbor_degree[i] * profile.count[i];
                bin_weight[bin] += static_cast<double>(profile.count[i]);
                top_bin = std::max(top_bin, bin);
            }
            double previous = std::numeric_limits<double>::infinity();
            for (std::size_t bin = 0; bin <= top_bin; ++bin) {
                if (bin_weight[bin] == 0.0) continue;
                const double mean = bin_sum[bin] / bin_weight[bin];
                REQUIRE(mean < previous);
                previous = mean;
            }
        }
    }
    SECTION("positive target raises the correlation") {
        const auto [tuned, report] = tune_assortativity(
            base, AssortativityTarget::positive, 10 * base.link_count(), 78);
        const auto corr = edge_degree_correlation(tuned);
        REQUIRE(corr.has_value());
        CHECK(*corr > *base_corr);
        (void)report;
    }
    SECTION("early stop once the magnitude target is reached") {
        const auto [tuned, report] = tune_assortativity(
            base, AssortativityTarget::negative, 10 * base.link_count(), 79, 0.05);
        REQUIRE(report.correlation_after.has_value());
        CHECK(*report.correlation_after <= -0.05);
        CHECK(report.attempts < 10 * base.link_count());
        (void)tuned;
    }
}

TEST_CASE("generation pipeline") {
    GeneratorConfig config;
    config.user_count = 500;
    config.item_count = 400;
    config.user_k_max = 60;
    config.item_k_max = 60;
    config.target = AssortativityTarget::negative;
    config.seed = 424242;

    const auto a = generate(config);
    REQUIRE(validate(a.network).ok());
    REQUIRE(a.correlation.has_value());
    CHECK(*a.correlation < 0.0);

    SECTION("deterministic under the seed") {
        const auto b = generate(config);
        CHECK(a.network.edge_list() == b.network.edge_list());
    }
    SECTION("config validation") {
        GeneratorConfig bad = config;
        bad.user_exponent = 1.0;
        CHECK_THROWS_AS(generate(bad), std::invalid_argument);
        bad = config;
        bad.user_k_max = 10000;  // exceeds the item count
        CHECK_THROWS_AS(generate(bad), std::invalid_argument);
        bad = config;
        bad.item_k_min = 0;
        CHECK_THROWS_AS(generate(bad), std::invalid_argument);
    }
}
