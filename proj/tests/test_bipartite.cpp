#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "coldstart/bipartite.hpp"
#include "oracle.hpp"

using namespace coldstart;

namespace {

const char* kFixture =
    "u1 o1\n"
    "u1 o2\n"
    "u2 o1\n"
    "u2 o3\n"
    "u3 o2\n";

BipartiteNetwork fixture() {
    std::istringstream in(kFixture);
    return ingest_edge_list(in);
}

}  // namespace

TEST_CASE("ingest assigns dense indices by first appearance") {
    const auto net = fixture();
    CHECK(net.user_count() == 3);
    CHECK(net.item_count() == 3);
    CHECK(net.link_count() == 5);
    CHECK(net.ids(Side::user) == std::vector<std::string>{"u1", "u2", "u3"});
    CHECK(net.ids(Side::item) == std::vector<std::string>{"o1", "o2", "o3"});
    CHECK(net.has_edge(0, 0));
    CHECK(net.has_edge(2, 1));
    CHECK_FALSE(net.has_edge(2, 0));
}

TEST_CASE("ingest collapses duplicate edges with a count") {
    std::istringstream in(std::string(kFixture) + "u1 o1\n");
    std::size_t duplicates = 0;
    const auto net = ingest_edge_list(in, &duplicates);
    CHECK(net.link_count() == 5);
    CHECK(duplicates == 1);
}

TEST_CASE("ingest skips blanks and comments, rejects malformed lines") {
    SECTION("comments and blank lines") {
        std::istringstream in("# header\n\nu1 o1\n  # indented comment\nu2 o1\n");
        const auto net = ingest_edge_list(in);
        CHECK(net.link_count() == 2);
    }
    SECTION("single token") {
        std::istringstream in("u1 o1\nu1\n");
        CHECK_THROWS_WITH(ingest_edge_list(in), Catch::Matchers::ContainsSubstring("line 2"));
    }
    SECTION("three tokens") {
        std::istringstream in("u1 o1 extra\n");
        CHECK_THROWS_WITH(ingest_edge_list(in), Catch::Matchers::ContainsSubstring("line 1"));
    }
    SECTION("empty edge set") {
        std::istringstream in("# nothing here\n");
        CHECK_THROWS_WITH(ingest_edge_list(in), Catch::Matchers::ContainsSubstring("empty network"));
    }
}

TEST_CASE("degree sequences and handshake identity") {
    const auto net = fixture();
    const auto du = net.degrees(Side::user);
    const auto di = net.degrees(Side::item);
    CHECK(std::vector<std::uint32_t>(du.begin(), du.end()) == std::vector<std::uint32_t>{2, 2, 1});
    CHECK(std::vector<std::uint32_t>(di.begin(), di.end()) == std::vector<std::uint32_t>{2, 2, 1});

    Rng g(7);
    for (int trial = 0; trial < 25; ++trial) {
        const auto random_net = oracle::random_network(g);
        std::uint64_t su = 0, so = 0;
        for (auto d : random_net.degrees(Side::user)) su += d;
        for (auto d : random_net.degrees(Side::item)) so += d;
        REQUIRE(su == random_net.link_count());
        REQUIRE(so == random_net.link_count());
    }
}

TEST_CASE("validate passes on well-formed networks") {
    const auto report = validate(fixture());
    CHECK(report.ok());

    Rng g(11);
    for (int trial = 0; trial < 10; ++trial) REQUIRE(validate(oracle::random_network(g)).ok());
}

TEST_CASE("validate flags broken instances") {
    SECTION("inconsistent transpose views") {
        // user view says (0,0); item view says item 0 is linked to user 1
        auto net = BipartiteNetwork::from_adjacency({{0}, {}}, {{1}});
        const auto report = validate(net);
        CHECK_FALSE(report.ok());
        CHECK_FALSE(report.check("transpose_consistent").passed);
    }
    SECTION("degree-0 item") {
        auto net = BipartiteNetwork::from_adjacency({{0}}, {{0}, {}});
        const auto report = validate(net);
        CHECK_FALSE(report.ok());
        CHECK_FALSE(report.check("min_degree").passed);
        CHECK(report.check("min_degree").detail.find("1") != std::string::npos);
    }
    SECTION("unsorted adjacency row") {
        auto net = BipartiteNetwork::from_adjacency({{1, 0}}, {{0}, {0}});
        CHECK_FALSE(validate(net).check("sorted_adjacency").passed);
    }
}

TEST_CASE("from_edges rejects bad input") {
    CHECK_THROWS_AS(BipartiteNetwork::from_edges(2, 2, {{0, 0}, {0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(BipartiteNetwork::from_edges(2, 2, {{0, 5}}), std::invalid_argument);
}

TEST_CASE("writer emits edges sorted by dense index pair") {
    const auto net = fixture();
    std::ostringstream out;
    write_edge_list(net, out);
    CHECK(out.str() ==
          "u1\to1\n"
          "u1\to2\n"
          "u2\to1\n"
          "u2\to3\n"
          "u3\to2\n");
}

TEST_CASE("round-trip through edge list and mapping files is exact") {
    Rng g(13);
    for (int trial = 0; trial < 20; ++trial) {
        const auto net = oracle::random_network(g);

        std::ostringstream edges_out, users_out, items_out;
        write_edge_list(net, edges_out);
        write_mapping(net, Side::user, users_out);
        write_mapping(net, Side::item, items_out);

        std::istringstream users_in(users_out.str()), items_in(items_out.str());
        const auto user_ids = read_mapping(users_in);
        const auto item_ids = read_mapping(items_in);
        REQUIRE(user_ids == net.ids(Side::user));
        REQUIRE(item_ids == net.ids(Side::item));

        std::istringstream edges_in(edges_out.str());
        const auto reloaded = ingest_edge_list(edges_in, user_ids, item_ids);
        REQUIRE(reloaded.edge_list() == net.edge_list());
        REQUIRE(reloaded.ids(Side::user) == net.ids(Side::user));
        REQUIRE(reloaded.ids(Side::item) == net.ids(Side::item));

        // Without pinned mappings the dense numbering may differ, but the edge
        // set in external-id space must be identical.
        std::istringstream edges_again(edges_out.str());
        const auto renumbered = ingest_edge_list(edges_again);
        auto external = [](const BipartiteNetwork& x) {
            std::vector<std::pair<std::string, std::string>> out;
            for (const auto& [u, o] : x.edge_list())
                out.emplace_back(x.ids(Side::user)[u], x.ids(Side::item)[o]);
            std::sort(out.begin(), out.end());
            return out;
        };
        REQUIRE(external(renumbered) == external(net));
    }
}
