// Minimal end-to-end walkthrough on a five-edge toy network: build the
// similarity matrix, inject a new item through the two limit strategies and
// print how many other users would see it in a length-1 list.

#include <iostream>
#include <sstream>

#include "coldstart/bipartite.hpp"
#include "coldstart/promotion.hpp"
#include "coldstart/recsys.hpp"

int main() {
    std::istringstream edges(
        "u1 o1\n"
        "u1 o2\n"
        "u2 o1\n"
        "u2 o3\n"
        "u3 o2\n");
    const auto net = coldstart::ingest_edge_list(edges);
    std::cout << "network: " << net.user_count() << " users, " << net.item_count()
              << " items, " << net.link_count() << " links\n";

    const auto sim = coldstart::item_similarity(net);
    std::cout << "sim(o1,o2) = " << sim.value(0, 1) << "\n";

    const auto thresholds = coldstart::compute_thresholds(net, sim, /*list_length=*/1);
    coldstart::Rng g(42);
    for (auto strategy : {coldstart::PromotionStrategy::min_degree(1),
                          coldstart::PromotionStrategy::max_degree(1)}) {
        const auto users = coldstart::select_users(net, strategy, g);
        const auto view = coldstart::inject(net, users);
        const auto outcome = coldstart::evaluate_hits(view, thresholds);
        std::cout << strategy.label() << " linked user " << net.ids(coldstart::Side::user)[users[0]]
                  << " -> H = " << outcome.hits << "\n";
    }
    return 0;
}
